#include <fstream>
#include <numbers>
#include <set>

#include "../oracles/gradcheck.hpp"
#include "helpers.hpp"
#include "pcg/checkpoint.hpp"
#include "pcg/model.hpp"
#include "pcg/train.hpp"

using namespace pcg;
using namespace pcg::model;

namespace {

ModelConfig toy_config() {
    ModelConfig c;
    c.in_channels = 6;
    c.channels = 8;
    c.heads = 2;
    c.ffn = 8;
    c.block1 = 1;
    c.block2 = 1;
    c.fc_hidden = 8;
    return c;
}

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("conv1d worked examples") {
    Conv1d conv("c", 1, 1, 3);
    Matrix x = Matrix::Zero(1, 7);
    x(0, 3) = 1.0;
    conv.weight.value << 0.0, 1.0, 0.0;
    conv.bias.value.setZero();
    CHECK(conv.forward(x, 1) == x);
    conv.weight.value << 1.0, 1.0, 1.0;
    Matrix want(1, 7);
    want << 0, 0, 1, 1, 1, 0, 0;
    CHECK(conv.forward(x, 1) == want);
    conv.weight.value.setZero();
    conv.bias.value(0) = 0.7;
    CHECK((conv.forward(random_matrix(1, 7, 1), 1).array() == 0.7).all());
    // samples in a batch do not bleed into each other through the padding
    Conv1d wide("w", 1, 1, 3);
    wide.weight.value << 1.0, 1.0, 1.0;
    wide.bias.value.setZero();
    Matrix two = Matrix::Zero(1, 8);
    two(0, 3) = 1.0;
    const Matrix y = wide.forward(two, 2);
    CHECK(y(0, 4) == 0.0);
    CHECK_ERRC(wide.forward(Matrix::Zero(2, 8), 2), Errc::ShapeMismatch);
}

TEST_CASE("batch norm") {
    BatchNorm1d bn("bn", 3);
    const Matrix x = random_matrix(3, 40, 2) * 2.0 + Matrix::Constant(3, 40, 5.0);
    const Matrix y = bn.forward(x, 4, Mode::Train);
    for (int c = 0; c < 3; ++c) {
        const double mean = y.row(c).mean();
        const double var = (y.row(c).array() - mean).square().mean();
        CHECK(std::abs(mean) < 1e-12);
        CHECK(var == doctest::Approx(1.0).epsilon(1e-4));
    }
    bn.gamma.value.setZero();
    bn.beta.value << 1.0, 2.0, 3.0;
    const Matrix z = bn.forward(x, 4, Mode::Train);
    for (int c = 0; c < 3; ++c) CHECK((z.row(c).array() == c + 1.0).all());
    CHECK_ERRC(bn.forward(x, 1, Mode::Train), Errc::DegenerateBatch);
    CHECK_NOTHROW(bn.forward(x, 1, Mode::Eval));

    BatchNorm1d fresh("f", 3);
    const Matrix norm = (random_matrix(3, 4000, 3).array()).matrix();
    const Matrix out = fresh.forward(norm, 40, Mode::Eval);
    CHECK((out - norm / std::sqrt(1.0 + 1e-5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("positional encoding") {
    const Matrix pe = positional_encoding(64, 32, 10000.0);
    for (int i = 0; i < 16; ++i) {
        CHECK(pe(0, 2 * i) == 0.0);
        CHECK(pe(0, 2 * i + 1) == 1.0);
    }
    CHECK(pe(1, 0) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
    CHECK(pe(1, 0) == doctest::Approx(0.8415).epsilon(1e-4));
    CHECK(pe(3, 5) == doctest::Approx(std::cos(3.0 / std::pow(10000.0, 4.0 / 32.0))).epsilon(1e-15));
    const Matrix big = positional_encoding(2000, 32, 10000.0);
    for (int a = 0; a < 2000; a += 7)
        for (int b = a + 1; b < 2000; ++b) CHECK_FALSE((big.row(a) - big.row(b)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("transformer attention examples") {
    TransformerLayer t("t", 4, 2, 4, 0.0);
    Rng rng(3);
    t.init(rng);
    const Matrix x1 = random_matrix(4, 1, 4);
    t.forward(x1, 1, Mode::Eval, nullptr);
    CHECK(t.attention()[0](0, 0) == 1.0);

    t.wq.value.setZero();
    const Matrix x = random_matrix(4, 10, 5);
    t.forward(x, 2, Mode::Eval, nullptr);
    for (const auto& a : t.attention()) CHECK((a.array() - 0.2).abs().maxCoeff() < 1e-15);

    TransformerLayer r("r", 8, 2, 8, 0.2);
    r.init(rng);
    r.forward(random_matrix(8, 36, 6), 3, Mode::Eval, nullptr);
    for (const auto& a : r.attention())
        for (int q = 0; q < a.rows(); ++q) CHECK(a.row(q).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward shapes, probabilities, eval determinism") {
    Model m;
    m.init(Rng(1));
    CHECK(m.output_time(51) == 6);
    CHECK(m.output_time(155) == 19);
    CHECK(m.output_time(30) == 3);
    const Matrix x = random_matrix(39, 51 * 3, 7);
    const Matrix p = m.forward(x, 3, Mode::Eval);
    REQUIRE(p.rows() == 2);
    REQUIRE(p.cols() == 3);
    for (int b = 0; b < 3; ++b) {
        CHECK(p.col(b).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((p.col(b).array() >= 0.0).all());
    }
    CHECK(m.forward(x, 3, Mode::Eval) == p);
    CHECK_ERRC(m.forward(random_matrix(38, 51, 1), 1, Mode::Eval), Errc::ShapeMismatch);
    CHECK_ERRC(m.forward(random_matrix(39, 7, 1), 1, Mode::Eval), Errc::ShapeMismatch);

    int transformers = 0;
    for (auto* q : m.parameters())
        if (q->name.find("transformer.wq") != std::string::npos) ++transformers;
    CHECK(transformers == 5);
}

TEST_CASE("activations: five transformer outputs plus pooled") {
    Model m;
    m.init(Rng(2));
    const auto acts = m.activations(random_matrix(39, 51 * 2, 8), 2);
    REQUIRE(acts.size() == 2);
    const int times[] = {51, 25, 12, 6, 6};
    REQUIRE(acts[0].transformer.size() == 5);
    for (int l = 0; l < 5; ++l) {
        CHECK(acts[0].transformer[static_cast<std::size_t>(l)].rows() == times[l]);
        CHECK(acts[0].transformer[static_cast<std::size_t>(l)].cols() == 32);
    }
    CHECK(acts[0].pooled.size() == 32);
    const auto again = m.activations(random_matrix(39, 51 * 2, 8), 2);
    CHECK(again[1].pooled == acts[1].pooled);
}

TEST_CASE("gradient check on every parameter of a toy model") {
    Model m(toy_config());
    m.init(Rng(11));
    const Matrix x = random_matrix(6, 16 * 4, 12);
    // a coarser step straddles ReLU / max-pool switch points for this seed
    const auto res = oracle::gradient_check(m, x, 4, {1, 0, 1, 0}, {0.8, 1.3}, Rng(99), 1e-6);
    CHECK(res.checked > 500);
    for (const auto& f : res.failures) {
        INFO(f.param << "[" << f.index << "] analytic " << f.analytic << " numeric " << f.numeric);
        CHECK(false);
    }
}

TEST_CASE("zero class weight silences that class") {
    Model m(toy_config());
    m.init(Rng(4));
    const Matrix x = random_matrix(6, 16 * 2, 5);
    m.zero_grad();
    Rng r(1);
    m.loss_and_gradients(x, 2, {1, 1}, {1.0, 0.0}, &r);
    for (auto* p : m.parameters()) {
        if (p->trainable)
            CHECK(p->grad.cwiseAbs().maxCoeff() == 0.0);
        else
            CHECK(p->grad.size() == 0);
    }
}

TEST_CASE("residual identity with the main path zeroed") {
    ModelConfig cfg = toy_config();
    cfg.in_channels = 8;
    ResidualBlock block("b", cfg, true);
    Rng rng(5);
    block.init(rng);
    block.conv.weight.value.setZero();
    block.conv.bias.value.setZero();
    for (auto* p : {&block.transformer.wq, &block.transformer.wk, &block.transformer.wv, &block.transformer.wo,
                    &block.transformer.w1, &block.transformer.b1, &block.transformer.w2, &block.transformer.b2})
        p->value.setZero();
    block.bn.gamma.value.setZero();
    block.bn.beta.value.setZero();

    const Matrix x = random_matrix(8, 16 * 2, 6);
    const Matrix got = block.forward(x, 2, Mode::Eval, nullptr);

    Conv1d rc = block.res_conv;
    BatchNorm1d rb = block.res_bn;
    Relu relu;
    MaxPool1d pool;
    const Matrix want = pool.forward(relu.forward(rb.forward(rc.forward(x, 2), 2, Mode::Eval)), 2);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("class weights") {
    std::vector<int> balanced(100, 0);
    std::fill(balanced.begin(), balanced.begin() + 50, 1);
    const auto w = class_weights(balanced);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 1.0);

    std::vector<int> skewed(100, 0);
    std::fill(skewed.begin(), skewed.begin() + 63, 1);  // 63 CHD : 37 non-CHD
    const auto s = class_weights(skewed);
    CHECK(s[1] == doctest::Approx(0.79365).epsilon(1e-5));
    CHECK(s[0] == doctest::Approx(1.35135).epsilon(1e-5));
    CHECK_ERRC(class_weights(std::vector<int>(10, 1)), Errc::EmptyClass);
}

TEST_CASE("scaling class weights scales gradients uniformly") {
    Model a(toy_config());
    a.init(Rng(8));
    Model b = a;
    const Matrix x = random_matrix(6, 16 * 4, 9);
    a.zero_grad();
    b.zero_grad();
    Rng ra(2), rb(2);
    a.loss_and_gradients(x, 4, {1, 0, 0, 1}, {0.8, 1.4}, &ra);
    b.loss_and_gradients(x, 4, {1, 0, 0, 1}, {2.4, 4.2}, &rb);
    const auto pa = a.parameters(), pb = b.parameters();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (!pa[i]->trainable) continue;
        CHECK((pb[i]->grad - 3.0 * pa[i]->grad).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + pa[i]->grad.cwiseAbs().maxCoeff()));
        // SGD with lr / 3 then lands on the same parameters
        pa[i]->value -= 0.01 * pa[i]->grad;
        pb[i]->value -= (0.01 / 3.0) * pb[i]->grad;
    }
    const Matrix p1 = a.forward(x, 4, Mode::Eval), p2 = b.forward(x, 4, Mode::Eval);
    for (int c = 0; c < 4; ++c) {
        Eigen::Index i1, i2;
        p1.col(c).maxCoeff(&i1);
        p2.col(c).maxCoeff(&i2);
        CHECK(i1 == i2);
    }
}

namespace {

// Two classes told apart by the sign of one feature row.
Dataset separable(int n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    for (int i = 0; i < n; ++i) {
        Example ex;
        ex.segment_id = "s" + std::to_string(i);
        ex.patient_id = "p" + std::to_string(i);
        ex.label = i % 2;
        ex.features.rows = 6;
        ex.features.cols = 16;
        ex.features.values.resize(96);
        for (auto& v : ex.features.values) v = 0.3 * rng.normal();
        for (std::size_t t = 0; t < 16; ++t) ex.features.at(2, t) += ex.label == 1 ? 1.0 : -1.0;
        d.push_back(std::move(ex));
    }
    return d;
}

}  // namespace

TEST_CASE("training separates a separable toy set and is deterministic") {
    const auto train_set = separable(200, 1), val_set = separable(40, 2);
    TrainConfig tc;
    tc.epochs = 50;
    tc.patience = 50;
    Model m(toy_config());
    m.init(Rng(3));
    const auto res = train(m, train_set, val_set, tc, 7);
    const auto ev = evaluate(m, train_set, res.class_weights);
    CHECK(ev.accuracy >= 0.99);
    for (const auto& e : res.log) CHECK(std::isfinite(e.train_loss));
    // 5-epoch moving average of the training loss does not go up
    for (std::size_t e = 5; e + 5 <= res.log.size(); e += 5) {
        double prev = 0.0, cur = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            prev += res.log[e - 5 + k].train_loss;
            cur += res.log[e + k].train_loss;
        }
        CHECK(cur <= prev + 1e-9);
    }

    Model again(toy_config());
    again.init(Rng(3));
    train(again, train_set, val_set, tc, 7);
    CHECK(again.checksum() == m.checksum());
}

TEST_CASE("early stopping restores the best validation epoch") {
    const auto train_set = separable(64, 4), val_set = separable(16, 5);
    TrainConfig tc;
    tc.epochs = 40;
    tc.patience = 3;
    Model m(toy_config());
    m.init(Rng(6));
    const auto res = train(m, train_set, val_set, tc, 1);
    CHECK(static_cast<int>(res.log.size()) <= res.best_epoch + tc.patience);
    const auto ev = evaluate(m, val_set, res.class_weights);
    CHECK(ev.accuracy == doctest::Approx(res.best_val_acc));
}

TEST_CASE("checkpoint round trip") {
    testing::TempDir dir("model_ckpt");
    Model m(toy_config());
    m.init(Rng(12));
    save_checkpoint(dir.path() / "m.ckpt", m);
    Model back = load_checkpoint(dir.path() / "m.ckpt");
    CHECK(back.config().channels == 8);
    CHECK(back.config().block1 == 1);
    const auto pa = m.parameters();
    const auto pb = back.parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i]->name == pb[i]->name);
        CHECK((pa[i]->value.cast<float>().cast<double>() - pb[i]->value).cwiseAbs().maxCoeff() == 0.0);
    }
    // corrupt magic
    {
        std::fstream f(dir.path() / "m.ckpt", std::ios::in | std::ios::out | std::ios::binary);
        f.write("XXXX", 4);
    }
    CHECK_THROWS_AS(load_checkpoint(dir.path() / "m.ckpt"), pcg::Error);
}

}  // TEST_SUITE
