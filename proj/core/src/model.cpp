#include "pcg/model.hpp"

#include <cstring>

#include "pcg/error.hpp"

namespace pcg::model {

ResidualBlock::ResidualBlock(const std::string& name, const ModelConfig& cfg, bool pooling)
    : conv(name + ".conv", cfg.channels, cfg.channels, 3),
      transformer(name + ".transformer", cfg.channels, cfg.heads, cfg.ffn, cfg.dropout),
      bn(name + ".bn", cfg.channels),
      res_conv(name + ".res_conv", cfg.channels, cfg.channels, 1),
      res_bn(name + ".res_bn", cfg.channels),
      pooling_(pooling),
      omega_(cfg.pe_omega),
      drop_(pooling ? cfg.dropout : 0.0) {}

void ResidualBlock::init(Rng& rng) {
    conv.init(rng);
    transformer.init(rng);
    res_conv.init(rng);
}

Matrix ResidualBlock::forward(const Matrix& x, int batch, Mode mode, Rng* rng, Matrix* transformer_out) {
    Matrix main = conv.forward(x, batch);
    main = add_positional_encoding(main, batch, omega_);
    main = transformer.forward(main, batch, mode, rng);
    if (transformer_out) *transformer_out = main;
    main = bn.forward(main, batch, mode);

    Matrix y = main + res_bn.forward(res_conv.forward(x, batch), batch, mode);
    y = relu_.forward(y);
    if (pooling_) {
        y = drop_.forward(y, mode, rng);
        y = pool_.forward(y, batch);
    }
    return y;
}

Matrix ResidualBlock::backward(const Matrix& dy) {
    Matrix d = dy;
    if (pooling_) {
        d = pool_.backward(d);
        d = drop_.backward(d);
    }
    d = relu_.backward(d);
    Matrix dx = res_conv.backward(res_bn.backward(d));
    Matrix dm = bn.backward(d);
    dm = transformer.backward(dm);
    dx += conv.backward(dm);
    return dx;
}

void ResidualBlock::collect(std::vector<Parameter*>& out) {
    conv.collect(out);
    transformer.collect(out);
    bn.collect(out);
    res_conv.collect(out);
    res_bn.collect(out);
}

Model::Model(const ModelConfig& cfg)
    : enc_conv("encoder.conv", cfg.in_channels, cfg.channels, 3),
      enc_bn("encoder.bn", cfg.channels),
      fc1("decoder.fc1", cfg.channels, cfg.fc_hidden),
      fc2("decoder.fc2", cfg.fc_hidden, cfg.classes),
      cfg_(cfg),
      dec_drop_(cfg.dropout) {
    if (cfg.channels % cfg.heads != 0) fail(Errc::InvalidSpec, "heads must divide channels");
    for (int i = 0; i < cfg.block1; ++i) blocks_.emplace_back("block1." + std::to_string(i), cfg, true);
    for (int i = 0; i < cfg.block2; ++i) blocks_.emplace_back("block2." + std::to_string(i), cfg, false);
}

// Layers hold caches, so a copy is a fresh model carrying the same values.
Model::Model(const Model& other) : Model(other.cfg_) {
    auto dst = parameters();
    const auto src = other.parameters();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i]->value = src[i]->value;
}

Model& Model::operator=(const Model& other) {
    if (this != &other) {
        Model tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

void Model::init(Rng rng) {
    enc_conv.init(rng);
    for (auto& b : blocks_) b.init(rng);
    fc1.init(rng, 2.0);
    fc2.init(rng, 1.0);
}

int Model::output_time(int time) const {
    for (const auto& b : blocks_) {
        if (b.pooling()) time /= 2;
    }
    return time;
}

Matrix Model::forward_impl(const Matrix& input, int batch, Mode mode, Rng* rng, std::vector<Matrix>* trace,
                           Matrix* pooled) {
    if (input.rows() != cfg_.in_channels) {
        fail(Errc::ShapeMismatch, "model expects " + std::to_string(cfg_.in_channels) + " feature rows, got " +
                                      std::to_string(input.rows()));
    }
    if (batch <= 0 || input.cols() % batch != 0) fail(Errc::ShapeMismatch, "input columns not divisible by batch");
    const int time = static_cast<int>(input.cols()) / batch;
    if (output_time(time) < 1) {
        fail(Errc::ShapeMismatch, "T = " + std::to_string(time) + " is too short for " +
                                      std::to_string(cfg_.block1) + " pooling blocks");
    }

    Matrix x = enc_relu_.forward(enc_bn.forward(enc_conv.forward(input, batch), batch, mode));
    for (auto& block : blocks_) {
        Matrix tf;
        x = block.forward(x, batch, mode, rng, trace ? &tf : nullptr);
        if (trace) trace->push_back(std::move(tf));
    }
    Matrix g = gap_.forward(x, batch);
    if (pooled) *pooled = g;
    g = dec_drop_.forward(g, mode, rng);
    g = fc_relu_.forward(fc1.forward(g));
    logits_ = fc2.forward(g);
    return softmax_columns(logits_);
}

Matrix Model::forward(const Matrix& input, int batch, Mode mode, Rng* rng) {
    return forward_impl(input, batch, mode, rng, nullptr, nullptr);
}

void Model::backward(const Matrix& dlogits) {
    Matrix d = fc2.backward(dlogits);
    d = fc1.backward(fc_relu_.backward(d));
    d = gap_.backward(dec_drop_.backward(d));
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) d = it->backward(d);
    d = enc_conv.backward(enc_bn.backward(enc_relu_.backward(d)));
}

double Model::loss_and_gradients(const Matrix& input, int batch, const std::vector<int>& labels,
                                 const std::vector<double>& class_weights, Rng* rng) {
    forward(input, batch, Mode::Train, rng);
    Matrix dlogits;
    const double loss = weighted_cross_entropy(logits_, labels, class_weights, &dlogits);
    backward(dlogits);
    return loss;
}

void Model::zero_grad() {
    for (Parameter* p : parameters()) p->grad.setZero();
}

std::vector<Parameter*> Model::parameters() {
    std::vector<Parameter*> out;
    enc_conv.collect(out);
    enc_bn.collect(out);
    for (auto& b : blocks_) b.collect(out);
    fc1.collect(out);
    fc2.collect(out);
    return out;
}

std::vector<const Parameter*> Model::parameters() const {
    auto mut = const_cast<Model*>(this)->parameters();
    return {mut.begin(), mut.end()};
}

Parameter* Model::find(const std::string& name) {
    for (Parameter* p : parameters()) {
        if (p->name == name) return p;
    }
    return nullptr;
}

std::vector<Activations> Model::activations(const Matrix& input, int batch) {
    std::vector<Matrix> trace;
    Matrix pooled;
    forward_impl(input, batch, Mode::Eval, nullptr, &trace, &pooled);

    std::vector<Activations> out(static_cast<std::size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        auto& a = out[static_cast<std::size_t>(b)];
        for (const Matrix& layer : trace) {
            const int t = static_cast<int>(layer.cols()) / batch;
            a.transformer.push_back(layer.middleCols(b * t, t).transpose());
        }
        a.pooled = pooled.col(b);
    }
    return out;
}

std::uint64_t Model::checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Parameter* p : parameters()) {
        for (Eigen::Index i = 0; i < p->value.size(); ++i) {
            std::uint64_t bits;
            const double v = p->value.data()[i];
            std::memcpy(&bits, &v, sizeof bits);
            for (int k = 0; k < 8; ++k) {
                h ^= (bits >> (8 * k)) & 0xFF;
                h *= 0x100000001b3ULL;
            }
        }
    }
    return h;
}

Matrix make_batch(std::span<const features::FeatureMatrix* const> items) {
    if (items.empty()) fail(Errc::ShapeMismatch, "empty batch");
    const auto rows = static_cast<Eigen::Index>(items.front()->rows);
    const auto time = static_cast<Eigen::Index>(items.front()->cols);
    Matrix out(rows, time * static_cast<Eigen::Index>(items.size()));
    for (std::size_t b = 0; b < items.size(); ++b) {
        const auto& f = *items[b];
        if (static_cast<Eigen::Index>(f.rows) != rows || static_cast<Eigen::Index>(f.cols) != time) {
            fail(Errc::ShapeMismatch, "feature matrices in one batch must share a shape");
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index t = 0; t < time; ++t) {
                out(r, static_cast<Eigen::Index>(b) * time + t) = f.values[static_cast<std::size_t>(r * time + t)];
            }
        }
    }
    return out;
}

}  // namespace pcg::model
