#include <cstdlib>
#include <fstream>

#include "helpers.hpp"
#include "pcg/checkpoint.hpp"
#include "pcg/commands.hpp"
#include "pcg/feature_io.hpp"

using namespace pcg;

namespace {

RunConfig small_config() {
    RunConfig cfg;
    cfg.duration = DurationClass::S5;
    cfg.test_fraction = 0.25;
    cfg.val_fraction = 0.25;
    cfg.train.epochs = 2;
    cfg.seed = 3;
    return cfg;
}

int run_tool(const std::string& args) {
    const int status = std::system((std::string(PCGTOOL_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pipeline through the command layer") {
    testing::TempDir dir("cli_pipeline");
    const auto corpus = dir.path() / "corpus";
    const auto out = dir.path() / "out";
    synth::CorpusSpec spec;
    spec.n_patients = 8;
    spec.seed = 2;
    spec.noisy_fraction = 0.25;
    cli::cmd_gen(corpus, spec);
    const RunConfig cfg = small_config();

    const auto q = cli::cmd_assess(corpus, cfg, out);
    CHECK(q.size() == 8 * 4 * 3);
    {
        std::ifstream in(out / "quality.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "parent_id,duration_class,rmssd,zcr,suitable");
    }
    std::size_t suitable = 0;
    for (const auto& r : q) suitable += r.quality.suitable ? 1 : 0;
    CHECK(suitable < q.size());  // the noisy recordings are gated out
    CHECK(suitable > q.size() / 2);

    CHECK(cli::cmd_preprocess(corpus, cfg, out) == suitable);

    const auto index = cli::cmd_features(corpus, cfg, out);
    CHECK(features::read_feature_index(index).size() == suitable);

    const auto trained = cli::cmd_train(index, cfg, out);
    CHECK(std::filesystem::exists(out / "model.ckpt"));
    CHECK(std::filesystem::exists(out / "train_log.csv"));
    CHECK(trained.result.log.size() == 2);

    const auto preds = cli::cmd_predict(out / "model.ckpt", index, out, out / "split.csv", "test");
    CHECK_FALSE(preds.empty());
    // predict == eval-mode model forward on the same checkpoint; batching only
    // reorders GEMM sums
    auto model = model::load_checkpoint(out / "model.ckpt");
    const auto data = cli::load_feature_dataset(index);
    for (const auto& p : preds) {
        const auto it = std::find_if(data.begin(), data.end(), [&](const auto& ex) { return ex.segment_id == p.segment_id; });
        REQUIRE(it != data.end());
        const features::FeatureMatrix* items[] = {&it->features};
        const auto prob = model.forward(model::make_batch(items), 1, model::Mode::Eval);
        CHECK(prob(1, 0) == doctest::Approx(p.prob_chd).epsilon(1e-12));
    }
    const auto back = eval::read_predictions(out / "predictions.csv");
    for (std::size_t i = 0; i < preds.size(); ++i) CHECK(back[i].prob_chd == preds[i].prob_chd);

    const auto report = cli::cmd_eval(out / "predictions.csv", corpus, out);
    CHECK(report.counts.total() == static_cast<long>(preds.size()));
    CHECK(std::filesystem::exists(out / "metrics.json"));

    cli::SweepOptions so;
    so.checkpoint = out / "model.ckpt";
    so.split_csv = out / "split.csv";
    const auto grid = cli::cmd_sweep(corpus, cfg, so, out);
    CHECK(grid.cells.size() == 81);
    CHECK(grid.at(8, 8).fraction_suitable == 1.0);
    const auto reread = read_sweep_csv(out / "sweep_grid.csv");
    CHECK(reread.cells.size() == 81);
    CHECK(reread.at(2, 2).n_suitable == grid.at(2, 2).n_suitable);
    // 0.4 / 0.4 is the cell the corpus was gated at
    CHECK(grid.at(2, 2).n_suitable == static_cast<long>(suitable));

    CHECK(cli::cmd_activations(out / "model.ckpt", index, out, 2) == 2);
    const auto first = features::read_feature_index(index).front().segment_id;
    const auto pooled = features::read_matrix(out / "activations" / first / "pooled.bin");
    CHECK(pooled.rows == 32);
    CHECK(pooled.cols == 1);
    CHECK(features::read_matrix(out / "activations" / first / "transformer3.bin").rows == 12);
}

TEST_CASE("sweep needs a checkpoint or per-cell training") {
    testing::TempDir dir("cli_sweep_err");
    CHECK_ERRC(cli::cmd_sweep(dir.path(), small_config(), {}, dir.path()), Errc::InvalidConfig);
}

TEST_CASE("pcgtool exit codes") {
    testing::TempDir dir("cli_exit");
    const std::string d = dir.path().string();
    CHECK(run_tool("gen --corpus " + d + "/c --patients 4 --seed 1") == 0);
    CHECK(run_tool("--out-dir " + d + "/o assess --corpus " + d + "/c") == 0);
    CHECK(std::filesystem::exists(dir.path() / "o" / "quality.csv"));
    CHECK(run_tool("assess --corpus " + d + "/missing") == static_cast<int>(Errc::Io));
    CHECK(run_tool("assess --corpus " + d + "/c --heads 5") == static_cast<int>(Errc::InvalidConfig));
    CHECK(run_tool("assess --corpus " + d + "/c --duration 7s") != 0);
    CHECK(run_tool("frobnicate") != 0);
    CHECK(run_tool("gen --corpus " + d + "/c2 --patients 3") != 0);
}

}  // TEST_SUITE
