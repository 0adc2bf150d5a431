#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcg/commands.hpp"
#include "pcg/error.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pcg;

// Exit status for anything that is not a categorized pcg::Error.
constexpr int kInternalError = 100;

struct Globals {
    std::optional<fs::path> config_file;
    std::optional<std::string> seed;
    std::optional<std::string> duration;
    fs::path out_dir = ".";
    std::map<std::string, std::string> overrides;
};

RunConfig resolve_config(const Globals& g) {
    RunConfig cfg = g.config_file ? load_config(*g.config_file) : RunConfig{};
    for (const auto& [key, value] : g.overrides) set_config_value(cfg, key, value);
    if (g.seed) set_config_value(cfg, "seed", *g.seed);
    if (g.duration) set_config_value(cfg, "duration", *g.duration);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcgtool: phonocardiogram quality gating, features, training and evaluation"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Globals g;
    app.add_option("--config", g.config_file, "run configuration file (INI)")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "64-bit run seed");
    app.add_option("--duration", g.duration, "segment duration")->check(CLI::IsMember({"15s", "5s", "3s"}));
    app.add_option("--out-dir", g.out_dir, "output directory");
    for (const auto& key : config_keys()) {
        if (key == "seed" || key == "duration") continue;
        app.add_option_function<std::string>(
               "--" + key, [&g, key](const std::string& v) { g.overrides[key] = v; }, "override config key " + key)
            ->group("Config overrides");
    }

    fs::path corpus, features, checkpoint, predictions;
    std::optional<fs::path> split_csv, manifest_dir;
    std::string split_name = "test";

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
    synth::CorpusSpec spec;
    gen->add_option("--corpus", corpus, "corpus root to create")->required();
    gen->add_option("--patients", spec.n_patients, "number of patients")->check(CLI::Range(4, 1000000));
    gen->add_option("--chd-fraction", spec.chd_fraction, "fraction of CHD patients")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--snr", spec.snr_db, "white-noise SNR in dB");
    gen->add_option("--noisy-fraction", spec.noisy_fraction, "fraction of recordings at --noisy-snr")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--noisy-snr", spec.noisy_snr_db, "SNR of the noisy recordings in dB");
    gen->add_option("--length", spec.duration_s, "recording length in seconds")->check(CLI::PositiveNumber);

    auto* assess = app.add_subcommand("assess", "quality-gate every segment (quality.csv)");
    assess->add_option("--corpus", corpus, "corpus root")->required();

    auto* pre = app.add_subcommand("preprocess", "bandpass + spike removal of suitable segments (WAV dump)");
    pre->add_option("--corpus", corpus, "corpus root")->required();

    auto* feat = app.add_subcommand("features", "extract MFCC/delta/delta2 features of suitable segments");
    bool all_segments = false;
    feat->add_option("--corpus", corpus, "corpus root")->required();
    feat->add_flag("--all", all_segments, "also extract gated-out segments");

    auto* tr = app.add_subcommand("train", "patient-wise split and training (model.ckpt)");
    tr->add_option("--features", features, "feature index (features.csv)")->required()->check(CLI::ExistingFile);

    auto* pred = app.add_subcommand("predict", "class probabilities (predictions.csv)");
    pred->add_option("--checkpoint", checkpoint, "model checkpoint")->required()->check(CLI::ExistingFile);
    pred->add_option("--features", features, "feature index (features.csv)")->required()->check(CLI::ExistingFile);
    pred->add_option("--split", split_csv, "split.csv restricting the patients")->check(CLI::ExistingFile);
    pred->add_option("--split-name", split_name, "which split to predict")
        ->check(CLI::IsMember({"train", "val", "test"}));

    auto* ev = app.add_subcommand("eval", "metrics of a predictions file (metrics.json)");
    ev->add_option("--predictions", predictions, "predictions.csv")->required()->check(CLI::ExistingFile);
    ev->add_option("--corpus", manifest_dir, "corpus root, for age/sex groups");

    auto* sw = app.add_subcommand("sweep", "RMSSD x ZCR threshold grid (sweep_grid.csv)");
    cli::SweepOptions sweep_opts;
    std::optional<fs::path> sweep_ckpt;
    sw->add_option("--corpus", corpus, "corpus root")->required();
    sw->add_option("--checkpoint", sweep_ckpt, "checkpoint reused for every cell")->check(CLI::ExistingFile);
    sw->add_flag("--train-per-cell", sweep_opts.train_per_cell, "retrain at every cell (slow)");
    sw->add_option("--min-cell-segments", sweep_opts.min_cell_segments, "fewer suitable test segments -> no accuracy");
    sw->add_option("--split", split_csv, "split.csv of the checkpoint's training run")->check(CLI::ExistingFile);

    auto* act = app.add_subcommand("activations", "export transformer / pooled activations");
    std::size_t limit = 0;
    act->add_option("--checkpoint", checkpoint, "model checkpoint")->required()->check(CLI::ExistingFile);
    act->add_option("--features", features, "feature index (features.csv)")->required()->check(CLI::ExistingFile);
    act->add_option("--limit", limit, "export at most this many segments (0 = all)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const RunConfig cfg = resolve_config(g);
        const fs::path& out = g.out_dir;
        if (gen->parsed()) {
            spec.seed = cfg.seed;
            const auto m = cli::cmd_gen(corpus, spec);
            std::cout << "wrote " << m.entries.size() << " recordings to " << corpus.string() << "\n";
        } else if (assess->parsed()) {
            const auto results = cli::cmd_assess(corpus, cfg, out);
            std::size_t ok = 0;
            for (const auto& r : results) ok += r.quality.suitable ? 1 : 0;
            std::cout << ok << "/" << results.size() << " segments suitable\n";
        } else if (pre->parsed()) {
            std::cout << cli::cmd_preprocess(corpus, cfg, out) << " segments preprocessed\n";
        } else if (feat->parsed()) {
            std::cout << "wrote " << cli::cmd_features(corpus, cfg, out, all_segments).string() << "\n";
        } else if (tr->parsed()) {
            const auto o = cli::cmd_train(features, cfg, out);
            std::cout << "best epoch " << o.result.best_epoch << ", val acc " << o.result.best_val_acc << "; wrote "
                      << o.checkpoint.string() << "\n";
        } else if (pred->parsed()) {
            const auto p = cli::cmd_predict(checkpoint, features, out, split_csv, split_name);
            std::cout << p.size() << " predictions\n";
        } else if (ev->parsed()) {
            const auto m = cli::cmd_eval(predictions, manifest_dir, out);
            std::cout << "accuracy " << m.accuracy.value_or(0.0) << " over " << m.counts.total() << " segments\n";
        } else if (sw->parsed()) {
            sweep_opts.checkpoint = sweep_ckpt;
            sweep_opts.split_csv = split_csv;
            cli::cmd_sweep(corpus, cfg, sweep_opts, out);
            std::cout << "wrote " << (out / "sweep_grid.csv").string() << "\n";
        } else if (act->parsed()) {
            std::cout << cli::cmd_activations(checkpoint, features, out, limit) << " segments exported\n";
        }
    } catch (const Error& e) {
        std::cerr << "pcgtool: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "pcgtool: internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return 0;
}
