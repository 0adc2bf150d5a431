#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcg/config.hpp"
#include "pcg/metrics.hpp"
#include "pcg/pipeline.hpp"
#include "pcg/split.hpp"
#include "pcg/sweep.hpp"
#include "pcg/synth.hpp"
#include "pcg/train.hpp"

// Subcommand bodies of pcgtool, callable without going through argv.
namespace pcg::cli {

namespace fs = std::filesystem;

// gen: synthetic corpus under `corpus`.
Manifest cmd_gen(const fs::path& corpus, const synth::CorpusSpec& spec);

// assess: gate every segment; writes <out>/quality.csv.
std::vector<SegmentResult> cmd_assess(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir);

// preprocess: bandpass + spike removal of the suitable segments, dumped as
// float WAV files under <out>/preprocessed/ for inspection. Returns the count.
std::size_t cmd_preprocess(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir);

// features: <out>/features/<segment_id>.bin for suitable segments (all
// non-degenerate segments with `all`), indexed by <out>/features.csv; also
// writes quality.csv. Returns the index path.
fs::path cmd_features(const fs::path& corpus, const RunConfig& cfg, const fs::path& out_dir, bool all = false);

struct TrainOutcome {
    eval::PatientSplit split;
    model::TrainResult result;
    fs::path checkpoint;
};

// train: patient-wise split of the feature index, training, and
// <out>/{model.ckpt, train_log.csv, split.csv, config.ini}.
TrainOutcome cmd_train(const fs::path& feature_index, const RunConfig& cfg, const fs::path& out_dir);

// predict: eval-mode probabilities for the indexed segments (only those of
// patients in `split_name` of `split_csv` when both are given); writes
// <out>/predictions.csv.
std::vector<eval::Prediction> cmd_predict(const fs::path& checkpoint, const fs::path& feature_index,
                                          const fs::path& out_dir, const std::optional<fs::path>& split_csv = {},
                                          const std::string& split_name = "test");

// eval: metrics of a predictions file; groups by age band and sex when a
// manifest is available. Writes <out>/metrics.json.
eval::MetricsReport cmd_eval(const fs::path& predictions, const std::optional<fs::path>& corpus,
                             const fs::path& out_dir);

struct SweepOptions {
    std::optional<fs::path> checkpoint;  // reuse mode
    bool train_per_cell = false;
    std::size_t min_cell_segments = 1;
    // Patient split to score on; recomputed from the manifest when absent.
    std::optional<fs::path> split_csv;
};

// sweep: 9x9 RMSSD x ZCR grid. Accuracy is scored on the suitable segments
// of the test patients, from the checkpoint or by retraining per cell.
// Writes <out>/sweep_grid.csv, sweep_accuracy.csv, sweep_fraction.csv.
SweepGrid cmd_sweep(const fs::path& corpus, const RunConfig& cfg, const SweepOptions& opts, const fs::path& out_dir);

// activations: per segment, the five transformer outputs and the pooled
// vector as PCGF matrices under <out>/activations/<segment_id>/.
std::size_t cmd_activations(const fs::path& checkpoint, const fs::path& feature_index, const fs::path& out_dir,
                            std::size_t limit = 0);

// Loads the segments listed by a feature index.
model::Dataset load_feature_dataset(const fs::path& feature_index);

}  // namespace pcg::cli
