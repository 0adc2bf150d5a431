#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "pcg/pipeline.hpp"

namespace pcg {

// Gate thresholds 0.2, 0.3, ..., 1.0 on both axes.
std::vector<double> sweep_thresholds();

struct SweepCell {
    double rmssd = 0.0;
    double zcr = 0.0;
    double fraction_suitable = 0.0;  // over the whole corpus
    long n_suitable = 0;
    std::optional<double> accuracy;  // absent when too few segments to score
};

struct SweepGrid {
    std::vector<double> rmssd_values;  // rows
    std::vector<double> zcr_values;    // columns
    std::vector<SweepCell> cells;      // row-major

    const SweepCell& at(std::size_t row, std::size_t col) const { return cells[row * zcr_values.size() + col]; }
};

// Scores one cell: receives the results re-gated at the cell thresholds and
// returns the accuracy, or nothing if it cannot be scored.
using CellScorer = std::function<std::optional<double>(const std::vector<SegmentResult>& gated)>;

// Re-gates every result at each cell's thresholds (indicators are computed
// once) and asks `scorer` for the cell accuracy. Results need features for
// every non-degenerate segment (PipelineOptions::features_for_all).
SweepGrid run_sweep(const std::vector<SegmentResult>& results, const CellScorer& scorer);

inline constexpr const char* kSweepHeader = "rmssd,zcr,fraction_suitable,n_suitable,accuracy";

// Long format, one row per cell; absent accuracy is written as an empty field.
void write_sweep_csv(const std::filesystem::path& csv, const SweepGrid& grid);
// Wide format: rows are RMSSD thresholds, columns ZCR thresholds.
enum class SweepValue { Accuracy, FractionSuitable };
void write_sweep_matrix(const std::filesystem::path& csv, const SweepGrid& grid, SweepValue value);

SweepGrid read_sweep_csv(const std::filesystem::path& csv);

}  // namespace pcg
