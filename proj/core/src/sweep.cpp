#include "pcg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pcg/error.hpp"

namespace pcg {

std::vector<double> sweep_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 8; ++i) t.push_back((2 + i) / 10.0);
    return t;
}

SweepGrid run_sweep(const std::vector<SegmentResult>& results, const CellScorer& scorer) {
    if (results.empty()) fail(Errc::EmptyEvaluation, "sweep over an empty corpus");
    SweepGrid grid;
    grid.rmssd_values = sweep_thresholds();
    grid.zcr_values = sweep_thresholds();
    for (double r : grid.rmssd_values) {
        for (double z : grid.zcr_values) {
            std::vector<SegmentResult> gated = results;
            SweepCell cell;
            cell.rmssd = r;
            cell.zcr = z;
            for (auto& g : gated) {
                g.quality = quality::regate(g.quality, {r, z});
                if (g.quality.suitable) ++cell.n_suitable;
            }
            cell.fraction_suitable = static_cast<double>(cell.n_suitable) / static_cast<double>(results.size());
            if (scorer) cell.accuracy = scorer(gated);
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

namespace {

std::ofstream open_out(const std::filesystem::path& csv) {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream out(csv);
    if (!out) fail(Errc::Io, "cannot write " + csv.string());
    out.precision(17);
    return out;
}

// Thresholds are k/10; print them as such rather than as their binary value.
std::string threshold_text(double t) {
    std::ostringstream os;
    os << std::setprecision(3) << t;
    return os.str();
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& csv, const SweepGrid& grid) {
    auto out = open_out(csv);
    out << kSweepHeader << "\n";
    for (const auto& c : grid.cells) {
        out << threshold_text(c.rmssd) << ',' << threshold_text(c.zcr) << ',' << c.fraction_suitable << ',' << c.n_suitable << ',';
        if (c.accuracy) out << *c.accuracy;
        out << "\n";
    }
}

void write_sweep_matrix(const std::filesystem::path& csv, const SweepGrid& grid, SweepValue value) {
    auto out = open_out(csv);
    out << "rmssd\\zcr";
    for (double z : grid.zcr_values) out << ',' << threshold_text(z);
    out << "\n";
    for (std::size_t i = 0; i < grid.rmssd_values.size(); ++i) {
        out << threshold_text(grid.rmssd_values[i]);
        for (std::size_t j = 0; j < grid.zcr_values.size(); ++j) {
            const auto& c = grid.at(i, j);
            out << ',';
            if (value == SweepValue::FractionSuitable) out << c.fraction_suitable;
            else if (c.accuracy) out << *c.accuracy;
        }
        out << "\n";
    }
}

SweepGrid read_sweep_csv(const std::filesystem::path& csv) {
    SweepGrid grid;
    for (const auto& row : read_csv(csv, kSweepHeader)) {
        SweepCell c;
        c.rmssd = std::stod(row[0]);
        c.zcr = std::stod(row[1]);
        c.fraction_suitable = std::stod(row[2]);
        c.n_suitable = std::stol(row[3]);
        if (row.size() > 4 && !row[4].empty()) c.accuracy = std::stod(row[4]);
        if (std::find(grid.rmssd_values.begin(), grid.rmssd_values.end(), c.rmssd) == grid.rmssd_values.end()) {
            grid.rmssd_values.push_back(c.rmssd);
        }
        if (std::find(grid.zcr_values.begin(), grid.zcr_values.end(), c.zcr) == grid.zcr_values.end()) {
            grid.zcr_values.push_back(c.zcr);
        }
        grid.cells.push_back(c);
    }
    if (grid.cells.size() != grid.rmssd_values.size() * grid.zcr_values.size()) {
        fail(Errc::Io, csv.string() + ": sweep grid is not rectangular");
    }
    return grid;
}

}  // namespace pcg
