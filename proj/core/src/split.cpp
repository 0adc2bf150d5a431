#include "pcg/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pcg/corpus.hpp"
#include "pcg/error.hpp"
#include "pcg/rng.hpp"

namespace pcg::eval {
namespace {

// Splits `total` across groups proportionally to `sizes` by largest
// remainder, never exceeding a group's size.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total) {
    const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<std::size_t> quota(sizes.size(), 0);
    std::vector<double> remainder(sizes.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        const double exact = static_cast<double>(total) * static_cast<double>(sizes[g]) / static_cast<double>(n);
        quota[g] = static_cast<std::size_t>(std::floor(exact));
        remainder[g] = exact - static_cast<double>(quota[g]);
        assigned += quota[g];
    }
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < total && i < order.size() * 2; ++i) {
        const std::size_t g = order[i % order.size()];
        if (quota[g] < sizes[g]) {
            ++quota[g];
            ++assigned;
        }
    }
    return quota;
}

}  // namespace

PatientSplit patient_wise_split(const std::map<std::string, PatientInfo>& patients, double test_fraction,
                                double val_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0 && val_fraction > 0.0 && val_fraction < 1.0)) {
        fail(Errc::InvalidConfig, "split fractions must lie in (0, 1)");
    }
    // groups[0] = NON_CHD, groups[1] = CHD; map order makes this deterministic
    std::vector<std::vector<std::string>> groups(2);
    for (const auto& [id, info] : patients) {
        if (info.label == Label::Unlabeled) fail(Errc::MissingMetadata, "patient " + id + " has no label");
        groups[static_cast<std::size_t>(class_index(info.label))].push_back(id);
    }
    const std::size_t n = patients.size();
    if (n < 3) fail(Errc::TooFewPatients, "need at least 3 patients for train/val/test");

    Rng rng = Rng(seed).split("patient_split");
    for (auto& g : groups) rng.shuffle(std::span<std::string>(g));

    auto take = [&](double fraction) {
        std::vector<std::size_t> sizes = {groups[0].size(), groups[1].size()};
        const std::size_t remaining = sizes[0] + sizes[1];
        const auto total = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(remaining))));
        const auto quota = apportion(sizes, std::min(total, remaining));
        std::vector<std::string> out;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto k = static_cast<std::ptrdiff_t>(quota[g]);
            out.insert(out.end(), groups[g].begin(), groups[g].begin() + k);
            groups[g].erase(groups[g].begin(), groups[g].begin() + k);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    PatientSplit split;
    split.test = take(test_fraction);
    split.val = take(val_fraction);
    for (auto& g : groups) split.train.insert(split.train.end(), g.begin(), g.end());
    std::sort(split.train.begin(), split.train.end());
    if (split.train.empty() || split.val.empty() || split.test.empty()) {
        fail(Errc::TooFewPatients, "a split would be empty with " + std::to_string(n) + " patients");
    }
    return split;
}

void write_split(const std::string& csv, const PatientSplit& split) {
    std::ofstream out(csv);
    if (!out) fail(Errc::Io, "cannot write " + csv);
    out << kSplitHeader << "\n";
    for (const auto& id : split.train) out << id << ",train\n";
    for (const auto& id : split.val) out << id << ",val\n";
    for (const auto& id : split.test) out << id << ",test\n";
}

PatientSplit read_split(const std::string& csv) {
    PatientSplit split;
    for (const auto& row : read_csv(csv, kSplitHeader)) {
        if (row[1] == "train") split.train.push_back(row[0]);
        else if (row[1] == "val") split.val.push_back(row[0]);
        else if (row[1] == "test") split.test.push_back(row[0]);
        else fail(Errc::Io, csv + ": unknown split '" + row[1] + "'");
    }
    return split;
}

}  // namespace pcg::eval
