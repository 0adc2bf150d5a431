#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcg/types.hpp"

namespace pcg::eval {

struct PatientSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

// Patient-granular stratified split. The test split takes round(test_fraction
// * N) patients, then the validation split takes round(val_fraction * rest)
// of the remainder; within each, per-label quotas follow the label
// proportions by largest remainder, so every split keeps the corpus CHD
// ratio as closely as integer counts allow. Deterministic for a given seed.
// Throws Errc::TooFewPatients if any split would be empty and
// Errc::MissingMetadata for unlabeled patients.
PatientSplit patient_wise_split(const std::map<std::string, PatientInfo>& patients, double test_fraction,
                                double val_fraction, std::uint64_t seed);

inline constexpr const char* kSplitHeader = "patient_id,split";

void write_split(const std::string& csv, const PatientSplit& split);
PatientSplit read_split(const std::string& csv);

}  // namespace pcg::eval
