#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcg/mfcc.hpp"
#include "pcg/types.hpp"

namespace pcg::features {

// Binary matrix file: "PCGF", u32 rows, u32 cols, then rows*cols
// little-endian float32 values in row-major order.
void write_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_matrix(const std::filesystem::path& path);

// One row of features.csv; `path` is relative to the index file's directory.
struct FeatureIndexEntry {
    std::string segment_id;
    std::string patient_id;
    Position position = Position::Unknown;
    Label label = Label::Unlabeled;
    DurationClass duration = DurationClass::S5;
    std::string path;
};

inline constexpr const char* kFeatureIndexHeader = "segment_id,patient_id,position,label,duration,path";

void write_feature_index(const std::filesystem::path& csv, const std::vector<FeatureIndexEntry>& entries);
std::vector<FeatureIndexEntry> read_feature_index(const std::filesystem::path& csv);

}  // namespace pcg::features
