#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcg/config.hpp"
#include "pcg/corpus.hpp"
#include "pcg/filter.hpp"
#include "pcg/mfcc.hpp"
#include "pcg/quality.hpp"
#include "pcg/train.hpp"
#include "pcg/types.hpp"

namespace pcg {

// Per-segment outcome of gate -> bandpass -> spike removal -> features.
struct SegmentResult {
    std::string segment_id;  // Segment::parent_id()
    std::string patient_id;
    Position position = Position::Unknown;
    Label label = Label::Unlabeled;
    DurationClass duration = DurationClass::S5;
    quality::QualityReport quality;
    std::optional<features::FeatureMatrix> features;
};

struct PipelineOptions {
    preprocess::FilterSpec filter;
    features::FrameParams frames;
    // Extract features for gated-out segments too (threshold sweeps re-gate
    // without reprocessing). Degenerate segments never get features.
    bool features_for_all = false;
};

// Bandpass then spike removal.
Segment preprocess_segment(const Segment& seg, const preprocess::FilterSpec& filter = {});

SegmentResult process_segment(const Segment& seg, const RunConfig& cfg, const PipelineOptions& opts = {});

// Loads every manifest recording, splits it at cfg.duration and processes
// each segment. Output order follows the manifest then segment index.
std::vector<SegmentResult> process_corpus(const Manifest& manifest, const RunConfig& cfg,
                                          const PipelineOptions& opts = {});

inline constexpr const char* kQualityHeader = "parent_id,duration_class,rmssd,zcr,suitable";

void write_quality_csv(const std::filesystem::path& csv, const std::vector<SegmentResult>& results);

// Suitable segments with features whose patient is in `patients` (all
// patients when the set is empty).
model::Dataset make_dataset(const std::vector<SegmentResult>& results, const std::set<std::string>& patients = {});

}  // namespace pcg
