#include "pcg/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "pcg/error.hpp"
#include "pcg/segment.hpp"
#include "pcg/spikes.hpp"

namespace pcg {

Segment preprocess_segment(const Segment& seg, const preprocess::FilterSpec& filter) {
    return preprocess::remove_spikes(preprocess::bandpass_filter(seg, filter));
}

SegmentResult process_segment(const Segment& seg, const RunConfig& cfg, const PipelineOptions& opts) {
    SegmentResult r;
    r.segment_id = seg.parent_id();
    r.patient_id = seg.patient_id;
    r.position = seg.position;
    r.label = seg.label;
    r.duration = seg.duration_class;
    r.quality = quality::assess_quality(seg, {cfg.rmssd_threshold, cfg.zcr_threshold}, cfg.wavelet_order);
    if (r.quality.degenerate) return r;
    if (r.quality.suitable || opts.features_for_all) {
        r.features = features::extract_features(preprocess_segment(seg, opts.filter), opts.frames);
    }
    return r;
}

std::vector<SegmentResult> process_corpus(const Manifest& manifest, const RunConfig& cfg,
                                          const PipelineOptions& opts) {
    std::vector<SegmentResult> out;
    for (const auto& entry : manifest.entries) {
        const PcgRecording rec = load_recording(manifest, entry);
        for (const auto& seg : split_recording(rec, cfg.duration)) out.push_back(process_segment(seg, cfg, opts));
    }
    return out;
}

void write_quality_csv(const std::filesystem::path& csv, const std::vector<SegmentResult>& results) {
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream out(csv);
    if (!out) fail(Errc::Io, "cannot write " + csv.string());
    out.precision(17);
    out << kQualityHeader << "\n";
    for (const auto& r : results) {
        out << r.segment_id << ',' << to_string(r.duration) << ',';
        if (r.quality.degenerate) {
            out << "nan,nan,";
        } else {
            out << r.quality.rmssd << ',' << r.quality.zcr << ',';
        }
        out << (r.quality.suitable ? 1 : 0) << "\n";
    }
}

model::Dataset make_dataset(const std::vector<SegmentResult>& results, const std::set<std::string>& patients) {
    model::Dataset data;
    for (const auto& r : results) {
        if (!r.quality.suitable || !r.features) continue;
        if (!patients.empty() && !patients.count(r.patient_id)) continue;
        if (r.label == Label::Unlabeled) fail(Errc::MissingMetadata, r.segment_id + " has no label");
        data.push_back({r.segment_id, r.patient_id, class_index(r.label), *r.features});
    }
    return data;
}

}  // namespace pcg
