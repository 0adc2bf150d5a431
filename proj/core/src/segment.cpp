#include "pcg/segment.hpp"

#include <cmath>
#include <string>

#include "pcg/error.hpp"

namespace pcg {

std::vector<Segment> split_recording(const PcgRecording& rec, DurationClass duration) {
    rec.validate();
    if (rec.sample_rate != kNativeSampleRate) {
        fail(Errc::UnsupportedFormat,
             "expected 4000 Hz audio, got " + std::to_string(rec.sample_rate) + " Hz (resampling is not supported)");
    }
    const std::size_t len = segment_length(duration, rec.sample_rate);
    const std::size_t count = rec.samples.size() / len;
    if (count == 0) {
        fail(Errc::TooShort, "recording of " + std::to_string(rec.samples.size()) +
                                 " samples is shorter than one " + std::string(to_string(duration)) + " segment");
    }

    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Segment seg;
        const auto first = rec.samples.begin() + static_cast<std::ptrdiff_t>(i * len);
        seg.samples.assign(first, first + static_cast<std::ptrdiff_t>(len));
        seg.duration_class = duration;
        seg.sample_rate = rec.sample_rate;
        seg.patient_id = rec.patient_id;
        seg.position = rec.position;
        seg.label = rec.label;
        seg.recording_index = rec.index;
        seg.segment_index = static_cast<int>(i);
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace pcg
