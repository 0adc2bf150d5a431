#pragma once

#include <vector>

#include "pcg/types.hpp"

namespace pcg {

// Non-overlapping consecutive segments from the start of the recording; an
// incomplete tail is discarded. Requires the native sample rate (4000 Hz);
// other rates are rejected with Errc::UnsupportedFormat rather than
// resampled. Throws Errc::TooShort if not even one segment fits.
std::vector<Segment> split_recording(const PcgRecording& rec, DurationClass duration);

}  // namespace pcg
