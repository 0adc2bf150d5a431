#pragma once

#include <span>
#include <vector>

#include "pcg/types.hpp"

namespace pcg::preprocess {

struct SpikeRemovalStats {
    int iterations = 0;  // number of spikes zeroed
};

// Schmidt spike removal. The signal is cut into non-overlapping windows of
// 500 ms (the tail window keeps its actual length). While the largest
// window maximum-absolute-amplitude (MAA) exceeds 3x the median MAA, the
// spike at the peak of that window is zeroed from the last zero crossing
// before the peak through the first zero crossing after it, inclusive.
// A zero crossing is an exactly-zero sample or a sign change between
// neighbours; with none inside the window, the window edge is used.
// Throws Errc::TooShort for fewer samples than one window.
std::vector<double> remove_spikes(std::span<const double> x, double sample_rate,
                                  SpikeRemovalStats* stats = nullptr);
Segment remove_spikes(const Segment& seg);

}  // namespace pcg::preprocess
