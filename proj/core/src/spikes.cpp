#include "pcg/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcg/error.hpp"

namespace pcg::preprocess {
namespace {

bool sign_change(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> remove_spikes(std::span<const double> x, double sample_rate, SpikeRemovalStats* stats) {
    const auto window = static_cast<std::size_t>(std::llround(0.5 * sample_rate));
    if (window == 0 || x.size() < window) {
        fail(Errc::TooShort, "spike removal needs at least one 500 ms window (" + std::to_string(window) +
                                 " samples), got " + std::to_string(x.size()));
    }
    std::vector<double> y(x.begin(), x.end());
    const std::size_t n_windows = (y.size() + window - 1) / window;
    std::vector<double> maa(n_windows);

    int removed = 0;
    for (;;) {
        for (std::size_t w = 0; w < n_windows; ++w) {
            const std::size_t lo = w * window;
            const std::size_t hi = std::min(lo + window, y.size());
            double m = 0.0;
            for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(y[i]));
            maa[w] = m;
        }
        const auto worst = static_cast<std::size_t>(std::max_element(maa.begin(), maa.end()) - maa.begin());
        if (!(maa[worst] > 3.0 * median(maa))) break;

        const std::size_t lo = worst * window;
        const std::size_t hi = std::min(lo + window, y.size());  // exclusive
        std::size_t peak = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            if (std::abs(y[i]) > std::abs(y[peak])) peak = i;
        }

        std::size_t start = lo;
        for (std::size_t i = peak; i-- > lo;) {
            if (y[i] == 0.0 || sign_change(y[i], y[i + 1])) {
                start = i;
                break;
            }
        }
        std::size_t end = hi - 1;
        for (std::size_t i = peak + 1; i < hi; ++i) {
            if (y[i] == 0.0 || sign_change(y[i - 1], y[i])) {
                end = i;
                break;
            }
        }
        std::fill(y.begin() + static_cast<std::ptrdiff_t>(start), y.begin() + static_cast<std::ptrdiff_t>(end + 1), 0.0);
        ++removed;
    }
    if (stats) stats->iterations = removed;
    return y;
}

Segment remove_spikes(const Segment& seg) {
    Segment out = seg;
    out.samples = remove_spikes(seg.samples, seg.sample_rate);
    return out;
}

}  // namespace pcg::preprocess
