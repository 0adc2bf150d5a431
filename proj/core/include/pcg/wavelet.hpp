#pragma once

#include <span>
#include <vector>

namespace pcg::quality {

// Orthogonal Daubechies analysis filter pair. `order` follows the common
// dbN naming: dbN has 2N taps (db4 is the 8-tap filter).
struct WaveletFilters {
    int order = 4;
    std::vector<double> lowpass;   // decomposition lowpass h
    std::vector<double> highpass;  // decomposition highpass g[j] = (-1)^(j+1) h[L-1-j]
};

WaveletFilters daubechies(int order);

// One analysis step with half-point symmetric extension:
//   out[k] = sum_j f[j] * x_sym[2k + 1 - j],   k = 0 .. floor((N + L - 1) / 2) - 1
// where x_sym[-1-i] = x[i] and x_sym[N+i] = x[N-1-i].
std::vector<double> analysis_step(std::span<const double> x, std::span<const double> filter);

struct WaveletDecomposition {
    std::vector<double> approx3;
    std::vector<double> details[3];  // details[0] is level 1
};

// Three cascaded analysis steps. Throws Errc::TooShort unless
// x.size() >= 8 * filter length.
WaveletDecomposition dwt_approx3(std::span<const double> x, const WaveletFilters& filters);
WaveletDecomposition dwt_approx3(std::span<const double> x);

}  // namespace pcg::quality
