#pragma once

#include <span>

#include "pcg/types.hpp"
#include "pcg/wavelet.hpp"

namespace pcg::quality {

struct Thresholds {
    double rmssd = 0.4;
    double zcr = 0.4;
};

struct QualityReport {
    double rmssd = 0.0;
    double zcr = 0.0;
    bool suitable = false;
    // All-zero input: indicators are undefined (NaN) and suitable is false.
    bool degenerate = false;
    Thresholds thresholds;
};

// sqrt(sum_{i<N-1} (x[i+1] - x[i])^2 / (N - 1)). Throws Errc::TooShort for N < 2.
double compute_rmssd(std::span<const double> x);

// Fraction of the N-1 adjacent pairs with x[i] * x[i+1] <= 0 and
// |x[i+1] - x[i]| > 0. A step from exactly 0 to a nonzero value counts.
double compute_zcr(std::span<const double> x);

// suitable = rmssd <= thresholds.rmssd && zcr <= thresholds.zcr
bool passes(double rmssd, double zcr, Thresholds thresholds) noexcept;

// Scales x to max |x| = 1; returns false (leaving x untouched) if x is all zero.
bool normalize_max_abs(std::span<double> x) noexcept;

// Normalizes the segment, takes the level-3 approximation, normalizes that,
// then evaluates both indicators against the thresholds.
QualityReport assess_quality(std::span<const double> samples, Thresholds thresholds,
                             const WaveletFilters& filters);
QualityReport assess_quality(const Segment& seg, Thresholds thresholds, int wavelet_order = 4);

// Re-gates an existing report at other thresholds (indicators unchanged).
QualityReport regate(const QualityReport& report, Thresholds thresholds) noexcept;

}  // namespace pcg::quality
