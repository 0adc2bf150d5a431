#include "pcg/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pcg/error.hpp"

namespace pcg::quality {

double compute_rmssd(std::span<const double> x) {
    if (x.size() < 2) fail(Errc::TooShort, "RMSSD needs at least 2 values");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double d = x[i + 1] - x[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

double compute_zcr(std::span<const double> x) {
    if (x.size() < 2) fail(Errc::TooShort, "ZCR needs at least 2 values");
    std::size_t crossings = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (x[i] * x[i + 1] <= 0.0 && std::abs(x[i + 1] - x[i]) > 0.0) ++crossings;
    }
    return static_cast<double>(crossings) / static_cast<double>(x.size() - 1);
}

bool passes(double rmssd, double zcr, Thresholds thresholds) noexcept {
    return rmssd <= thresholds.rmssd && zcr <= thresholds.zcr;
}

bool normalize_max_abs(std::span<double> x) noexcept {
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) return false;
    for (double& v : x) v /= peak;
    return true;
}

QualityReport assess_quality(std::span<const double> samples, Thresholds thresholds,
                             const WaveletFilters& filters) {
    QualityReport report;
    report.thresholds = thresholds;

    std::vector<double> x(samples.begin(), samples.end());
    auto degenerate = [&] {
        report.degenerate = true;
        report.rmssd = std::numeric_limits<double>::quiet_NaN();
        report.zcr = std::numeric_limits<double>::quiet_NaN();
        report.suitable = false;
        return report;
    };
    if (!normalize_max_abs(x)) return degenerate();

    auto dec = dwt_approx3(x, filters);
    if (!normalize_max_abs(dec.approx3)) return degenerate();

    report.rmssd = compute_rmssd(dec.approx3);
    report.zcr = compute_zcr(dec.approx3);
    report.suitable = passes(report.rmssd, report.zcr, thresholds);
    return report;
}

QualityReport assess_quality(const Segment& seg, Thresholds thresholds, int wavelet_order) {
    return assess_quality(seg.samples, thresholds, daubechies(wavelet_order));
}

QualityReport regate(const QualityReport& report, Thresholds thresholds) noexcept {
    QualityReport out = report;
    out.thresholds = thresholds;
    out.suitable = !report.degenerate && passes(report.rmssd, report.zcr, thresholds);
    return out;
}

}  // namespace pcg::quality
