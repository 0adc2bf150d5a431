#include "pcg/wavelet.hpp"

#include <string>

#include "pcg/error.hpp"

namespace pcg::quality {
namespace {

// Reconstruction lowpass coefficients of db1..db4.
const std::vector<std::vector<double>> kRecLow = {
    {0.7071067811865476, 0.7071067811865476},
    {0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037},
    {0.33267055295008563, 0.8068915093110921, 0.4598775021184899, -0.13501102001025583,
     -0.08544127388202653, 0.035226291885709825},
    {0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859858,
     -0.18703481171909309, 0.030841381835560764, 0.0328830116668852, -0.010597401785069032},
};

}  // namespace

WaveletFilters daubechies(int order) {
    if (order < 1 || order > static_cast<int>(kRecLow.size())) {
        fail(Errc::InvalidSpec, "Daubechies order must be 1.." + std::to_string(kRecLow.size()));
    }
    const auto& rec = kRecLow[static_cast<std::size_t>(order - 1)];
    const std::size_t n = rec.size();
    WaveletFilters f;
    f.order = order;
    f.lowpass.resize(n);
    f.highpass.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        f.lowpass[j] = rec[n - 1 - j];
        f.highpass[j] = (j % 2 == 0 ? -1.0 : 1.0) * rec[j];
    }
    return f;
}

std::vector<double> analysis_step(std::span<const double> x, std::span<const double> filter) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto taps = static_cast<std::ptrdiff_t>(filter.size());
    const auto out_len = (n + taps - 1) / 2;
    std::vector<double> out(static_cast<std::size_t>(out_len));

    auto at = [&](std::ptrdiff_t i) {
        // half-point symmetric reflection; repeated for very short inputs
        while (i < 0 || i >= n) {
            if (i < 0) i = -1 - i;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return x[static_cast<std::size_t>(i)];
    };

    for (std::ptrdiff_t k = 0; k < out_len; ++k) {
        const std::ptrdiff_t centre = 2 * k + 1;
        double acc = 0.0;
        if (centre - taps + 1 >= 0 && centre < n) {
            const double* px = x.data() + centre;
            for (std::ptrdiff_t j = 0; j < taps; ++j) acc += filter[static_cast<std::size_t>(j)] * px[-j];
        } else {
            for (std::ptrdiff_t j = 0; j < taps; ++j) acc += filter[static_cast<std::size_t>(j)] * at(centre - j);
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

WaveletDecomposition dwt_approx3(std::span<const double> x, const WaveletFilters& filters) {
    const std::size_t min_len = 8 * filters.lowpass.size();
    if (x.size() < min_len) {
        fail(Errc::TooShort, "DWT needs at least " + std::to_string(min_len) + " samples, got " +
                                 std::to_string(x.size()));
    }
    WaveletDecomposition out;
    std::vector<double> approx(x.begin(), x.end());
    for (int level = 0; level < 3; ++level) {
        out.details[level] = analysis_step(approx, filters.highpass);
        approx = analysis_step(approx, filters.lowpass);
    }
    out.approx3 = std::move(approx);
    return out;
}

WaveletDecomposition dwt_approx3(std::span<const double> x) { return dwt_approx3(x, daubechies(4)); }

}  // namespace pcg::quality
