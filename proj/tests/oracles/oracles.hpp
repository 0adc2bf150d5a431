#pragma once

// Deliberately naive re-implementations used only as test oracles. They
// share no code with the library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

// PyWavelets db4 decomposition filters, copied verbatim.
inline const std::vector<double> kDb4DecLo = {
    -0.010597401785069032, 0.0328830116668852, 0.030841381835560764, -0.18703481171909309,
    -0.027983769416859854, 0.6308807679298589, 0.7148465705529157,   0.2303778133088965};
inline const std::vector<double> kDb4DecHi = {
    -0.2303778133088965,  0.7148465705529157,   -0.6308807679298589, -0.027983769416859854,
    0.18703481171909309,  0.030841381835560764, -0.0328830116668852, -0.010597401785069032};

// Pad by L-1 samples of half-point symmetric reflection on both sides, take
// the full linear convolution and keep every second sample starting at L.
inline std::vector<double> dwt_step(const std::vector<double>& x, const std::vector<double>& f) {
    const long n = static_cast<long>(x.size());
    const long L = static_cast<long>(f.size());
    auto reflect = [&](long i) {
        while (i < 0 || i >= n) i = i < 0 ? -1 - i : 2 * n - 1 - i;
        return x[static_cast<std::size_t>(i)];
    };
    std::vector<double> padded;
    for (long i = -(L - 1); i < n + L - 1; ++i) padded.push_back(reflect(i));
    std::vector<double> full(padded.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < padded.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) full[i + j] += padded[i] * f[j];
    std::vector<double> out;
    const long count = (n + L - 1) / 2;
    for (long k = 0; k < count; ++k) out.push_back(full[static_cast<std::size_t>(L + 2 * k)]);
    return out;
}

struct Dwt3 {
    std::vector<double> a3, d1, d2, d3;
};

inline Dwt3 dwt3(const std::vector<double>& x) {
    Dwt3 r;
    r.d1 = dwt_step(x, kDb4DecHi);
    const auto a1 = dwt_step(x, kDb4DecLo);
    r.d2 = dwt_step(a1, kDb4DecHi);
    const auto a2 = dwt_step(a1, kDb4DecLo);
    r.d3 = dwt_step(a2, kDb4DecHi);
    r.a3 = dwt_step(a2, kDb4DecLo);
    return r;
}

// One-sided |X(k)|^2 / nfft of the zero-padded frame, k = 0..nfft/2.
inline std::vector<double> dft_power(const std::vector<double>& frame, std::size_t nfft) {
    std::vector<double> out(nfft / 2 + 1);
    for (std::size_t k = 0; k <= nfft / 2; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t n = 0; n < frame.size(); ++n) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * n % nfft) / static_cast<double>(nfft);
            acc += frame[n] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = std::norm(acc) / static_cast<double>(nfft);
    }
    return out;
}

// DCT-II, outputs n = 1..count.
inline std::vector<double> dct2(const std::vector<double>& e, int count) {
    std::vector<double> out;
    const double M = static_cast<double>(e.size());
    for (int n = 1; n <= count; ++n) {
        double acc = 0.0;
        for (std::size_t m = 0; m < e.size(); ++m) acc += e[m] * std::cos(std::numbers::pi * n * (m + 0.5) / M);
        out.push_back(acc);
    }
    return out;
}

// Schmidt spike removal written from the procedure description: 500 ms
// windows, trigger when max MAA > 3 x median MAA, zero from the last zero
// crossing before the peak to the first one after it.
inline std::vector<double> remove_spikes(std::vector<double> x, double fs) {
    const std::size_t w = static_cast<std::size_t>(std::llround(fs / 2.0));
    for (int guard = 0; guard < 1000000; ++guard) {
        std::vector<std::pair<std::size_t, std::size_t>> windows;
        for (std::size_t b = 0; b < x.size(); b += w) windows.push_back({b, std::min(x.size(), b + w)});
        std::vector<double> maa;
        for (auto [b, e] : windows) {
            double m = 0.0;
            for (std::size_t i = b; i < e; ++i) m = std::max(m, std::fabs(x[i]));
            maa.push_back(m);
        }
        std::vector<double> sorted = maa;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t c = sorted.size();
        const double median = c % 2 ? sorted[c / 2] : 0.5 * (sorted[c / 2 - 1] + sorted[c / 2]);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < maa.size(); ++i)
            if (maa[i] > maa[worst]) worst = i;
        if (!(maa[worst] > 3.0 * median)) return x;

        const auto [b, e] = windows[worst];
        std::size_t peak = b;
        for (std::size_t i = b; i < e; ++i)
            if (std::fabs(x[i]) > std::fabs(x[peak])) peak = i;
        auto crossing_pair = [&](std::size_t i) { return x[i] * x[i + 1] < 0.0; };
        std::size_t lo = b;
        for (std::size_t i = peak; i > b; --i) {
            const std::size_t j = i - 1;
            if (x[j] == 0.0 || crossing_pair(j)) {
                lo = j;
                break;
            }
        }
        std::size_t hi = e - 1;
        for (std::size_t i = peak + 1; i < e; ++i) {
            if (x[i] == 0.0 || crossing_pair(i - 1)) {
                hi = i;
                break;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) x[i] = 0.0;
    }
    return x;
}

struct Counts {
    long tp = 0, tn = 0, fp = 0, fn = 0;
};

// truth / pred: 1 = positive.
inline Counts recount(const std::vector<int>& truth, const std::vector<int>& pred) {
    Counts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1 && pred[i] == 1) c.tp++;
        if (truth[i] == 0 && pred[i] == 0) c.tn++;
        if (truth[i] == 0 && pred[i] == 1) c.fp++;
        if (truth[i] == 1 && pred[i] == 0) c.fn++;
    }
    return c;
}

}  // namespace oracle
