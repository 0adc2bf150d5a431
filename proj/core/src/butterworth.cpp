#include "pcg/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pcg/error.hpp"

namespace pcg::preprocess {

using cplx = std::complex<double>;

void FilterSpec::validate(double sample_rate) const {
    if (order < 1) fail(Errc::InvalidSpec, "filter order must be >= 1");
    if (!(low_cut > 0.0 && low_cut < high_cut && high_cut < sample_rate / 2.0)) {
        fail(Errc::InvalidSpec, "need 0 < low_cut < high_cut < fs/2, got " + std::to_string(low_cut) + ".." +
                                    std::to_string(high_cut) + " Hz at fs = " + std::to_string(sample_rate));
    }
}

SosCascade design_butterworth_bandpass(const FilterSpec& spec, double sample_rate) {
    spec.validate(sample_rate);
    const int n = spec.order;
    const double fs2 = 2.0 * sample_rate;

    // prewarped analog band edges (rad/s)
    const double wl = fs2 * std::tan(std::numbers::pi * spec.low_cut / sample_rate);
    const double wh = fs2 * std::tan(std::numbers::pi * spec.high_cut / sample_rate);
    const double bw = wh - wl;
    const double wo2 = wl * wh;

    // analog lowpass prototype poles on the unit circle, left half plane
    std::vector<cplx> proto;
    for (int m = -n + 1; m < n; m += 2) {
        proto.push_back(-std::exp(cplx(0.0, std::numbers::pi * m / (2.0 * n))));
    }

    // lowpass -> bandpass doubles the pole count; n zeros land at s = 0
    std::vector<cplx> poles;
    for (const cplx& p : proto) {
        const cplx scaled = p * (bw / 2.0);
        const cplx root = std::sqrt(scaled * scaled - wo2);
        poles.push_back(scaled + root);
        poles.push_back(scaled - root);
    }
    double gain = std::pow(bw, n);

    // bilinear transform: s = 0 zeros -> z = 1, zeros at infinity -> z = -1
    cplx num(1.0), den(1.0);
    for (int i = 0; i < n; ++i) num *= fs2;  // prod(fs2 - 0)
    for (cplx& p : poles) {
        den *= (fs2 - p);
        p = (fs2 + p) / (fs2 - p);
    }
    gain *= (num / den).real();

    // Pair each upper-half-plane pole with its conjugate; real poles pair up
    // with each other.
    std::vector<cplx> upper;
    std::vector<double> real;
    for (const cplx& p : poles) {
        if (std::abs(p.imag()) < 1e-12 * std::abs(p)) {
            real.push_back(p.real());
        } else if (p.imag() > 0.0) {
            upper.push_back(p);
        }
    }
    std::sort(upper.begin(), upper.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    std::sort(real.begin(), real.end());
    if (real.size() % 2 != 0) fail(Errc::InvalidSpec, "unexpected odd number of real poles");

    SosCascade sos;
    for (const cplx& p : upper) {
        Biquad q;
        q.b0 = 1.0;
        q.b1 = 0.0;
        q.b2 = -1.0;
        q.a1 = -2.0 * p.real();
        q.a2 = std::norm(p);
        sos.push_back(q);
    }
    for (std::size_t i = 0; i < real.size(); i += 2) {
        Biquad q;
        q.b0 = 1.0;
        q.b1 = 0.0;
        q.b2 = -1.0;
        q.a1 = -(real[i] + real[i + 1]);
        q.a2 = real[i] * real[i + 1];
        sos.push_back(q);
    }
    sos.front().b0 *= gain;
    sos.front().b2 *= gain;
    return sos;
}

std::complex<double> frequency_response(const SosCascade& sos, double freq_hz, double sample_rate) {
    const cplx zinv = std::exp(cplx(0.0, -2.0 * std::numbers::pi * freq_hz / sample_rate));
    cplx h(1.0);
    for (const Biquad& q : sos) {
        h *= (q.b0 + q.b1 * zinv + q.b2 * zinv * zinv) / (1.0 + q.a1 * zinv + q.a2 * zinv * zinv);
    }
    return h;
}

std::vector<double> sosfilt(const SosCascade& sos, std::span<const double> x, std::span<double> state) {
    if (state.size() != 2 * sos.size()) fail(Errc::ShapeMismatch, "sosfilt state must hold 2 values per section");
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        double z1 = state[2 * s];
        double z2 = state[2 * s + 1];
        for (double& v : y) {
            const double in = v;
            const double out = q.b0 * in + z1;
            z1 = q.b1 * in - q.a1 * out + z2;
            z2 = q.b2 * in - q.a2 * out;
            v = out;
        }
        state[2 * s] = z1;
        state[2 * s + 1] = z2;
    }
    return y;
}

std::vector<double> sosfilt_zi(const SosCascade& sos) {
    std::vector<double> zi(2 * sos.size());
    double scale = 1.0;
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        const double dc = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
        zi[2 * s] = scale * (dc - q.b0);
        zi[2 * s + 1] = scale * (q.b2 - q.a2 * dc);
        scale *= dc;
    }
    return zi;
}

std::vector<double> filtfilt(const SosCascade& sos, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    std::size_t pad = 3 * (2 * sos.size() + 1);
    pad = std::min(pad, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    const auto zi = sosfilt_zi(sos);
    std::vector<double> state(zi.size());

    for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * ext.front();
    auto fwd = sosfilt(sos, ext, state);

    std::reverse(fwd.begin(), fwd.end());
    for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * fwd.front();
    auto bwd = sosfilt(sos, fwd, state);
    std::reverse(bwd.begin(), bwd.end());

    return {bwd.begin() + static_cast<std::ptrdiff_t>(pad), bwd.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> bandpass_filter(std::span<const double> x, const FilterSpec& spec, double sample_rate) {
    return filtfilt(design_butterworth_bandpass(spec, sample_rate), x);
}

Segment bandpass_filter(const Segment& seg, const FilterSpec& spec) {
    Segment out = seg;
    out.samples = bandpass_filter(seg.samples, spec, seg.sample_rate);
    return out;
}

}  // namespace pcg::preprocess
