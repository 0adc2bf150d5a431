#include "pcg/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "pcg/error.hpp"

namespace pcg::features {

void FrameParams::validate() const {
    if (frame_len < 2 || hop == 0) fail(Errc::InvalidSpec, "frame_len must be >= 2 and hop > 0");
    if (hop * 2 != frame_len) fail(Errc::InvalidSpec, "hop must be frame_len / 2 (50% overlap)");
    if (n_mels < 2) fail(Errc::InvalidSpec, "need at least 2 mel filters");
    if (n_mfcc < 1 || n_mfcc > n_mels) fail(Errc::InvalidSpec, "n_mfcc must lie in 1..n_mels");
    if (fft_size < frame_len || (fft_size & (fft_size - 1)) != 0) {
        fail(Errc::InvalidSpec, "fft_size must be a power of two >= frame_len");
    }
    if (delta_window < 1) fail(Errc::InvalidSpec, "delta window must be >= 1");
}

std::vector<double> pre_emphasize(std::span<const double> x, double alpha) {
    std::vector<double> y(x.size());
    if (x.empty()) return y;
    y[0] = x[0];
    for (std::size_t n = 1; n < x.size(); ++n) y[n] = x[n] - alpha * x[n - 1];
    return y;
}

std::vector<double> hamming_window(std::size_t n, double alpha) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (1.0 - alpha) - alpha * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    }
    return w;
}

std::size_t frame_count(std::size_t len, const FrameParams& params) {
    if (len < params.frame_len) return 0;
    return (len - params.frame_len) / params.hop + 1;
}

std::vector<std::vector<double>> frame_and_window(std::span<const double> x, const FrameParams& params) {
    const std::size_t count = frame_count(x.size(), params);
    if (count == 0) {
        fail(Errc::TooShort, "signal of " + std::to_string(x.size()) + " samples is shorter than one frame (" +
                                 std::to_string(params.frame_len) + ")");
    }
    const auto window = hamming_window(params.frame_len, params.hamming_alpha);
    std::vector<std::vector<double>> frames(count, std::vector<double>(params.frame_len));
    for (std::size_t m = 0; m < count; ++m) {
        const double* src = x.data() + m * params.hop;
        for (std::size_t n = 0; n < params.frame_len; ++n) frames[m][n] = src[n] * window[n];
    }
    return frames;
}

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size) {
    if (frame.size() > fft_size) fail(Errc::ShapeMismatch, "frame longer than fft_size");
    std::vector<double> padded(fft_size, 0.0);
    std::copy(frame.begin(), frame.end(), padded.begin());

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, padded);

    std::vector<double> power(fft_size / 2 + 1);
    const double scale = 1.0 / static_cast<double>(fft_size);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spec[k]) * scale;
    return power;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(const FrameParams& params, double sample_rate) {
    if (params.n_mels < 2) fail(Errc::InvalidSpec, "need at least 2 mel filters");
    MelFilterbank bank;
    bank.n_filters = params.n_mels;
    bank.n_bins = params.fft_size / 2 + 1;

    const double mel_max = hz_to_mel(sample_rate / 2.0);
    const int n_points = params.n_mels + 2;
    bank.vertices.resize(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double mel = mel_max * i / (n_points - 1);
        bank.vertices[static_cast<std::size_t>(i)] =
            mel_to_hz(mel) * static_cast<double>(params.fft_size) / sample_rate;
    }

    bank.weights.assign(static_cast<std::size_t>(params.n_mels) * bank.n_bins, 0.0);
    for (int m = 0; m < params.n_mels; ++m) {
        const double left = bank.vertices[static_cast<std::size_t>(m)];
        const double centre = bank.vertices[static_cast<std::size_t>(m) + 1];
        const double right = bank.vertices[static_cast<std::size_t>(m) + 2];
        for (std::size_t k = 0; k < bank.n_bins; ++k) {
            const double kk = static_cast<double>(k);
            double h = 0.0;
            if (kk >= left && kk <= centre) {
                h = (kk - left) / (centre - left);
            } else if (kk > centre && kk <= right) {
                h = (right - kk) / (right - centre);
            }
            bank.weights[static_cast<std::size_t>(m) * bank.n_bins + k] = h;
        }
    }
    return bank;
}

std::vector<double> log_mel(std::span<const double> spectrum, const MelFilterbank& bank, double floor) {
    if (spectrum.size() != bank.n_bins) fail(Errc::ShapeMismatch, "spectrum and filterbank bin counts differ");
    std::vector<double> out(static_cast<std::size_t>(bank.n_filters));
    for (int m = 0; m < bank.n_filters; ++m) {
        const double* w = bank.weights.data() + static_cast<std::size_t>(m) * bank.n_bins;
        double acc = 0.0;
        for (std::size_t k = 0; k < bank.n_bins; ++k) acc += spectrum[k] * w[k];
        out[static_cast<std::size_t>(m)] = std::log(std::max(acc, floor));
    }
    return out;
}

std::vector<double> dct_mfcc(std::span<const double> log_energies, int n_out) {
    const auto m_count = static_cast<double>(log_energies.size());
    std::vector<double> out(static_cast<std::size_t>(n_out));
    for (int n = 1; n <= n_out; ++n) {
        double acc = 0.0;
        for (std::size_t m = 0; m < log_energies.size(); ++m) {
            acc += log_energies[m] * std::cos(std::numbers::pi * n * (static_cast<double>(m) + 0.5) / m_count);
        }
        out[static_cast<std::size_t>(n - 1)] = acc;
    }
    return out;
}

std::vector<std::vector<double>> delta(const std::vector<std::vector<double>>& frames, int window) {
    const auto t_count = static_cast<std::ptrdiff_t>(frames.size());
    if (t_count < 2 * window + 1) {
        fail(Errc::TooShort, "delta needs at least " + std::to_string(2 * window + 1) + " frames, got " +
                                 std::to_string(t_count));
    }
    double denom = 0.0;
    for (int n = 1; n <= window; ++n) denom += n * n;
    denom *= 2.0;

    auto clamp = [&](std::ptrdiff_t i) {
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, t_count - 1));
    };
    const std::size_t width = frames.front().size();
    std::vector<std::vector<double>> out(frames.size(), std::vector<double>(width, 0.0));
    for (std::ptrdiff_t t = 0; t < t_count; ++t) {
        auto& dst = out[static_cast<std::size_t>(t)];
        for (int n = 1; n <= window; ++n) {
            const auto& ahead = frames[clamp(t + n)];
            const auto& behind = frames[clamp(t - n)];
            for (std::size_t c = 0; c < width; ++c) dst[c] += n * (ahead[c] - behind[c]);
        }
        for (double& v : dst) v /= denom;
    }
    return out;
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> delta_features(
    const std::vector<std::vector<double>>& mfcc_frames, int window) {
    auto d1 = delta(mfcc_frames, window);
    auto d2 = delta(d1, window);
    return {std::move(d1), std::move(d2)};
}

FeatureMatrix extract_features(std::span<const double> samples, double sample_rate, const FrameParams& params) {
    params.validate();
    const auto emphasized = pre_emphasize(samples, params.pre_emphasis);
    const auto frames = frame_and_window(emphasized, params);
    const auto bank = mel_filterbank(params, sample_rate);

    std::vector<std::vector<double>> mfcc;
    mfcc.reserve(frames.size());
    for (const auto& frame : frames) {
        const auto spectrum = power_spectrum(frame, params.fft_size);
        mfcc.push_back(dct_mfcc(log_mel(spectrum, bank, params.log_floor), params.n_mfcc));
    }
    const auto [d1, d2] = delta_features(mfcc, params.delta_window);

    const auto l = static_cast<std::size_t>(params.n_mfcc);
    FeatureMatrix out;
    out.rows = 3 * l;
    out.cols = frames.size();
    out.values.resize(out.rows * out.cols);
    for (std::size_t t = 0; t < out.cols; ++t) {
        for (std::size_t c = 0; c < l; ++c) {
            out.at(c, t) = mfcc[t][c];
            out.at(l + c, t) = d1[t][c];
            out.at(2 * l + c, t) = d2[t][c];
        }
    }
    return out;
}

FeatureMatrix extract_features(const Segment& seg, const FrameParams& params) {
    return extract_features(seg.samples, seg.sample_rate, params);
}

}  // namespace pcg::features
