#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pcg/types.hpp"

namespace pcg::features {

struct FrameParams {
    std::size_t frame_len = 768;  // 192 ms at 4 kHz
    std::size_t hop = 384;        // 50% overlap
    double hamming_alpha = 0.46;
    double pre_emphasis = 0.97;
    int n_mels = 26;
    int n_mfcc = 13;
    int delta_window = 2;
    std::size_t fft_size = 1024;
    double log_floor = 1e-10;

    // Throws Errc::InvalidSpec when hop != frame_len / 2, n_mfcc > n_mels or
    // fft_size < frame_len (or fft_size is not a power of two).
    void validate() const;
};

// Rows 0..12 MFCC, 13..25 delta, 26..38 delta-delta; one column per frame.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

std::vector<double> pre_emphasize(std::span<const double> x, double alpha);

// W(n) = (1 - alpha) - alpha * cos(2 pi n / (N - 1))
std::vector<double> hamming_window(std::size_t n, double alpha);

// floor((len - frame_len) / hop) + 1, or 0 if len < frame_len.
std::size_t frame_count(std::size_t len, const FrameParams& params);

std::vector<std::vector<double>> frame_and_window(std::span<const double> x, const FrameParams& params);

// |X(k)|^2 / fft_size for k = 0 .. fft_size / 2 of the zero-padded frame.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelFilterbank {
    int n_filters = 0;
    std::size_t n_bins = 0;
    // n_filters + 2 vertex positions on the (fractional) FFT-bin axis;
    // filter m rises over [vertex[m], vertex[m+1]] and falls over
    // [vertex[m+1], vertex[m+2]].
    std::vector<double> vertices;
    std::vector<double> weights;  // n_filters x n_bins, row-major

    double weight(int m, std::size_t k) const { return weights[static_cast<std::size_t>(m) * n_bins + k]; }
};

// Vertices equally spaced in mel between 0 Hz and fs / 2.
MelFilterbank mel_filterbank(const FrameParams& params, double sample_rate);

// ln(max(sum_k S(k) H_m(k), floor)) for each filter.
std::vector<double> log_mel(std::span<const double> spectrum, const MelFilterbank& bank, double floor = 1e-10);

// DCT-II, coefficients n = 1 .. n_out (the DC term is dropped):
// c_n = sum_m e(m) cos(pi n (m + 0.5) / M).
std::vector<double> dct_mfcc(std::span<const double> log_energies, int n_out);

// Regression deltas over +-window frames with edge replication.
// frames[t] is the coefficient vector of frame t. Throws Errc::TooShort if
// there are fewer than 2 * window + 1 frames.
std::vector<std::vector<double>> delta(const std::vector<std::vector<double>>& frames, int window);
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> delta_features(
    const std::vector<std::vector<double>>& mfcc_frames, int window);

FeatureMatrix extract_features(std::span<const double> samples, double sample_rate, const FrameParams& params = {});
FeatureMatrix extract_features(const Segment& seg, const FrameParams& params = {});

}  // namespace pcg::features
