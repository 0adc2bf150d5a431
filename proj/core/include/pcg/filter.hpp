#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "pcg/types.hpp"

namespace pcg::preprocess {

struct FilterSpec {
    int order = 5;
    double low_cut = 25.0;   // Hz
    double high_cut = 400.0;  // Hz

    // Throws Errc::InvalidSpec unless 0 < low_cut < high_cut < fs / 2.
    void validate(double sample_rate) const;
};

// Transposed direct form II section, a0 normalized to 1.
struct Biquad {
    double b0 = 1, b1 = 0, b2 = 0;
    double a1 = 0, a2 = 0;
};

using SosCascade = std::vector<Biquad>;

// Digital Butterworth bandpass: analog prototype -> lowpass-to-bandpass ->
// bilinear transform with prewarped edges -> `order` conjugate-pole sections.
SosCascade design_butterworth_bandpass(const FilterSpec& spec, double sample_rate);

std::complex<double> frequency_response(const SosCascade& sos, double freq_hz, double sample_rate);

// Single forward pass. `state` holds two values per section and is updated.
std::vector<double> sosfilt(const SosCascade& sos, std::span<const double> x,
                            std::span<double> state);

// Steady-state initial conditions for a unit step input.
std::vector<double> sosfilt_zi(const SosCascade& sos);

// Zero-phase forward-backward filtering with odd-extension padding and
// steady-state initial conditions at both ends. Output length = input length.
std::vector<double> filtfilt(const SosCascade& sos, std::span<const double> x);

std::vector<double> bandpass_filter(std::span<const double> x, const FilterSpec& spec, double sample_rate);
Segment bandpass_filter(const Segment& seg, const FilterSpec& spec = {});

}  // namespace pcg::preprocess
