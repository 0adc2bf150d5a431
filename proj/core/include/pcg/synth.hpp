#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>

#include "pcg/corpus.hpp"
#include "pcg/rng.hpp"
#include "pcg/types.hpp"

namespace pcg::synth {

enum class Murmur { None, Systolic };

// One synthetic heart: S1/S2 are Gaussian-enveloped cosine bursts; a
// systolic murmur is band-limited noise filling the S1-S2 interval.
struct SynthSpec {
    double heart_rate_bpm = 60.0;
    double s1_freq_hz = 60.0;
    double s1_width_ms = 15.0;  // Gaussian sigma
    double s2_freq_hz = 80.0;
    double s2_width_ms = 12.0;
    double s2_amplitude = 0.7;     // relative to S1
    double systole_fraction = 0.35;  // S1 -> S2 delay as a fraction of the cycle
    double phase_s = 0.1;            // time of the first S1

    Murmur murmur = Murmur::None;
    double murmur_low_hz = 150.0;
    double murmur_high_hz = 400.0;
    double murmur_amplitude = 0.2;  // RMS relative to the S1 peak

    // Slow sinusoidal drift (breathing / sensor contact). Also keeps the
    // quiet diastole from reading as pure white noise to the ZCR gate.
    double wander_amplitude = 0.1;
    double wander_freq_hz = 0.3;

    // White noise power relative to the heart + murmur power; infinity for none.
    double noise_snr_db = std::numeric_limits<double>::infinity();

    int spike_count = 0;
    double spike_ratio = 10.0;  // spike peak / heart peak

    double sample_rate = kNativeSampleRate;
    std::uint64_t seed = 0;

    // Throws Errc::InvalidSpec on out-of-range fields.
    void validate() const;
};

// The output is scaled so that max |x| = 0.9. Label is CHD iff a murmur is
// present. Throws Errc::InvalidSpec for duration_s < 3.
PcgRecording generate(const SynthSpec& spec, double duration_s);

struct CorpusSpec {
    int n_patients = 100;
    double chd_fraction = 0.63;
    double snr_db = 25.0;
    // Fraction of recordings generated at noisy_snr_db instead, to give the
    // quality gate something to reject.
    double noisy_fraction = 0.0;
    double noisy_snr_db = 0.0;
    double duration_s = 15.0;
    std::uint64_t seed = 0;
};

// Draws a class-consistent random spec for one recording.
SynthSpec random_spec(Rng& rng, bool chd);

// Writes <root>/<patient_id>/<POS>_0.wav for the four positions of every
// patient plus <root>/manifest.csv. round(n * chd_fraction) patients are CHD.
// Throws Errc::InvalidSpec for fewer than 4 patients.
Manifest generate_corpus(const CorpusSpec& spec, const std::filesystem::path& root);

}  // namespace pcg::synth
