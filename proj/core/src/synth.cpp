#include "pcg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "pcg/error.hpp"
#include "pcg/filter.hpp"
#include "pcg/rng.hpp"
#include "pcg/wav.hpp"

namespace pcg::synth {
namespace {

constexpr double kPeak = 0.9;

void add_burst(std::vector<double>& x, double fs, double center_s, double freq, double sigma_s, double amp) {
    const double lo = std::max(0.0, std::floor((center_s - 5.0 * sigma_s) * fs));
    const double hi = std::min(static_cast<double>(x.size()), std::ceil((center_s + 5.0 * sigma_s) * fs));
    for (auto i = static_cast<std::size_t>(lo); i < static_cast<std::size_t>(std::max(lo, hi)); ++i) {
        const double dt = static_cast<double>(i) / fs - center_s;
        x[i] += amp * std::exp(-0.5 * dt * dt / (sigma_s * sigma_s)) * std::cos(2.0 * std::numbers::pi * freq * dt);
    }
}

double power(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

}  // namespace

void SynthSpec::validate() const {
    const double nyquist = sample_rate / 2.0;
    auto check = [](bool ok, const char* what) {
        if (!ok) fail(Errc::InvalidSpec, std::string("synth spec: ") + what);
    };
    check(sample_rate > 0.0, "sample_rate must be positive");
    check(heart_rate_bpm >= 60.0 && heart_rate_bpm <= 160.0, "heart rate must lie in [60, 160] bpm");
    check(s1_freq_hz > 0.0 && s1_freq_hz < nyquist && s2_freq_hz > 0.0 && s2_freq_hz < nyquist,
          "S1/S2 frequencies must lie below Nyquist");
    check(s1_width_ms > 0.0 && s2_width_ms > 0.0, "envelope widths must be positive");
    check(systole_fraction > 0.0 && systole_fraction < 1.0, "S2 must follow S1 within the cycle");
    check(phase_s >= 0.0, "phase must be non-negative");
    check(s2_amplitude >= 0.0 && murmur_amplitude >= 0.0 && wander_amplitude >= 0.0, "amplitudes must be >= 0");
    if (murmur != Murmur::None) {
        check(murmur_low_hz > 0.0 && murmur_low_hz < murmur_high_hz && murmur_high_hz < nyquist,
              "murmur band must satisfy 0 < low < high < Nyquist");
    }
    check(wander_freq_hz >= 0.0 && wander_freq_hz < nyquist, "wander frequency out of range");
    check(!std::isnan(noise_snr_db), "noise SNR is NaN");
    check(spike_count >= 0 && spike_ratio > 1.0, "spike_count >= 0 and spike_ratio > 1 required");
}

PcgRecording generate(const SynthSpec& spec, double duration_s) {
    spec.validate();
    if (!(duration_s >= 3.0)) fail(Errc::InvalidSpec, "synthetic recordings must be at least 3 s long");
    const double fs = spec.sample_rate;
    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
    Rng rng = Rng(spec.seed).split("synth");

    const double cycle = 60.0 / spec.heart_rate_bpm;
    const double systole = spec.systole_fraction * cycle;
    std::vector<double> heart(n, 0.0);
    for (double t1 = spec.phase_s; t1 < duration_s + cycle; t1 += cycle) {
        add_burst(heart, fs, t1, spec.s1_freq_hz, spec.s1_width_ms * 1e-3, 1.0);
        add_burst(heart, fs, t1 + systole, spec.s2_freq_hz, spec.s2_width_ms * 1e-3, spec.s2_amplitude);
    }

    if (spec.murmur == Murmur::Systolic) {
        Rng mrng = rng.split("murmur");
        std::vector<double> white(n);
        for (double& v : white) v = mrng.normal();
        const preprocess::FilterSpec band{4, spec.murmur_low_hz, spec.murmur_high_hz};
        std::vector<double> noise = preprocess::filtfilt(preprocess::design_butterworth_bandpass(band, fs), white);
        const double rms = std::sqrt(power(noise));
        // raised-cosine gate over the gap between the S1 and S2 envelopes
        const double margin = 2.5 * spec.s1_width_ms * 1e-3;
        const double start = margin;
        const double stop = systole - 2.5 * spec.s2_width_ms * 1e-3;
        if (stop > start && rms > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs - spec.phase_s;
                double u = std::fmod(t, cycle);
                if (u < 0.0) u += cycle;
                if (u <= start || u >= stop) continue;
                const double g = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (u - start) / (stop - start));
                heart[i] += spec.murmur_amplitude * std::sqrt(2.0) * g * noise[i] / rms;
            }
        }
    }

    std::vector<double> x = heart;
    if (std::isfinite(spec.noise_snr_db)) {
        Rng nrng = rng.split("noise");
        const double sigma = std::sqrt(power(heart) / std::pow(10.0, spec.noise_snr_db / 10.0));
        for (double& v : x) v += sigma * nrng.normal();
    }
    if (spec.wander_amplitude > 0.0) {
        const double ph = rng.split("wander").uniform(0.0, 2.0 * std::numbers::pi);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += spec.wander_amplitude *
                    std::sin(2.0 * std::numbers::pi * spec.wander_freq_hz * static_cast<double>(i) / fs + ph);
        }
    }

    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (spec.spike_count > 0) {
        // short biphasic clicks well away from the segment edges
        Rng srng = rng.split("spikes");
        const double amp = spec.spike_ratio * peak;
        const auto width = static_cast<std::size_t>(std::max(2.0, 0.002 * fs));
        for (int s = 0; s < spec.spike_count; ++s) {
            const auto at = static_cast<std::size_t>(srng.below(n - 4 * width)) + 2 * width;
            for (std::size_t k = 0; k < width; ++k) {
                const double w = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(width));
                x[at + k] += amp * w;
            }
        }
        peak = 0.0;
        for (double v : x) peak = std::max(peak, std::abs(v));
    }
    if (peak > 0.0) {
        for (double& v : x) v *= kPeak / peak;
    }

    PcgRecording rec;
    rec.samples = std::move(x);
    rec.sample_rate = fs;
    rec.label = spec.murmur == Murmur::None ? Label::NonChd : Label::Chd;
    return rec;
}

SynthSpec random_spec(Rng& rng, bool chd) {
    SynthSpec s;
    s.heart_rate_bpm = rng.uniform(70.0, 130.0);
    s.s1_freq_hz = rng.uniform(50.0, 80.0);
    s.s1_width_ms = rng.uniform(12.0, 18.0);
    s.s2_freq_hz = rng.uniform(60.0, 100.0);
    s.s2_width_ms = rng.uniform(10.0, 15.0);
    s.s2_amplitude = rng.uniform(0.5, 0.8);
    s.systole_fraction = rng.uniform(0.33, 0.40);
    s.phase_s = rng.uniform(0.0, 60.0 / s.heart_rate_bpm);
    s.wander_amplitude = rng.uniform(0.05, 0.1);
    s.wander_freq_hz = rng.uniform(0.2, 0.5);
    if (chd) {
        s.murmur = Murmur::Systolic;
        s.murmur_low_hz = rng.uniform(150.0, 200.0);
        s.murmur_high_hz = rng.uniform(300.0, 400.0);
        s.murmur_amplitude = rng.uniform(0.1, 0.3);
    }
    s.seed = rng();
    return s;
}

Manifest generate_corpus(const CorpusSpec& spec, const std::filesystem::path& root) {
    if (spec.n_patients < 4) fail(Errc::InvalidSpec, "a synthetic corpus needs at least 4 patients");
    if (!(spec.chd_fraction >= 0.0 && spec.chd_fraction <= 1.0)) fail(Errc::InvalidSpec, "chd_fraction outside [0, 1]");
    if (!(spec.noisy_fraction >= 0.0 && spec.noisy_fraction <= 1.0)) {
        fail(Errc::InvalidSpec, "noisy_fraction outside [0, 1]");
    }
    const Rng base = Rng(spec.seed).split("corpus");

    const auto n = static_cast<std::size_t>(spec.n_patients);
    const auto n_chd = static_cast<std::size_t>(std::llround(spec.chd_fraction * static_cast<double>(n)));
    std::vector<char> chd(n, 0);
    std::fill(chd.begin(), chd.begin() + static_cast<std::ptrdiff_t>(n_chd), char{1});
    Rng label_rng = base.split("labels");
    label_rng.shuffle(std::span<char>(chd));

    Manifest manifest;
    manifest.root = root;
    std::filesystem::create_directories(root);
    constexpr Position kPositions[] = {Position::MV, Position::TV, Position::PV, Position::AV};
    for (std::size_t p = 0; p < n; ++p) {
        char id[32];
        std::snprintf(id, sizeof id, "P%04zu", p + 1);
        Rng prng = base.split(p);
        Rng demo = prng.split("demographics");
        const double age = std::round(demo.uniform(0.0, 16.0) * 10.0) / 10.0;
        const Sex sex = demo.bernoulli(0.5) ? Sex::Male : Sex::Female;

        // one heart per patient; each position sees it with its own gain,
        // phase, noise and wander
        Rng heart_rng = prng.split("heart");
        const SynthSpec heart = random_spec(heart_rng, chd[p] != 0);
        std::filesystem::create_directories(root / id);
        for (const Position pos : kPositions) {
            Rng rrng = prng.split(to_string(pos));
            SynthSpec s = heart;
            s.s2_amplitude = std::clamp(heart.s2_amplitude * rrng.uniform(0.85, 1.15), 0.3, 1.0);
            s.phase_s = rrng.uniform(0.0, 60.0 / s.heart_rate_bpm);
            s.wander_amplitude = rrng.uniform(0.05, 0.1);
            s.wander_freq_hz = rrng.uniform(0.2, 0.5);
            if (s.murmur != Murmur::None) s.murmur_amplitude = heart.murmur_amplitude * rrng.uniform(0.8, 1.2);
            s.noise_snr_db = rrng.bernoulli(spec.noisy_fraction) ? spec.noisy_snr_db : spec.snr_db;
            s.seed = rrng();

            PcgRecording rec = generate(s, spec.duration_s);
            const std::string rel = std::string(id) + "/" + std::string(to_string(pos)) + "_0.wav";
            write_wav(root / rel, rec.samples, rec.sample_rate);

            ManifestEntry e;
            e.patient_id = id;
            e.position = pos;
            e.label = rec.label;
            e.age_years = age;
            e.sex = sex;
            e.path = rel;
            manifest.entries.push_back(std::move(e));
        }
    }
    write_manifest(manifest);
    return manifest;
}

}  // namespace pcg::synth
