#include <numbers>

#include "../oracles/oracles.hpp"
#include "helpers.hpp"
#include "pcg/filter.hpp"
#include "pcg/spikes.hpp"
#include "pcg/synth.hpp"
#include "reference_values.hpp"

using namespace pcg;
using namespace pcg::preprocess;

namespace {

std::vector<double> sine(double freq, std::size_t n, double fs = 4000.0, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * freq * i / fs + phase);
    return x;
}

// Peak amplitude over the middle half, away from the filtfilt edges.
double steady_amplitude(const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = y.size() / 4; i < 3 * y.size() / 4; ++i) m = std::max(m, std::abs(y[i]));
    return m;
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("magnitude response matches frozen SciPy design") {
    const auto sos = design_butterworth_bandpass({}, 4000.0);
    CHECK(sos.size() == 5);
    for (std::size_t i = 0; i < ref::kButterFreqs.size(); ++i) {
        const double g = std::abs(frequency_response(sos, ref::kButterFreqs[i], 4000.0));
        CHECK(g == doctest::Approx(ref::kButterGain[i]).epsilon(1e-9));
    }
    CHECK(std::abs(frequency_response(sos, 25.0, 4000.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("filtfilt matches frozen SciPy sosfiltfilt") {
    std::vector<double> x(400);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = n / 4000.0;
        x[n] = std::sin(2 * std::numbers::pi * 100 * t) + 0.5 * std::sin(2 * std::numbers::pi * 7 * t) +
               0.2 * std::sin(2 * std::numbers::pi * 900 * t);
    }
    const auto y = bandpass_filter(x, {}, 4000.0);
    REQUIRE(y.size() == x.size());
    for (std::size_t k = 0; k < ref::kFiltfiltEvery8.size(); ++k) {
        CHECK(std::abs(y[8 * k] - ref::kFiltfiltEvery8[k]) < 1e-9);
    }
}

TEST_CASE("passband kept, stopbands removed") {
    CHECK(steady_amplitude(bandpass_filter(sine(100, 20000), {}, 4000.0)) >= 0.95);
    CHECK(steady_amplitude(bandpass_filter(sine(100, 20000), {}, 4000.0)) <= 1.0 + 1e-9);
    CHECK(steady_amplitude(bandpass_filter(sine(2, 20000), {}, 4000.0)) < 0.01);
    CHECK(steady_amplitude(bandpass_filter(sine(1900, 20000), {}, 4000.0)) < 0.01);
}

TEST_CASE("zero phase in the passband") {
    const auto x = sine(100, 20000, 4000.0, 0.3);
    const auto y = bandpass_filter(x, {}, 4000.0);
    // cross-correlation peak at lag 0
    auto corr = [&](int lag) {
        double acc = 0.0;
        for (std::size_t i = 5000; i < 15000; ++i) acc += x[i] * y[static_cast<std::size_t>(static_cast<long>(i) + lag)];
        return acc;
    };
    CHECK(corr(0) > corr(1));
    CHECK(corr(0) > corr(-1));
    // rising zero crossings line up within a sample
    for (std::size_t i = 5000; i < 15000; ++i) {
        if (x[i - 1] < 0 && x[i] >= 0) {
            CHECK((y[i - 2] < 0 || y[i - 1] < 0 || y[i] < 0 || y[i + 1] < 0));
            CHECK((y[i - 1] >= 0 || y[i] >= 0 || y[i + 1] >= 0));
        }
    }
}

TEST_CASE("linearity and zero input") {
    const auto a = testing::random_vector(6000, 1), b = testing::random_vector(6000, 2);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = 0.7 * a[i] - 1.3 * b[i];
    const auto fa = bandpass_filter(a, {}, 4000.0), fb = bandpass_filter(b, {}, 4000.0);
    const auto fm = bandpass_filter(mix, {}, 4000.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(fm[i] - (0.7 * fa[i] - 1.3 * fb[i])) < 1e-9);
    for (double v : bandpass_filter(std::vector<double>(5000, 0.0), {}, 4000.0)) CHECK(v == 0.0);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_ERRC(design_butterworth_bandpass({5, 400.0, 25.0}, 4000.0), Errc::InvalidSpec);
    CHECK_ERRC(design_butterworth_bandpass({5, 25.0, 2000.0}, 4000.0), Errc::InvalidSpec);
    CHECK_ERRC(design_butterworth_bandpass({0, 25.0, 400.0}, 4000.0), Errc::InvalidSpec);
}

TEST_CASE("clean 60 bpm heartbeat passes spike removal untouched") {
    synth::SynthSpec spec;
    spec.heart_rate_bpm = 60.0;
    spec.phase_s = 0.1;
    spec.systole_fraction = 0.5;  // one burst in every 500 ms window
    const auto rec = synth::generate(spec, 15.0);
    SpikeRemovalStats stats;
    const auto y = remove_spikes(rec.samples, 4000.0, &stats);
    CHECK(y == rec.samples);
    CHECK(stats.iterations == 0);
}

TEST_CASE("inserted spike is zeroed, everything else bit-identical") {
    synth::SynthSpec spec;
    spec.systole_fraction = 0.5;
    spec.noise_snr_db = 30.0;
    spec.seed = 4;
    auto x = synth::generate(spec, 5.0).samples;
    const auto clean = x;
    const std::size_t at = 7310;
    for (int k = 0; k < 8; ++k) x[at + k] += 9.0 * std::sin(std::numbers::pi * (k + 0.5) / 8.0);

    const auto y = remove_spikes(x, 4000.0);
    const auto want = oracle::remove_spikes(x, 4000.0);
    CHECK(y == want);
    for (int k = 0; k < 8; ++k) CHECK(y[at + k] == 0.0);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] != x[i]) {
            ++changed;
            CHECK(y[i] == 0.0);
        }
    }
    CHECK(changed < 40);
    (void)clean;
}

TEST_CASE("two spikes in different windows both go") {
    synth::SynthSpec spec;
    spec.systole_fraction = 0.5;
    spec.spike_count = 2;
    spec.seed = 21;
    const auto x = synth::generate(spec, 5.0).samples;
    SpikeRemovalStats stats;
    const auto y = remove_spikes(x, 4000.0, &stats);
    CHECK(y == oracle::remove_spikes(x, 4000.0));
    CHECK(stats.iterations >= 2);
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    CHECK(peak < 0.5);
}

TEST_CASE("idempotent, never grows, agrees with brute force") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        synth::SynthSpec spec;
        Rng rng(seed);
        spec = synth::random_spec(rng, seed % 2 == 0);
        spec.noise_snr_db = 20.0;
        spec.spike_count = static_cast<int>(seed % 3);
        const auto x = synth::generate(spec, 3.0).samples;
        const auto once = remove_spikes(x, 4000.0);
        CHECK(remove_spikes(once, 4000.0) == once);
        CHECK(once == oracle::remove_spikes(x, 4000.0));
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx = std::max(mx, std::abs(x[i]));
            my = std::max(my, std::abs(once[i]));
        }
        CHECK(my <= mx);
    }
    CHECK_ERRC(remove_spikes(std::vector<double>(1999, 0.1), 4000.0), Errc::TooShort);
}

}  // TEST_SUITE
