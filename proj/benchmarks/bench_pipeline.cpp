#include <benchmark/benchmark.h>

#include "pcg/filter.hpp"
#include "pcg/mfcc.hpp"
#include "pcg/model.hpp"
#include "pcg/quality.hpp"
#include "pcg/spikes.hpp"
#include "pcg/synth.hpp"

using namespace pcg;

namespace {

std::vector<double> heartbeat(double seconds) {
    synth::SynthSpec spec;
    spec.murmur = synth::Murmur::Systolic;
    spec.noise_snr_db = 25.0;
    spec.seed = 1;
    return synth::generate(spec, seconds).samples;
}

// range(0) is the segment length in seconds
void BM_QualityGate(benchmark::State& state) {
    const auto x = heartbeat(static_cast<double>(state.range(0)));
    const auto filters = quality::daubechies(4);
    for (auto _ : state) benchmark::DoNotOptimize(quality::assess_quality(x, {}, filters));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_QualityGate)->Arg(3)->Arg(5)->Arg(15);

void BM_Bandpass(benchmark::State& state) {
    const auto x = heartbeat(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(preprocess::bandpass_filter(x, {}, 4000.0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_Bandpass)->Arg(3)->Arg(5)->Arg(15);

void BM_SpikeRemoval(benchmark::State& state) {
    const auto x = heartbeat(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(preprocess::remove_spikes(x, 4000.0));
}
BENCHMARK(BM_SpikeRemoval)->Arg(5)->Arg(15);

void BM_Features(benchmark::State& state) {
    const auto x = heartbeat(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(features::extract_features(x, 4000.0));
}
BENCHMARK(BM_Features)->Arg(3)->Arg(5)->Arg(15);

// range(0) frames, range(1) batch
void BM_ModelForward(benchmark::State& state) {
    model::Model m;
    m.init(Rng(3));
    const int t = static_cast<int>(state.range(0));
    const int batch = static_cast<int>(state.range(1));
    Rng rng(4);
    model::Matrix x(39, t * batch);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(m.forward(x, batch, model::Mode::Eval));
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ModelForward)->Args({51, 1})->Args({51, 32})->Args({155, 32});

void BM_TrainStep(benchmark::State& state) {
    model::Model m;
    m.init(Rng(3));
    const int batch = 32;
    Rng rng(5);
    model::Matrix x(39, 51 * batch);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    std::vector<int> labels(batch);
    for (int b = 0; b < batch; ++b) labels[static_cast<std::size_t>(b)] = b % 2;
    Rng drop(6);
    for (auto _ : state) {
        m.zero_grad();
        benchmark::DoNotOptimize(m.loss_and_gradients(x, batch, labels, {1.0, 1.0}, &drop));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TrainStep);

}  // namespace

BENCHMARK_MAIN();
