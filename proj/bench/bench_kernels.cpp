// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "relcap/parallel.hpp"

using namespace relcap;

namespace {

Trajectory bench_path() {
    return make_trajectory(PolygonParams{{{1, 1, 0}, {-1, 1, 0.5}, {-1, -1, 0}, {2, -1, 0}, {1, 1, 0}}, 0.7, 3});
}

std::vector<ZeroMeanProfile> bench_profiles() {
    RandomSuiteOptions opts;
    opts.count = 1000;
    return random_profiles(opts);
}

std::vector<parallel::Scenario> bench_scenarios() {
    std::vector<parallel::Scenario> out;
    for (int i = 0; i < 16; ++i) {
        const double beta = 0.1 + 0.05 * i;
        out.push_back({make_trajectory(CircleParams{1.0, beta, {1.5, 0.2, 0.0}, 2}), ChannelParams::with_sigma(5.0)});
    }
    return out;
}

void BM_ExtremalSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(extremal_oracle(0.5, 400, 400));
}

void BM_ExtremalParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parallel::extremal_oracle(0.5, 400, 400));
}

void BM_RadialSerial(benchmark::State& state) {
    const Trajectory traj = bench_path();
    for (auto _ : state) benchmark::DoNotOptimize(max_abs_radial(traj, 200000));
}

void BM_RadialParallel(benchmark::State& state) {
    const Trajectory traj = bench_path();
    for (auto _ : state) benchmark::DoNotOptimize(parallel::max_abs_radial(traj, 200000));
}

void BM_TheoremSerial(benchmark::State& state) {
    const auto profiles = bench_profiles();
    for (auto _ : state) {
        std::vector<InequalityWitness> out;
        out.reserve(profiles.size());
        for (const auto& f : profiles) out.push_back(check_theorem1(f));
        benchmark::DoNotOptimize(out);
    }
}

void BM_TheoremParallel(benchmark::State& state) {
    const auto profiles = bench_profiles();
    for (auto _ : state) benchmark::DoNotOptimize(parallel::check_theorem1_batch(profiles));
}

void BM_CompareSerial(benchmark::State& state) {
    const auto scenarios = bench_scenarios();
    for (auto _ : state) {
        std::vector<CapacityReport> out;
        for (const auto& s : scenarios) out.push_back(compare_symmetric(s.trajectory, s.channel));
        benchmark::DoNotOptimize(out);
    }
}

void BM_CompareParallel(benchmark::State& state) {
    const auto scenarios = bench_scenarios();
    for (auto _ : state) benchmark::DoNotOptimize(parallel::compare_symmetric_batch(scenarios));
}

}  // namespace

BENCHMARK(BM_ExtremalSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtremalParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RadialSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RadialParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TheoremSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheoremParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CompareSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompareParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
