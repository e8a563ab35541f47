/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference kernels against their OpenMP counterparts.

#include "mvlevy/drift.hpp"
#include "mvlevy/kernels.hpp"
#include "mvlevy/sampler.hpp"
#include "mvlevy/solver.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

using namespace mvlevy;

namespace {

std::vector<double> normal_samples(std::size_t n) {
    RandomStream rng(1, 0);
    std::vector<double> x(n);
    for (auto &v : x) v = rng.normal();
    return x;
}

template <bool Parallel>
void bm_ecf(benchmark::State &state) {
    const auto x = normal_samples(static_cast<std::size_t>(state.range(0)));
    const std::vector<double> xi{0.7};
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::ecf_omp(x, 1, xi) : kernels::ecf_serial(x, 1, xi));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void bm_increments(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SamplerPlan plan(LevyModel::isotropic_stable(1, 1.5));
    std::vector<RandomStream> streams;
    for (std::size_t i = 0; i < n; ++i) streams.emplace_back(1, i);
    std::vector<double> out(n);
    for (auto _ : state) {
        if (Parallel)
            kernels::increments_omp(plan, streams, 1.0 / 512, out);
        else
            kernels::increments_serial(plan, streams, 1.0 / 512, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void bm_kde(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto points = normal_samples(n);
    const std::vector<double> weights(n, 1.0 / static_cast<double>(n)), bandwidth{0.2};
    std::vector<double> eval(1024), out(1024);
    for (std::size_t i = 0; i < eval.size(); ++i) eval[i] = -4.0 + 8.0 * static_cast<double>(i) / 1024.0;
    for (auto _ : state) {
        if (Parallel)
            kernels::kde_omp(points, weights, 1, bandwidth, eval, out);
        else
            kernels::kde_serial(points, weights, 1, bandwidth, eval, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void bm_solver(benchmark::State &state) {
    SolverConfig cfg;
    cfg.dt = 1.0 / 128;
    cfg.particles = static_cast<std::size_t>(state.range(0));
    cfg.parallel = Parallel;
    const auto model = LevyModel::isotropic_stable(1, 1.5);
    const EmpiricalMeasure init(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cfg.particles), 1));
    const auto law = LawCurve::constant(init, cfg.times());
    for (auto _ : state) benchmark::DoNotOptimize(solve_frozen(model, mean_reverting_drift(1), law, init, cfg));
}

} // namespace

BENCHMARK(bm_ecf<false>)->Arg(1 << 20);
BENCHMARK(bm_ecf<true>)->Arg(1 << 20);
BENCHMARK(bm_increments<false>)->Arg(1 << 18);
BENCHMARK(bm_increments<true>)->Arg(1 << 18);
BENCHMARK(bm_kde<false>)->Arg(4096);
BENCHMARK(bm_kde<true>)->Arg(4096);
BENCHMARK(bm_solver<false>)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solver<true>)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
