/*
 * Copyright 2026 The mot1d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference against OpenMP kernels on random inputs.

#include "mot/kernels.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

namespace {

struct Inputs
{
    std::vector<double> x, f, h, grid, g;
    std::vector<mot::Atom> atoms;

    Inputs(std::size_t atoms_count, std::size_t grid_count)
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> d(-5.0, 5.0);
        for (std::size_t i = 0; i < atoms_count; ++i) {
            x.push_back(d(rng));
            f.push_back(d(rng));
            h.push_back(d(rng));
        }
        std::sort(x.begin(), x.end());
        x.erase(std::unique(x.begin(), x.end()), x.end());
        f.resize(x.size());
        h.resize(x.size());
        for (std::size_t k = 0; k < grid_count; ++k) {
            grid.push_back(d(rng));
            g.push_back(d(rng));
        }
        std::sort(grid.begin(), grid.end());
        for (double p : x)
            atoms.push_back({p, 1.0 / static_cast<double>(x.size())});
    }

    mot::kernels::AffineFamily family() const { return {x, f, h}; }
};

mot::CostSpec const cost = mot::CostSpec::power(1, 1.5);

template <bool Parallel>
void envelope(benchmark::State& state)
{
    Inputs const in(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        auto e = Parallel ? mot::kernels::parallel::lower_envelope(in.family(), cost, in.grid)
                          : mot::kernels::serial::lower_envelope(in.family(), cost, in.grid);
        benchmark::DoNotOptimize(e.value.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <bool Parallel>
void residual(benchmark::State& state)
{
    Inputs const in(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        auto r = Parallel ? mot::kernels::parallel::max_residual(in.family(), cost, in.grid, in.g)
                          : mot::kernels::serial::max_residual(in.family(), cost, in.grid, in.g);
        benchmark::DoNotOptimize(r.value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <bool Parallel>
void potentials(benchmark::State& state)
{
    Inputs const in(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    std::vector<double> out(in.grid.size());
    for (auto _ : state) {
        if (Parallel)
            mot::kernels::parallel::potentials(in.atoms, in.grid, out);
        else
            mot::kernels::serial::potentials(in.atoms, in.grid, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void sizes(benchmark::internal::Benchmark* b)
{
    for (int n : {64, 512})
        for (int m : {256, 4096})
            b->Args({n, m});
}

} // namespace

BENCHMARK(envelope<false>)->Name("envelope/serial")->Apply(sizes);
BENCHMARK(envelope<true>)->Name("envelope/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK(residual<false>)->Name("residual/serial")->Apply(sizes);
BENCHMARK(residual<true>)->Name("residual/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK(potentials<false>)->Name("potentials/serial")->Apply(sizes);
BENCHMARK(potentials<true>)->Name("potentials/parallel")->Apply(sizes)->UseRealTime();

BENCHMARK_MAIN();
