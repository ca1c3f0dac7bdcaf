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

#include "doctest.h"
#include "oracles.hpp"

#include "mot/kernels.hpp"

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mot;

namespace {

struct ThreadCount
{
    explicit ThreadCount(int n)
    {
#ifdef _OPENMP
        saved = omp_get_max_threads();
        omp_set_num_threads(n);
#else
        (void)n;
#endif
    }
    ~ThreadCount()
    {
#ifdef _OPENMP
        omp_set_num_threads(saved);
#endif
    }
    int saved = 1;
};

} // namespace

TEST_CASE("serial and parallel kernels agree bit for bit")
{
    ThreadCount threads(4);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t const n = 1 + trial * 7 % 40, m = 3 + trial * 13 % 300;
        std::vector<double> x(n), f(n), h(n), grid(m), g(m);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = d(rng);
            f[i] = d(rng);
            h[i] = d(rng);
        }
        for (std::size_t k = 0; k < m; ++k) {
            grid[k] = d(rng);
            g[k] = d(rng);
        }
        std::sort(grid.begin(), grid.end());
        CostSpec cost = trial % 2 ? CostSpec::power(-1, 1.0) : CostSpec::power(1, 1.5);
        kernels::AffineFamily fam{x, f, h};

        auto es = kernels::serial::lower_envelope(fam, cost, grid);
        auto ep = kernels::parallel::lower_envelope(fam, cost, grid);
        CHECK(es.value == ep.value);
        CHECK(es.argmin == ep.argmin);

        auto rs = kernels::serial::max_residual(fam, cost, grid, g);
        auto rp = kernels::parallel::max_residual(fam, cost, grid, g);
        CHECK(rs.value == rp.value);
        CHECK(rs.x_index == rp.x_index);
        CHECK(rs.y_index == rp.y_index);

        auto mu = oracle::random_measure(rng, static_cast<int>(n));
        std::vector<double> ps(m), pp(m);
        kernels::serial::potentials(mu.atoms(), grid, ps);
        kernels::parallel::potentials(mu.atoms(), grid, pp);
        CHECK(ps == pp);
    }
}

TEST_CASE("kernels propagate cost errors from worker threads")
{
    ThreadCount threads(4);
    std::vector<double> x{0.0, 1.0}, f{0.0, 0.0}, h{0.0, 0.0}, grid{0.0, 0.5, 1.0};
    auto cost = CostSpec::grid({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
    CHECK_THROWS(kernels::parallel::lower_envelope({x, f, h}, cost, grid));
    CHECK_THROWS(kernels::serial::lower_envelope({x, f, h}, cost, grid));
}

TEST_CASE("envelope argmin picks the first minimizer")
{
    std::vector<double> x{0.0, 0.0}, f{1.0, 1.0}, h{0.0, 0.0}, grid{-1.0, 1.0};
    auto e = kernels::lower_envelope({x, f, h}, CostSpec::power(1, 2.0), grid);
    CHECK(e.argmin == std::vector<std::size_t>{0, 0});
    CHECK(e.value == std::vector<double>{2.0, 2.0});
    CHECK(kernels::max_threads() >= 1);
}
