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

#include "mot/decomposition.hpp"
#include "mot/dual.hpp"
#include "mot/errors.hpp"
#include "mot/kernels.hpp"
#include "mot/pipeline.hpp"
#include "mot/primal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace mot;

namespace {

DiscreteMeasure P(std::vector<Atom> atoms) { return DiscreteMeasure::probability(std::move(atoms), 1e-9); }

struct Canonical
{
    DiscreteMeasure mu = P({{0.0, 1.0}});
    DiscreteMeasure nu = P({{-1.0, 0.5}, {1.0, 0.5}});
    CostSpec cost = CostSpec::power(-1, 1.0);
};

DualTriple enveloped(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                     PrimalSolution const& primal)
{
    return with_envelope(recover_dual(mu, nu, cost, primal), cost, evaluation_grid(mu, nu, cost));
}

// Lattice pair whose support follows geometric cells on ]0, inf[.
std::pair<DiscreteMeasure, DiscreteMeasure> geometric_chain(int levels)
{
    std::vector<Atom> mu, nu;
    double total = 0.0;
    for (int n = 1; n <= levels; ++n)
        total += std::ldexp(1.0, -n);
    for (int n = 1; n <= levels; ++n) {
        double const lo = std::ldexp(1.0, n - 1) - 1.0, hi = std::ldexp(1.0, n) - 1.0;
        double const w = std::ldexp(1.0, -n) / total;
        mu.push_back({0.5 * (lo + hi), w});
        nu.push_back({lo, 0.5 * w});
        nu.push_back({hi, 0.5 * w});
    }
    return {P(mu), P(nu)};
}

CostSpec random_convex_cost(std::mt19937_64& rng)
{
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
        return CostSpec::power(1, 1.0);
    case 1:
        return CostSpec::power(1, 2.0);
    default:
        return CostSpec::power(1, 1.5);
    }
}

} // namespace

TEST_CASE("canonical instance: raw dual, normalized dual and report")
{
    Canonical c;
    auto primal = solve_primal(c.mu, c.nu, c.cost);
    auto raw = recover_dual(c.mu, c.nu, c.cost, primal);
    CHECK(raw.g_at(-1.0) - raw.f[0] + raw.h[0] == doctest::Approx(-1.0));
    CHECK(raw.g_at(1.0) - raw.f[0] - raw.h[0] == doctest::Approx(-1.0));

    auto d = decompose(c.mu, c.nu);
    REQUIRE(d.components.size() == 1);
    auto norm = normalize_component(enveloped(c.mu, c.nu, c.cost, primal), d.components[0].interval,
                                    d.components[0].nu);
    CHECK(norm.triple.f[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm.triple.h[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(norm.triple.g_at(-1.0) == 0.0);
    CHECK(norm.triple.g_at(1.0) == 0.0);

    auto rep = verify_duality(norm.triple, c.mu, c.nu, c.cost, primal.coupling);
    CHECK(rep.max_ineq_violation <= 1e-12);
    CHECK(rep.max_support_residual <= 1e-12);
    CHECK(rep.gap <= 1e-12);

    auto contact = contact_set(norm.triple, c.mu, c.nu, c.cost, 1e-7);
    CHECK(contact.pairs.size() == 2);
    CHECK(contact.contains(0, 0));
    CHECK(contact.contains(0, 1));
}

TEST_CASE("corrupted g is reported as an inequality violation")
{
    Canonical c;
    auto sol = solve_dual(c.mu, c.nu, c.cost);
    auto bad = sol.triple;
    auto k = bad.grid_index(1.0);
    REQUIRE(k);
    bad.g[*k] += 1.0;
    auto rep = verify_duality(bad, c.mu, c.nu, c.cost, sol.primal.coupling);
    CHECK(rep.max_ineq_violation >= 1.0 - 1e-9);
    CHECK_FALSE(contact_set(bad, c.mu, c.nu, c.cost, 1e-7).contains(0, 1));
}

TEST_CASE("gauge shift is undone by normalization")
{
    Canonical c;
    auto primal = solve_primal(c.mu, c.nu, c.cost);
    auto d = decompose(c.mu, c.nu);
    auto base = normalize_component(enveloped(c.mu, c.nu, c.cost, primal), d.components[0].interval,
                                    d.components[0].nu);

    // Idempotent on a normalized triple.
    auto again = normalize_component(base.triple, d.components[0].interval, d.components[0].nu);
    CHECK(again.chord.slope == 0.0);
    CHECK(again.chord.intercept == 0.0);
    CHECK(again.triple.g == base.triple.g);
    CHECK(again.triple.f == base.triple.f);

    // g + (y + 2) is recovered as the chord y + 2.
    auto shifted = base.triple.minus({-2.0, -1.0});
    auto rec = normalize_component(shifted, d.components[0].interval, d.components[0].nu);
    CHECK(rec.chord.slope == doctest::Approx(1.0));
    CHECK(rec.chord.intercept == doctest::Approx(2.0));
    for (std::size_t k = 0; k < rec.triple.g.size(); ++k)
        CHECK(rec.triple.g[k] == doctest::Approx(base.triple.g[k]).epsilon(1e-12));
}

TEST_CASE("envelope of a single atom is its affine-plus-cost function")
{
    std::vector<double> x{0.3}, f{0.7}, h{-1.25}, grid{-2.0, -0.5, 0.3, 1.0, 4.0};
    auto cost = CostSpec::power(1, 1.5);
    auto g = envelope_g(x, f, h, cost, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(g[k] == f[0] + h[0] * (grid[k] - x[0]) + cost(x[0], grid[k]));
}

TEST_CASE("envelope matches the double-loop oracle exactly")
{
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t const n = 1 + trial % 9, m = 5 + trial % 17;
        std::vector<double> x(n), f(n), h(n), grid(m);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = d(rng);
            f[i] = d(rng);
            h[i] = d(rng);
        }
        for (auto& y : grid)
            y = d(rng);
        std::sort(grid.begin(), grid.end());
        CostSpec cost = trial % 3 == 0 ? CostSpec::power(-1, 1.0) : CostSpec::power(1, 0.5 + trial % 4 * 0.5);
        CHECK(envelope_g(x, f, h, cost, grid) == oracle::double_loop_envelope(x, f, h, cost, grid));
    }
}

TEST_CASE("envelope is monotone in f and keeps its argmin under gauge shifts")
{
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    auto cost = CostSpec::power(1, 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> x(6), f(6), h(6), grid(15);
        for (std::size_t i = 0; i < 6; ++i) {
            x[i] = d(rng);
            f[i] = d(rng);
            h[i] = d(rng);
        }
        for (auto& y : grid)
            y = d(rng);
        std::sort(grid.begin(), grid.end());
        auto base = envelope_g(x, f, h, cost, grid);
        auto raised = f;
        raised[trial % 6] += 0.5;
        auto up = envelope_g(x, raised, h, cost, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            CHECK(up[k] >= base[k]);

        AffineGauge L{0.4, -1.1};
        std::vector<double> fs(6), hs(6);
        for (std::size_t i = 0; i < 6; ++i) {
            fs[i] = f[i] + L(x[i]);
            hs[i] = h[i] + L.slope;
        }
        auto e0 = kernels::serial::lower_envelope({x, f, h}, cost, grid);
        auto e1 = kernels::serial::lower_envelope({x, fs, hs}, cost, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(e1.value[k] == doctest::Approx(e0.value[k] + L(grid[k])).epsilon(1e-12));
            // argmin can only move on exact ties
            if (e1.argmin[k] != e0.argmin[k]) {
                std::size_t const a = e0.argmin[k], b = e1.argmin[k];
                CHECK(f[a] + h[a] * (grid[k] - x[a]) + cost(x[a], grid[k]) ==
                      doctest::Approx(f[b] + h[b] * (grid[k] - x[b]) + cost(x[b], grid[k])).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("verification residuals are gauge invariant")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 6, 12);
        auto cost = random_convex_cost(rng);
        auto sol = solve_dual(pair.mu, pair.nu, cost);
        auto r0 = verify_duality(sol.triple, pair.mu, pair.nu, cost, sol.primal.coupling);
        auto r1 = verify_duality(sol.triple.minus({-0.75, 2.5}), pair.mu, pair.nu, cost, sol.primal.coupling);
        CHECK(std::abs(r1.max_ineq_violation - r0.max_ineq_violation) <= 1e-12);
        CHECK(std::abs(r1.max_support_residual - r0.max_support_residual) <= 1e-12);
        CHECK(std::abs(r1.gap - r0.gap) <= 1e-12);
    }
}

TEST_CASE("glue: single component, diagonal-only and two symmetric components")
{
    SUBCASE("single component")
    {
        auto mu = P({{-0.5, 0.5}, {0.5, 0.5}});
        auto nu = P({{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}});
        auto cost = CostSpec::power(1, 1.0);
        auto sol = solve_dual(mu, nu, cost);
        REQUIRE(sol.decomposition.components.size() == 1);
        CHECK(sol.method == "glued");
        auto const& comp = sol.decomposition.components[0];
        auto primal = solve_primal(comp.mu, comp.nu, cost);
        auto raw = recover_component_dual(comp, 1, cost, primal);
        auto norm = normalize_component(with_envelope(raw, cost, sol.triple.grid), comp.interval, comp.nu);
        std::vector<DualTriple> parts{norm.triple};
        auto glued = glue(mu, sol.decomposition, parts, cost, sol.triple.grid);
        CHECK_FALSE(glued.violation);
        for (std::size_t k = 0; k < glued.triple.grid.size(); ++k)
            CHECK(glued.triple.g[k] == doctest::Approx(norm.triple.g[k]).epsilon(1e-12));
        for (std::size_t i = 0; i < mu.size(); ++i) {
            CHECK(glued.triple.f[i] == doctest::Approx(norm.triple.f[i]).epsilon(1e-12));
            CHECK(glued.triple.h[i] == doctest::Approx(norm.triple.h[i]).epsilon(1e-12));
        }
    }
    SUBCASE("diagonal only")
    {
        auto mu = P({{-1.0, 0.3}, {0.5, 0.3}, {2.0, 0.4}});
        for (auto cost : {CostSpec::power(1, 1.0), CostSpec::power(1, 2.0)}) {
            auto sol = solve_dual(mu, mu, cost);
            CHECK(sol.decomposition.components.empty());
            CHECK(sol.method == "glued");
            for (std::size_t i = 0; i < mu.size(); ++i)
                CHECK(sol.triple.f[i] == doctest::Approx(-cost(mu[i].position, mu[i].position)));
            for (auto const& a : mu.atoms())
                CHECK(std::abs(sol.triple.g_at(a.position)) <= 1e-12);
            CHECK(sol.report.max_ineq_violation <= 1e-7);
            CHECK(sol.report.gap <= 1e-8);
        }
    }
    SUBCASE("two symmetric components")
    {
        auto mu = P({{-2.0, 0.5}, {2.0, 0.5}});
        auto nu = P({{-3.0, 0.25}, {-1.0, 0.25}, {1.0, 0.25}, {3.0, 0.25}});
        auto cost = CostSpec::power(1, 1.0);
        auto sol = solve_dual(mu, nu, cost);
        CHECK(sol.decomposition.components.size() == 2);
        CHECK(sol.method == "glued");
        CHECK_FALSE(sol.glue_violation);
        CHECK(sol.report.gap <= 1e-8);
        CHECK(sol.report.max_ineq_violation <= 1e-7);
        CHECK(sol.verified({}));
    }
}

TEST_CASE("random convex-cost instances close the duality gap")
{
    std::mt19937_64 rng(67);
    int done = 0;
    for (int trial = 0; done < 30 && trial < 5000; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 10, 15, 0.15);
        if (pair.mu.size() != 10 || pair.nu.size() > 15)
            continue;
        auto cost = random_convex_cost(rng);
        auto sol = solve_dual(pair.mu, pair.nu, cost);
        CHECK(sol.report.gap <= 1e-8);
        CHECK(sol.report.max_ineq_violation <= 1e-7);
        CHECK(sol.report.max_support_residual <= 1e-7);
        for (auto const& comp : sol.components)
            CHECK_FALSE(comp.shape_violation);
        ++done;
    }
    CHECK(done == 30);
}

TEST_CASE("contact set contains the support of alternative optima")
{
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> eps(-1e-10, 1e-10);
    for (int trial = 0; trial < 20; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 5, 10);
        auto cost = CostSpec::power(1, 1.0);
        auto sol = solve_dual(pair.mu, pair.nu, cost);
        auto contact = contact_set(sol.triple, pair.mu, pair.nu, cost, 1e-7);
        auto xs = pair.mu.positions(), ys = pair.nu.positions();
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> values(xs.size() * ys.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j)
                    values[i * ys.size() + j] = cost(xs[i], ys[j]) + eps(rng);
            auto alt = solve_primal(pair.mu, pair.nu, CostSpec::grid(xs, ys, values));
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j)
                    if (alt.coupling(i, j) > 1e-10)
                        CHECK(contact.contains(i, j));
        }
    }
}

TEST_CASE("normalized components have the sign pattern on convex costs")
{
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 8, 16);
        auto cost = random_convex_cost(rng);
        auto d = decompose(pair.mu, pair.nu);
        auto grid = evaluation_grid(pair.mu, pair.nu, cost);
        for (std::size_t k = 0; k < d.components.size(); ++k) {
            auto const& comp = d.components[k];
            auto primal = solve_primal(comp.mu, comp.nu, cost);
            auto raw = recover_component_dual(comp, static_cast<int>(k + 1), cost, primal);
            auto norm = normalize_component(with_envelope(raw, cost, grid), comp.interval, comp.nu);
            CHECK_FALSE(norm.violation);
            double const a = comp.interval.lo, b = comp.interval.hi;
            for (std::size_t q = 0; q < grid.size(); ++q) {
                double const y = grid[q], g = norm.triple.g[q];
                if (y > a && y < b)
                    CHECK(g <= 1e-7);
                else if (y < a || y > b)
                    CHECK(g >= -1e-7);
            }
            CHECK(std::abs(norm.triple.g_at(a)) <= 1e-7);
            CHECK(std::abs(norm.triple.g_at(b)) <= 1e-7);
        }
    }
}

TEST_CASE("chord lines stay bounded by the first atom's function")
{
    std::mt19937_64 rng(79);
    int seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 8, 16, 0.0);
        auto cost = random_convex_cost(rng);
        auto d = decompose(pair.mu, pair.nu);
        auto grid = evaluation_grid(pair.mu, pair.nu, cost);
        for (std::size_t k = 0; k < d.components.size(); ++k) {
            auto const& comp = d.components[k];
            if (comp.mu.size() < 2)
                continue;
            auto primal = solve_primal(comp.mu, comp.nu, cost);
            auto triple = with_envelope(recover_component_dual(comp, 1, cost, primal), cost, grid);
            auto order = chain_order(triple, primal.coupling, comp.nu, 1e-10);
            auto chords = chord_sequence(triple, order, primal.coupling, comp.nu, cost, 1e-10);
            REQUIRE_FALSE(chords.empty());
            double M = 0.0;
            for (double y : grid)
                if (y >= comp.interval.lo && y <= comp.interval.hi)
                    M = std::max(M, std::abs(triple.v(order[0], y, cost)));
            double const a1 = chords.front().left, b1 = chords.front().right;
            double const tol = 1e-7 * (1.0 + M);
            for (auto const& ch : chords) {
                CHECK(std::abs(ch.line(a1)) <= M + tol);
                CHECK(std::abs(ch.line(b1)) <= M + tol);
            }
            ++seen;
        }
    }
    CHECK(seen > 20);
}

TEST_CASE("half-infinite normalization")
{
    SUBCASE("compact instance is stable across truncations")
    {
        auto mu = P({{0.5, 0.5}, {1.5, 0.5}});
        auto nu = P({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
        auto cost = CostSpec::power(1, 1.0);
        auto sol = solve_dual(mu, nu, cost);
        std::vector<DualTriple> same(4, sol.triple);
        auto v = halfinfinite_normalize(same, cost, {0.0, -1.0});
        CHECK(v.converged);
        CHECK(v.monotone);
        CHECK(v.limit == doctest::Approx(v.profile.front()));
        CHECK(v.normalized.size() == 4);
    }
    SUBCASE("geometric cells with a linear-growth convex cost converge")
    {
        auto cost = CostSpec::power(1, 1.0);
        std::vector<DualTriple> truncations;
        for (int levels : {4, 6, 8, 10, 12}) {
            auto [mu, nu] = geometric_chain(levels);
            truncations.push_back(solve_dual(mu, nu, cost).triple);
        }
        auto v = halfinfinite_normalize(truncations, cost, {0.0, -1.0});
        CHECK(v.monotone);
        CHECK(v.converged);
        for (auto const& t : v.normalized) {
            auto k = t.grid_index(0.0);
            REQUIRE(k);
            CHECK(std::abs(t.g[*k]) <= 1e-6);
        }
    }
}

TEST_CASE("diagonal subgradient is the midpoint")
{
    std::vector<double> grid{-1.0, 0.0, 2.0};
    CHECK(diagonal_slope(CostSpec::power(1, 1.0), 0.0, grid) == doctest::Approx(0.0));
    CHECK(diagonal_slope(CostSpec::power(1, 2.0), 1.0, grid) == doctest::Approx(0.0).scale(1e-6));
    auto g = CostSpec::grid({0.0}, grid, {3.0, 0.0, 1.0});
    CHECK(diagonal_slope(g, 0.0, grid) == doctest::Approx(0.5 * (-3.0 + 0.5)));
}
