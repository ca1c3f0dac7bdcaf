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

#include "mot/errors.hpp"
#include "mot/pipeline.hpp"
#include "mot/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace mot;

namespace {

DiscreteMeasure P(std::vector<Atom> atoms) { return DiscreteMeasure::probability(std::move(atoms), 1e-9); }

std::vector<Knot> random_points(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    std::vector<double> ys(n);
    for (auto& y : ys)
        y = d(rng);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::vector<Knot> pts;
    for (double y : ys)
        pts.push_back({y, d(rng)});
    return pts;
}

Interval support_hull(DiscreteMeasure const& nu) { return Interval::closed(nu.atoms().front().position, nu.atoms().back().position); }

SmoothedDual smooth(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                    PiecewiseLinear const& u, DualSolution* out = nullptr)
{
    auto sol = solve_dual(mu, nu, CostSpec::shifted(cost, u));
    auto sm = lipschitz_postprocess(sol.triple, cost, u, support_hull(nu));
    if (out)
        *out = std::move(sol);
    return sm;
}

} // namespace

TEST_CASE("concave envelope of simple point sets")
{
    std::vector<Knot> concave;
    for (double y = -2.0; y <= 2.0; y += 0.5)
        concave.push_back({y, -y * y});
    auto e = concave_envelope(concave);
    CHECK(e.hull().size() == concave.size());
    for (auto const& k : concave)
        CHECK(e(k.y) == k.value);

    std::vector<Knot> convex;
    for (double y = -1.0; y <= 1.0; y += 0.25)
        convex.push_back({y, y * y});
    auto c = concave_envelope(convex);
    REQUIRE(c.hull().size() == 2);
    CHECK(c.hull()[0].y == -1.0);
    CHECK(c.hull()[1].y == 1.0);
    for (auto const& k : convex)
        CHECK(c(k.y) == doctest::Approx(1.0));
    CHECK(c(7.0) == 1.0); // constant outside the hull

    std::vector<Knot> single{{0.5, 2.0}};
    CHECK(concave_envelope(single)(0.5) == 2.0);

    std::vector<Knot> unsorted{{1.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS(concave_envelope(unsorted));
}

TEST_CASE("concave envelope matches the pairwise-chord oracle and is idempotent")
{
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = random_points(rng, 20);
        auto env = concave_envelope(pts);
        auto oracle_values = oracle::pairwise_chord_envelope(pts);
        bool touches = false;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            CHECK(env(pts[k].y) == doctest::Approx(oracle_values[k]).epsilon(1e-12));
            CHECK(env(pts[k].y) >= pts[k].value - 1e-12);
            touches = touches || env(pts[k].y) == pts[k].value;
        }
        CHECK(touches);

        std::vector<Knot> resampled;
        for (auto const& k : pts)
            resampled.push_back({k.y, env(k.y)});
        auto twice = concave_envelope(resampled);
        for (auto const& k : pts)
            CHECK(twice(k.y) == doctest::Approx(env(k.y)).epsilon(1e-12));

        // supergradient lies in the superdifferential
        for (auto const& k : pts) {
            auto [lo, hi] = env.superdifferential(k.y);
            CHECK(lo <= hi + 1e-12);
            double const s = env.supergradient(k.y);
            CHECK(s >= lo - 1e-12);
            CHECK(s <= hi + 1e-12);
        }
    }
}

TEST_CASE("certificate on the canonical instance with c = |x - y|")
{
    auto mu = P({{0.0, 1.0}});
    auto nu = P({{-1.0, 0.5}, {1.0, 0.5}});
    auto cost = CostSpec::power(1, 1.0);
    DualSolution sol;
    auto sm = smooth(mu, nu, cost, PiecewiseLinear({{0.0, 0.0}}), &sol);
    auto const& cert = sm.certificate;
    CHECK(cert.L1 == doctest::Approx(1.0));
    CHECK(cert.L2 == 0.0);
    CHECK(cert.bounds.f == doctest::Approx(4.0));
    CHECK(cert.bounds.g == doctest::Approx(2.0));
    CHECK(cert.bounds.h == doctest::Approx(3.0));
    CHECK(cert.pass);
    auto rep = verify_duality(sm.triple, mu, nu, cost, sol.primal.coupling);
    CHECK(rep.max_ineq_violation <= 1e-7);
    CHECK(rep.gap <= 1e-8);
    CHECK_THROWS_AS(lipschitz_postprocess(sol.triple, cost, PiecewiseLinear({{0.0, 0.0}}),
                                          Interval::open(0.0, std::numeric_limits<double>::infinity())),
                    NotCompact);
}

TEST_CASE("equal moduli print as 7L, 5L and 6L")
{
    auto mu = P({{0.0, 1.0}});
    auto nu = P({{-1.0, 0.5}, {1.0, 0.5}});
    auto sm = smooth(mu, nu, CostSpec::power(1, 1.0), PiecewiseLinear({{-1.0, -1.0}, {1.0, 1.0}}));
    auto const& cert = sm.certificate;
    CHECK(cert.L1 == doctest::Approx(1.0));
    CHECK(cert.L2 == doctest::Approx(1.0));
    CHECK(cert.bounds.f == doctest::Approx(7.0));
    CHECK(cert.bounds.g == doctest::Approx(5.0));
    CHECK(cert.bounds.h == doctest::Approx(6.0));
    auto text = cert.describe();
    CHECK(text.find("7L") != std::string::npos);
    CHECK(text.find("5L") != std::string::npos);
    CHECK(text.find("6L") != std::string::npos);
}

TEST_CASE("post-processing on convex costs keeps duality and the cross-Lipschitz bound")
{
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 30; ++trial) {
        auto pair = oracle::random_ordered_pair(rng, 6, 12, 0.0);
        CostSpec cost = trial % 2 ? CostSpec::power(1, 1.0) : CostSpec::power(1, 2.0);
        PiecewiseLinear u = trial % 3 ? PiecewiseLinear({{0.0, 0.0}}) : PiecewiseLinear({{-8.0, 2.0}, {0.0, 0.0}, {8.0, 4.0}});
        DualSolution sol;
        auto sm = smooth(pair.mu, pair.nu, cost, u, &sol);
        CHECK(sm.certificate.pass);
        auto rep = verify_duality(sm.triple, pair.mu, pair.nu, cost, sol.primal.coupling);
        CHECK(rep.max_ineq_violation <= 1e-7);
        CHECK(rep.max_support_residual <= 1e-7);
        CHECK(rep.gap <= 1e-8);

        // |H(x, y) - H(x', y)| <= L1 |x - x'| on the grid
        auto const& x = sm.triple.x;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t k = i + 1; k < x.size(); ++k)
                for (double y : sm.triple.grid)
                    CHECK(std::abs(sm.H[i](y) - sm.H[k](y)) <= sm.certificate.L1 * std::abs(x[i] - x[k]) + 1e-9);

        // H(x, .) dominates g - c~ with contact somewhere
        for (std::size_t i = 0; i < x.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < sm.triple.grid.size(); ++q) {
                double const y = sm.triple.grid[q];
                double const data = sm.triple.g[q] - cost(x[i], y); // (g ^ 0) - c - u
                CHECK(sm.H[i](y) >= data - 1e-12);
                best = std::min(best, sm.H[i](y) - data);
            }
            CHECK(best <= 1e-12);
        }
    }
}

TEST_CASE("quadratic convexifier for a concave quadratic cost")
{
    auto mu = P({{-0.5, 0.5}, {0.5, 0.5}});
    auto nu = P({{-1.5, 0.25}, {0.0, 0.5}, {1.5, 0.25}});
    auto cost = CostSpec::power(-1, 2.0);
    std::vector<double> grid{-1.5, -0.5, 0.0, 0.5, 1.5};
    auto conv = auto_convexifier(cost, mu.positions(), grid);
    CHECK(conv.lambda == doctest::Approx(1.0));
    for (double y : grid)
        CHECK(conv.u(y) == doctest::Approx(y * y));
    DualSolution sol;
    auto sm = smooth(mu, nu, cost, conv.u, &sol);
    CHECK(sm.certificate.pass);
    auto rep = verify_duality(sm.triple, mu, nu, cost, sol.primal.coupling);
    CHECK(rep.gap <= 1e-8);
    CHECK(rep.max_ineq_violation <= 1e-7);
}

TEST_CASE("integrability probe")
{
    SUBCASE("constant g")
    {
        std::vector<ProbeLevel> levels;
        for (int k = 1; k <= 4; ++k) {
            std::vector<Atom> a;
            for (int j = 0; j < 4 * k; ++j)
                a.push_back({j + 0.5, 1.0 / (4 * k)});
            levels.push_back({P(a), PiecewiseLinear({{0.0, -2.5}})});
        }
        auto probe = integrability_probe(levels);
        for (double v : probe.values)
            CHECK(v == doctest::Approx(-2.5));
        CHECK(probe.cauchy);
        CHECK_FALSE(probe.diverging);
    }
    SUBCASE("certified g under refining discretizations")
    {
        auto mu = P({{-0.5, 0.5}, {0.5, 0.5}});
        auto nu = P({{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}});
        auto sm = smooth(mu, nu, CostSpec::power(1, 1.0), PiecewiseLinear({{0.0, 0.0}}));
        REQUIRE(sm.certificate.pass);
        std::vector<Knot> knots;
        for (std::size_t q = 0; q < sm.triple.grid.size(); ++q)
            knots.push_back({sm.triple.grid[q], sm.triple.g[q]});
        PiecewiseLinear g(knots);
        std::vector<ProbeLevel> levels;
        for (int K : {1000, 2000, 4000, 8000}) {
            std::vector<Atom> a;
            for (int j = 0; j < K; ++j)
                a.push_back({-1.0 + 2.0 * (j + 0.5) / K, 1.0 / K});
            levels.push_back({P(a), g});
        }
        auto probe = integrability_probe(levels);
        CHECK(probe.cauchy);
        CHECK_FALSE(probe.diverging);
    }
}

TEST_CASE("grid Lipschitz modulus")
{
    std::vector<double> ys{0.0, 1.0, 1.5, 4.0}, v{0.0, 2.0, 1.0, 1.0};
    CHECK(grid_lipschitz(ys, v) == doctest::Approx(2.0));
    CHECK(PiecewiseLinear({{0.0, 0.0}, {1.0, 2.0}, {1.5, 1.0}}).lipschitz() == doctest::Approx(2.0));
}
