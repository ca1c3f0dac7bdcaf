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
#include "mot/errors.hpp"

#include <random>

using namespace mot;

namespace {

DiscreteMeasure P(std::vector<Atom> atoms) { return DiscreteMeasure::probability(std::move(atoms)); }

} // namespace

TEST_CASE("identical marginals decompose into the diagonal only")
{
    auto m = P({{-1.0, 0.2}, {0.5, 0.3}, {2.0, 0.5}});
    auto d = decompose(m, m);
    CHECK(d.components.empty());
    CHECK(oracle::atomwise_gap(d.diagonal, m) == 0.0);
    CHECK(d.component_of(0.5) == 0);
}

TEST_CASE("single irreducible component")
{
    auto d = decompose(P({{0.0, 1.0}}), P({{-1.0, 0.5}, {1.0, 0.5}}));
    REQUIRE(d.components.size() == 1);
    auto const& c = d.components[0];
    CHECK(c.interval == Interval::open(-1.0, 1.0));
    CHECK(c.mu.weight_at(0.0) == 1.0);
    CHECK(c.nu.weight_at(-1.0) == doctest::Approx(0.5));
    CHECK(c.nu.weight_at(1.0) == doctest::Approx(0.5));
    CHECK(d.diagonal.mass() == 0.0);
    CHECK(d.component_of(0.0) == 1);
}

TEST_CASE("two symmetric components with hand-solved endpoint masses")
{
    auto mu = P({{-2.0, 0.5}, {2.0, 0.5}});
    auto nu = P({{-3.0, 0.25}, {-1.0, 0.25}, {1.0, 0.25}, {3.0, 0.25}});
    auto d = decompose(mu, nu);
    REQUIRE(d.components.size() == 2);
    // alpha_lo + alpha_hi = 1/2 and -3 alpha_lo - alpha_hi = -1 give 1/4 each.
    CHECK(d.components[0].nu.weight_at(-3.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.components[0].nu.weight_at(-1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.components[1].interval == Interval::open(1.0, 3.0));

    auto split = endpoint_split(nu, Interval::open(-3.0, -1.0), 0.5, -2.0);
    CHECK(split.lo == doctest::Approx(0.25));
    CHECK(split.hi == doctest::Approx(0.25));
}

TEST_CASE("shared endpoints are split between neighbouring components")
{
    // mu = 1/2 (delta_{-1} + delta_1), nu = 1/4 delta_{-2} + 1/2 delta_0 + 1/4 delta_2.
    auto mu = P({{-1.0, 0.5}, {1.0, 0.5}});
    auto nu = P({{-2.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}});
    auto d = decompose(mu, nu);
    REQUIRE(d.components.size() == 2);
    CHECK(d.components[0].nu.weight_at(0.0) == doctest::Approx(0.25));
    CHECK(d.components[1].nu.weight_at(0.0) == doctest::Approx(0.25));
}

TEST_CASE("endpoint_split rejects impossible targets")
{
    auto nu = P({{-1.0, 0.5}, {1.0, 0.5}});
    CHECK_THROWS_AS(endpoint_split(nu, Interval::open(-1.0, 1.0), 1.0, 2.0), InconsistentSplit);
}

TEST_CASE("decompose rejects pairs out of order")
{
    CHECK_THROWS_AS(decompose(P({{-1.0, 0.5}, {1.0, 0.5}}), P({{0.0, 1.0}})), NotInConvexOrder);
}

TEST_CASE("random decompositions reassemble and are irreducible piecewise")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto [mu, nu, plan] = oracle::random_ordered_pair(rng, 6, 16, 0.3);
        auto d = decompose(mu, nu);

        std::vector<DiscreteMeasure> mus{d.diagonal}, nus{d.diagonal};
        for (auto const& c : d.components) {
            mus.push_back(c.mu);
            nus.push_back(c.nu);
            CHECK(c.mu.mass() == doctest::Approx(c.nu.mass()).epsilon(1e-9));
            CHECK(c.mu.first_moment() == doctest::Approx(c.nu.first_moment()).epsilon(1e-9));
            auto irr = is_irreducible(c.mu.normalized(), c.nu.normalized());
            CHECK(irr.irreducible);
            CHECK(irr.domain == c.interval);
            auto again = decompose(c.mu.normalized(), c.nu.normalized());
            REQUIRE(again.components.size() == 1);
            CHECK(again.components[0].interval == c.interval);
            CHECK(again.diagonal.mass() <= 1e-12);
        }
        CHECK(oracle::atomwise_gap(oracle::sum(mus), mu) <= 1e-9);
        CHECK(oracle::atomwise_gap(oracle::sum(nus), nu) <= 1e-9);
    }
}
