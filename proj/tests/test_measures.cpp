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
#include "mot/measures.hpp"

#include <random>

using namespace mot;

namespace {

DiscreteMeasure P(std::vector<Atom> atoms) { return DiscreteMeasure::probability(std::move(atoms)); }

// Spreads every atom of m by a two-point martingale kernel.
DiscreteMeasure spread(DiscreteMeasure const& m, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(0.1, 2.0);
    std::vector<Atom> out;
    for (Atom const& a : m.atoms()) {
        double const lo = a.position - d(rng), hi = a.position + d(rng);
        double const p = (hi - a.position) / (hi - lo);
        out.push_back({lo, a.weight * p});
        out.push_back({hi, a.weight * (1 - p)});
    }
    return DiscreteMeasure::probability(out, 1e-9);
}

} // namespace

TEST_CASE("measure construction canonicalizes atoms")
{
    auto m = P({{1.0, 0.25}, {-1.0, 0.5}, {1.0, 0.25}});
    REQUIRE(m.size() == 2);
    CHECK(m[0].position == -1.0);
    CHECK(m[1].weight == 0.5);
    CHECK(m.mean() == doctest::Approx(0.0));
    CHECK_THROWS_AS(P({{0.0, 0.5}}), InvalidMeasure);
    CHECK_THROWS_AS(P({{0.0, -0.5}, {1.0, 1.5}}), InvalidMeasure);
    CHECK_THROWS_AS(P({{std::nan(""), 1.0}}), InvalidMeasure);
    auto sub = DiscreteMeasure::finite({{0.0, 0.3}});
    CHECK(sub.mass() == doctest::Approx(0.3));
}

TEST_CASE("potential values")
{
    CHECK(potential(P({{0.0, 1.0}}), 2.0) == 2.0);
    auto sym = P({{-1.0, 0.5}, {1.0, 0.5}});
    CHECK(potential(sym, 0.0) == 1.0);
    CHECK(potential(sym, 3.0) == 3.0);
}

TEST_CASE("potential is convex with unit slopes at the ends and dominates |x - mean|")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = oracle::random_measure(rng, 1 + trial % 7);
        double far = 0.0;
        for (auto const& a : m.atoms())
            far = std::max(far, std::abs(a.position));
        far += 1.0;
        CHECK(potential(m, far + 1.0) - potential(m, far) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(potential(m, -far) - potential(m, -far - 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
        double const lo = m[0].position, hi = m[m.size() - 1].position;
        for (double x = -far; x <= far; x += 0.173) {
            double const u = potential(m, x);
            CHECK(u >= std::abs(x - m.mean()) - 1e-12);
            if (x < lo || x > hi)
                CHECK(u == doctest::Approx(std::abs(x - m.mean())).epsilon(1e-12));
            double const mid = 0.5 * (potential(m, x - 0.05) + potential(m, x + 0.05));
            CHECK(mid >= u - 1e-12);
        }
    }
}

TEST_CASE("convex order on small examples")
{
    auto d0 = P({{0.0, 1.0}});
    auto sym = P({{-1.0, 0.5}, {1.0, 0.5}});
    CHECK(check_convex_order(d0, sym).ordered);
    auto r = check_convex_order(sym, d0);
    CHECK_FALSE(r.ordered);
    REQUIRE(r.witness);
    double const w = r.witness->point;
    CHECK((w == -1.0 || w == 0.0 || w == 1.0));
    CHECK(r.witness->deficit > 0.0);
}

TEST_CASE("convex order agrees with the hockey-stick oracle")
{
    std::mt19937_64 rng(5);
    int ordered = 0;
    for (int trial = 0; trial < 400; ++trial) {
        DiscreteMeasure mu, nu;
        if (trial % 2 == 0) {
            auto pair = oracle::random_ordered_pair(rng, 4, 8);
            mu = pair.mu;
            nu = pair.nu;
            if (trial % 4 == 0)
                std::swap(mu, nu);
        } else {
            mu = oracle::random_measure(rng, 5);
            nu = oracle::random_measure(rng, 5);
        }
        bool const expect = oracle::hockey_stick_ordered(mu, nu, 1e-9);
        CHECK(check_convex_order(mu, nu).ordered == expect);
        ordered += expect;
    }
    CHECK(ordered > 50);
}

TEST_CASE("convex order is reflexive and transitive")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        auto a = oracle::random_measure(rng, 1 + trial % 5);
        CHECK(check_convex_order(a, a).ordered);
        auto b = spread(a, rng);
        auto c = spread(b, rng);
        REQUIRE(check_convex_order(a, b).ordered);
        REQUIRE(check_convex_order(b, c).ordered);
        CHECK(check_convex_order(a, c).ordered);
    }
}

TEST_CASE("irreducibility")
{
    auto d0 = P({{0.0, 1.0}});
    auto sym = P({{-1.0, 0.5}, {1.0, 0.5}});
    auto r = is_irreducible(d0, sym);
    CHECK(r.irreducible);
    CHECK(r.domain == Interval::open(-1.0, 1.0));

    auto same = is_irreducible(d0, d0);
    CHECK_FALSE(same.irreducible);
    CHECK(same.domain.empty());

    auto mu = P({{-2.0, 0.5}, {2.0, 0.5}});
    auto nu = P({{-3.0, 0.25}, {-1.0, 0.25}, {1.0, 0.25}, {3.0, 0.25}});
    auto two = is_irreducible(mu, nu);
    CHECK_FALSE(two.irreducible);
    REQUIRE(two.components.size() == 2);
    CHECK(two.components[0] == Interval::open(-3.0, -1.0));
    CHECK(two.components[1] == Interval::open(1.0, 3.0));

    CHECK_THROWS_AS(is_irreducible(sym, d0), NotInConvexOrder);
}

TEST_CASE("intervals")
{
    auto I = Interval::open(0.0, 1.0);
    CHECK(I.contains(0.5));
    CHECK_FALSE(I.contains(0.0));
    CHECK(Interval::closed(0.0, 1.0).contains(1.0));
    CHECK(Interval{}.empty());
    CHECK_FALSE(Interval::open(0.0, std::numeric_limits<double>::infinity()).bounded());
}
