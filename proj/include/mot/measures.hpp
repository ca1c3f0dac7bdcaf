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

#pragma once

#include "mot/tolerances.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mot {

struct Atom
{
    double position;
    double weight;
};

/// Interval of the real line; either end may be infinite.
struct Interval
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

    bool empty() const { return !(lo < hi) && !(lo == hi && lo_closed && hi_closed); }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const
    {
        bool const above = lo_closed ? x >= lo : x > lo;
        bool const below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
    bool operator==(Interval const&) const = default;
};

/// Finitely supported positive measure on the real line, stored as atoms
/// sorted strictly increasing by position. Duplicate positions are merged
/// at construction.
class DiscreteMeasure
{
public:
    DiscreteMeasure() = default;

    /// Probability measure; total mass must equal one within mass_tol.
    static DiscreteMeasure probability(std::vector<Atom> atoms, double mass_tol = 1e-12);

    /// Positive measure of arbitrary total mass (e.g. pieces of a decomposition).
    static DiscreteMeasure finite(std::vector<Atom> atoms);

    std::span<Atom const> atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    Atom const& operator[](std::size_t i) const { return atoms_[i]; }

    double mass() const { return mass_; }
    double first_moment() const;
    double mean() const;
    double variance() const;

    std::vector<double> positions() const;
    std::vector<double> weights() const;

    std::optional<std::size_t> index_of(double position) const;
    double weight_at(double position) const;

    /// Same atoms rescaled to total mass one.
    DiscreteMeasure normalized() const;
    DiscreteMeasure restricted(Interval const& interval) const;

private:
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    std::vector<Atom> atoms_;
    double mass_ = 0.0;
};

/// u_m(x) = sum_i w_i |x - x_i|, evaluated exactly with compensated summation.
double potential(DiscreteMeasure const& m, double x);

/// Sorted union of the atom positions of both measures.
std::vector<double> union_grid(DiscreteMeasure const& a, DiscreteMeasure const& b);

struct OrderWitness
{
    double point;
    double deficit; // u_mu(point) - u_nu(point) > 0, or the mean gap
};

struct OrderReport
{
    bool ordered = false;
    double mass_gap = 0.0;
    double mean_gap = 0.0;
    std::optional<OrderWitness> witness;
};

OrderReport check_convex_order(DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                               Tolerances const& tol = {});

/// Maximal open intervals on which u_nu - u_mu > gap_tol.
std::vector<Interval> strict_components(DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                                        double gap_tol);

struct IrreducibilityReport
{
    bool irreducible = false;
    Interval domain;                 // meaningful when a single component exists
    std::vector<Interval> components;
};

/// Throws NotInConvexOrder when mu and nu are not in convex order.
IrreducibilityReport is_irreducible(DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                                    Tolerances const& tol = {});

} // namespace mot
