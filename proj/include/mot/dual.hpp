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

#include "mot/cost.hpp"
#include "mot/decomposition.hpp"
#include "mot/measures.hpp"
#include "mot/primal.hpp"
#include "mot/tolerances.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mot {

/// L(y) = intercept + slope * y
struct AffineGauge
{
    double intercept = 0.0;
    double slope = 0.0;

    double operator()(double y) const { return intercept + slope * y; }
};

/// Dual candidate (f, g, h): f and h live on the atoms of mu, g on an
/// evaluation grid. Feasibility means
///     g(y) - f(x) - h(x) (y - x) <= c(x, y)   for every atom x and grid point y.
struct DualTriple
{
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> h;
    std::vector<double> grid; // sorted, distinct
    std::vector<double> g;
    std::vector<int> component;              // per atom; 0 marks the diagonal part
    std::vector<AffineGauge> normalization;  // entry k - 1 belongs to component k

    std::optional<std::size_t> grid_index(double y) const;
    double g_at(double y) const; // throws when y is not a grid point

    /// v_x(y) = f(x) + h(x)(y - x) + c(x, y) for atom i.
    double v(std::size_t i, double y, CostSpec const& cost) const { return f[i] + h[i] * (y - x[i]) + cost(x[i], y); }

    /// (f - L(x), g - L(y), h - slope(L)); the constraints are unchanged.
    DualTriple minus(AffineGauge const& gauge) const;
};

struct ContactSet
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (mu atom, nu atom)

    bool contains(std::size_t i, std::size_t j) const;
};

struct DualityReport
{
    double max_ineq_violation = 0.0;
    double max_support_residual = 0.0;
    double gap = 0.0;
    double dual_value = 0.0;
    double primal_value = 0.0;
    double worst_ineq_x = 0.0;
    double worst_ineq_y = 0.0;
    double worst_support_x = 0.0;
    double worst_support_y = 0.0;
};

struct ShapeViolation
{
    double y;
    double value;
    std::string where; // "inside", "outside" or "endpoint"
};

struct NormalizedComponent
{
    DualTriple triple;
    AffineGauge chord;
    std::optional<ShapeViolation> violation;
};

struct GlueViolation
{
    double x;        // atom whose affine-plus-cost function undercuts
    double y;        // grid point where it does
    double residual; // amount by which equality on the support is lost
};

struct GlueResult
{
    DualTriple triple;
    std::optional<GlueViolation> violation;
};

struct HalfInfiniteDomain
{
    double left;  // lower end of the domain ]left, infinity[
    double probe; // point of [A, left] where the left tail is watched
};

struct NormalizationVerdict
{
    bool converged = false;
    bool monotone = true;          // g_n(probe) >= g_n(left) at every level
    double limit = 0.0;
    std::vector<double> profile;   // g_n(left) after gauge fixing
    std::vector<double> probe_profile;
    std::vector<AffineGauge> gauges;
    std::vector<DualTriple> normalized; // filled when converged
};

struct ChordRecord
{
    double left;
    double right;
    AffineGauge line;
};

/// Sorted union of supp(mu), supp(nu) and component endpoints, refined
/// with `refine` equispaced points per gap when the cost allows it.
std::vector<double> evaluation_grid(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                                    int refine = 0);

/// Raw dual from LP multipliers; g lives on supp(nu). Throws
/// SlacknessViolated when equality fails on the coupling support.
DualTriple recover_dual(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                        PrimalSolution const& solution, Tolerances const& tol = {});

DualTriple recover_component_dual(Component const& component, int tag, CostSpec const& cost,
                                  PrimalSolution const& solution, Tolerances const& tol = {});

/// g~(y) = min over atoms of f(x) + h(x)(y - x) + c(x, y), at each grid point.
std::vector<double> envelope_g(std::span<double const> x, std::span<double const> f, std::span<double const> h,
                               CostSpec const& cost, std::span<double const> grid);

/// Replaces g by the envelope g~ on `grid`.
DualTriple with_envelope(DualTriple triple, CostSpec const& cost, std::vector<double> grid);

/// Subtracts the chord through (a, g(a)) and (b, g(b)) and checks the sign
/// pattern: g <= 0 inside ]a,b[, g >= 0 outside, g = 0 at charged endpoints.
NormalizedComponent normalize_component(DualTriple const& raw, Interval const& interval,
                                        DiscreteMeasure const& nu_k, Tolerances const& tol = {});

/// Gauge-fixes a sequence of duals on growing truncations of a half-infinite
/// domain and watches g_n(left) and g_n(probe) for convergence.
NormalizationVerdict halfinfinite_normalize(std::span<DualTriple const> truncations, CostSpec const& cost,
                                            HalfInfiniteDomain const& domain, Tolerances const& tol = {});

/// Order of the atoms such that each new contact interval meets the union of the previous ones.
std::vector<std::size_t> chain_order(DualTriple const& triple, Coupling const& coupling,
                                     DiscreteMeasure const& nu, double supp_tol);

/// Chord lines L_n through (l_n, g_n(l_n)) and (r_n, g_n(r_n)) where g_n is
/// the envelope of the first n atoms of `order`.
std::vector<ChordRecord> chord_sequence(DualTriple const& triple, std::span<std::size_t const> order,
                                        Coupling const& coupling, DiscreteMeasure const& nu, CostSpec const& cost,
                                        double supp_tol);

/// Subgradient midpoint of y -> c(x, y) at y = x.
double diagonal_slope(CostSpec const& cost, double x, std::span<double const> grid);

GlueResult glue(DiscreteMeasure const& mu, ComponentDecomposition const& decomposition,
                std::span<DualTriple const> component_triples, CostSpec const& cost, std::vector<double> grid,
                Tolerances const& tol = {});

DualityReport verify_duality(DualTriple const& triple, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                             CostSpec const& cost, Coupling const& coupling, Tolerances const& tol = {});

ContactSet contact_set(DualTriple const& triple, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                       CostSpec const& cost, double eq_tol);

} // namespace mot
