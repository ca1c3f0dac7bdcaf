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
#include "mot/dual.hpp"
#include "mot/measures.hpp"
#include "mot/piecewise_linear.hpp"
#include "mot/tolerances.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mot {

/// Least concave majorant of a finite point set, stored as its hull
/// vertices. Evaluated by linear interpolation and extended constantly
/// outside the hull.
class ConcaveEnvelope
{
public:
    ConcaveEnvelope() = default;
    explicit ConcaveEnvelope(std::vector<Knot> hull) : hull_(std::move(hull)) {}

    double operator()(double y) const;

    /// [lower, upper] bounds of the superdifferential at y. At the outer
    /// vertices only the inner one-sided slope is used.
    std::pair<double, double> superdifferential(double y) const;
    double supergradient(double y) const;

    std::span<Knot const> hull() const { return hull_; }

private:
    std::vector<Knot> hull_;
};

/// Upper-hull sweep over points sorted by strictly increasing y.
ConcaveEnvelope concave_envelope(std::span<Knot const> points);

struct LipschitzMeasure
{
    double f = 0.0;
    double g = 0.0;
    double h = 0.0; // sup |h|
};

struct LipschitzCertificate
{
    double L1 = 0.0; // modulus of c on J x J
    double L2 = 0.0; // modulus of u on J
    LipschitzMeasure measured;
    LipschitzMeasure bounds;
    bool pass = false;

    std::string describe() const;
};

struct SmoothedDual
{
    DualTriple triple;                // dual for the original cost c, g restricted to J
    std::vector<ConcaveEnvelope> H;   // H(x_i, .) per atom
    LipschitzCertificate certificate;
};

/// `shifted` must be a dual triple for c + u (typically from solve_dual with
/// CostSpec::shifted(c, u)). Clamps g to g ^ 0 on J, rebuilds f and h from
/// the concave envelopes of y -> g(y) - c(x,y) - u(y) and returns
/// (f~, g ^ 0 - u, h~). Throws NotCompact when J is unbounded.
SmoothedDual lipschitz_postprocess(DualTriple const& shifted, CostSpec const& cost, PiecewiseLinear const& u,
                                   Interval const& J);

struct Convexifier
{
    double lambda = 0.0;
    PiecewiseLinear u; // lambda * y^2 sampled on the grid
};

/// Smallest lambda making c(x, .) + lambda y^2 convex on the grid for
/// every x (second divided differences), with u sampled on the grid.
Convexifier auto_convexifier(CostSpec const& cost, std::span<double const> xs, std::span<double const> grid);

struct ProbeLevel
{
    DiscreteMeasure nu;
    PiecewiseLinear g;
};

struct IntegrabilityProbe
{
    std::vector<double> values; // nu_n(g_n)
    bool cauchy = false;        // last three values within conv_tol
    bool diverging = false;     // strictly decreasing over the last three and not Cauchy
};

IntegrabilityProbe integrability_probe(std::span<ProbeLevel const> levels, Tolerances const& tol = {});

/// Largest |phi(b) - phi(a)| / (b - a) over consecutive points.
double grid_lipschitz(std::span<double const> ys, std::span<double const> values);

} // namespace mot
