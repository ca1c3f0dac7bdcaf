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

// Generators for the four families on which dual attainment or
// integrability breaks down, with the statistics that expose it.

#include "mot/cost.hpp"
#include "mot/dual.hpp"
#include "mot/measures.hpp"
#include "mot/primal.hpp"
#include "mot/tolerances.hpp"

#include <span>
#include <string>
#include <vector>

namespace mot {

struct TruncatedFamily
{
    std::string name;
    int level = 0;
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    CostSpec cost;
    std::vector<double> xs; // materialized x sequence (row atoms)
    std::vector<double> ys; // materialized y sequence (designated grid)
};

/// Quadratic-growth cost: x_n = n, each x_n split evenly to n - 1 and n + 1,
/// c(n, y) = y^2 for y >= n - 1 and (n - 1) y below.
TruncatedFamily gen_linear_growth(int N);

/// y_n = sum_{k<=n} 1/k^2, x_n midpoints, tent costs vanishing on
/// [y_{n-1}, y_n]; a last atom sits at y_N and stays put.
TruncatedFamily gen_local_convexity(int N);

/// Same pattern with y_n = sum_{k<=n} k^-s and c = -|x - y|^r.
/// Throws BadParameters unless 1 < r < 2, s > 1 and s r < 2.
TruncatedFamily gen_cr_cost(double r, double s, int N);

/// xi(y) = 4 - 1/y - 1/(1 - y)
double xi(double y);
double xi_prime(double y);
inline constexpr char const* xi_formula = "4 - 1/y - 1/(1-y)";

struct NonintegrableInstance
{
    int K = 0;
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    CostSpec cost;          // -|x - y|
    DualTriple triple;      // g = xi on supp(nu)
    Coupling coupling;      // two-point kernels
    std::vector<double> y_minus;
    std::vector<double> y_plus;
};

/// Uniform mu on K midpoints of [0, 1]; each atom is split to the two points
/// where its kinked line touches xi. Throws RootFindFailed.
NonintegrableInstance gen_nonintegrable(int K);

// --- diagnostics ---------------------------------------------------------

struct LinearGrowthLevel
{
    int N = 0;
    double g_at_minus_one = 0.0; // envelope at y = -1 with f = h = 0
};

struct LinearGrowthDiagnostic
{
    std::vector<LinearGrowthLevel> levels;
    NormalizationVerdict verdict;
};

LinearGrowthDiagnostic diagnose_linear_growth(std::span<int const> Ns, Tolerances const& tol = {});

struct LocalConvexityLevel
{
    int N = 0;
    std::vector<double> h;       // LP-dual h at x_1..x_N
    double min_slope_drop = 0.0; // min over interior n of h(x_n) - h(x_{n+1})
    bool slope_check = false;    // every drop >= 1 - 1e-6
    double statistic = 0.0;      // g(y_N) - g(y_0) - h(x_1)(y_N - y_0)
    double bound = 0.0;          // -sum_{n<=N} (n - 1)/n^2
    std::string shape;           // normalization outcome of the pipeline
};

struct LocalConvexityDiagnostic
{
    std::vector<LocalConvexityLevel> levels;
    bool monotone = false; // statistic non-increasing in N
};

LocalConvexityDiagnostic diagnose_local_convexity(std::span<int const> Ns, Tolerances const& tol = {});

struct CrLevel
{
    int N = 0;
    std::vector<double> b;     // h(x_n) gauged so that b_1 = 0
    std::vector<double> drops; // b_n - b_{n+1}
    double regression_slope = 0.0;
    double weighted_sum = 0.0; // sum (y_n - y_{n-1}) b_n
};

struct CrDiagnostic
{
    double r = 0.0;
    double s = 0.0;
    std::vector<CrLevel> levels;
    bool cauchy = false;
    bool monotone = false;
};

CrDiagnostic diagnose_cr(double r, double s, std::span<int const> Ns, Tolerances const& tol = {});

struct NonintegrableLevel
{
    int K = 0;
    double nu_g = 0.0;
    DualityReport report;
};

struct NonintegrableDiagnostic
{
    std::vector<NonintegrableLevel> levels;
    bool diverging = false;
};

NonintegrableDiagnostic diagnose_nonintegrable(std::span<int const> Ks, Tolerances const& tol = {});

/// Least-squares slope of log(values) against log(index), over entries with
/// positive value and index in [first, last].
double loglog_slope(std::span<double const> values, std::size_t first, std::size_t last);

} // namespace mot
