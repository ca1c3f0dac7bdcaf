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
#include "mot/measures.hpp"
#include "mot/tolerances.hpp"

#include <cstddef>
#include <vector>

namespace mot {

/// Transport plan on supp(mu) x supp(nu), stored row-major.
struct Coupling
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pi;

    double operator()(std::size_t i, std::size_t j) const { return pi[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return pi[i * cols + j]; }
};

struct CouplingResiduals
{
    double row = 0.0;
    double col = 0.0;
    double barycenter = 0.0;
    double negativity = 0.0;
};

/// Optimal basis and LP multipliers. With the sign conventions of the
/// transport LP they are f = -row_duals, g = col_duals, h = -bary_duals.
struct BasisCertificate
{
    std::vector<std::size_t> basis;
    std::vector<double> row_duals;  // one per mu atom
    std::vector<double> col_duals;  // one per nu atom
    std::vector<double> bary_duals; // one per mu atom
    std::vector<double> reduced_costs;
    double min_reduced_cost = 0.0;
    bool exact = false;
    std::size_t iterations = 0;
    std::size_t bland_pivots = 0;
};

struct PrimalSolution
{
    Coupling coupling;
    double value = 0.0;
    BasisCertificate certificate;
};

struct PrimalOptions
{
    bool exact = false;
    std::size_t degenerate_limit = 50;
    Tolerances tol;
};

/// Matrix of c(x_i, y_j), row-major.
std::vector<double> cost_matrix(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost);

/// Minimizes E[c(X,Y)] over martingale couplings of (mu, nu).
/// Throws Infeasible when the pair is not in convex order.
PrimalSolution solve_primal(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                            PrimalOptions const& options = {});

/// Strassen: a martingale coupling exists iff mu precedes nu in convex order.
bool feasible(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol = {});

double expected_cost(Coupling const& coupling, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                     CostSpec const& cost);

CouplingResiduals coupling_residuals(Coupling const& coupling, DiscreteMeasure const& mu,
                                     DiscreteMeasure const& nu);

} // namespace mot
