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

// Dense revised simplex for min c'x subject to Ax = b, x >= 0.
//
// Phase 1 starts from an all-artificial basis. Pricing is Dantzig's rule;
// after a run of degenerate pivots it switches to Bland's rule until the
// objective moves again. The basis inverse is kept explicitly and, in
// floating point, rebuilt from scratch periodically. The same algorithm is
// instantiated over GMP rationals for exact solves.

#include <cstddef>
#include <vector>

namespace mot::lp {

/// Sparse constraint matrix in compressed-column form.
struct Problem
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> col_start; // size cols + 1
    std::vector<std::size_t> row_index;
    std::vector<double> value;
    std::vector<double> b;
    std::vector<double> c;
};

enum class Status
{
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit
};

struct Options
{
    double pivot_tol = 1e-9;
    double feas_tol = 1e-9;
    double opt_tol = 1e-10;
    std::size_t degenerate_limit = 50;
    std::size_t max_iterations = 0; // 0 = automatic
    std::size_t refactor_every = 64;
};

struct Solution
{
    Status status = Status::IterationLimit;
    std::vector<double> x;              // structural variables
    std::vector<double> y;              // row multipliers
    std::vector<double> reduced_costs;  // c - A'y, structural only
    std::vector<std::size_t> basis;     // column per row; >= cols marks an artificial
    std::vector<bool> redundant_rows;
    double objective = 0.0;
    double infeasibility = 0.0;         // phase 1 optimum
    std::size_t iterations = 0;
    std::size_t degenerate_pivots = 0;
    std::size_t bland_pivots = 0;
};

Solution solve(Problem const& problem, Options const& options = {});

/// Same algorithm in exact rational arithmetic on the given double data.
/// Tolerances in `options` are ignored.
Solution solve_exact(Problem const& problem, Options const& options = {});

} // namespace mot::lp
