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

#include "mot/primal.hpp"

#include "mot/errors.hpp"
#include "mot/numeric.hpp"
#include "mot/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mot {

std::vector<double> cost_matrix(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost)
{
    std::vector<double> out;
    out.reserve(mu.size() * nu.size());
    for (auto const& a : mu.atoms())
        for (auto const& b : nu.atoms())
            out.push_back(cost(a.position, b.position));
    return out;
}

PrimalSolution solve_primal(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                            PrimalOptions const& options)
{
    auto const order = check_convex_order(mu, nu, options.tol);
    if (!order.ordered) {
        std::ostringstream os;
        os << "no martingale coupling: measures are not in convex order";
        if (order.witness)
            os << " (violation " << order.witness->deficit << " at " << order.witness->point << ")";
        throw Infeasible(os.str());
    }

    std::size_t const n = mu.size();
    std::size_t const m = nu.size();

    // Rows: [0, n) marginal of mu, [n, n+m) marginal of nu, [n+m, 2n+m) barycenters.
    lp::Problem p;
    p.rows = 2 * n + m;
    p.cols = n * m;
    p.col_start.reserve(p.cols + 1);
    p.c = cost_matrix(mu, nu, cost);
    for (double v : p.c)
        if (!std::isfinite(v))
            throw Unbounded("cost is not finite on the support");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            p.col_start.push_back(p.row_index.size());
            p.row_index.push_back(i);
            p.value.push_back(1.0);
            p.row_index.push_back(n + j);
            p.value.push_back(1.0);
            double const d = nu[j].position - mu[i].position;
            if (d != 0.0) {
                p.row_index.push_back(n + m + i);
                p.value.push_back(d);
            }
        }
    p.col_start.push_back(p.row_index.size());
    p.b.resize(p.rows, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        p.b[i] = mu[i].weight;
    for (std::size_t j = 0; j < m; ++j)
        p.b[n + j] = nu[j].weight;

    lp::Options lopt;
    lopt.feas_tol = options.tol.lp_tol;
    lopt.pivot_tol = options.tol.lp_tol;
    lopt.degenerate_limit = options.degenerate_limit;
    lp::Solution const s = options.exact ? lp::solve_exact(p, lopt) : lp::solve(p, lopt);

    switch (s.status) {
    case lp::Status::Infeasible:
        throw Infeasible("transport LP is infeasible (residual artificial mass above threshold)");
    case lp::Status::Unbounded:
        throw Unbounded("transport LP is unbounded; the cost specification is malformed");
    case lp::Status::IterationLimit:
        throw Error("transport LP hit its iteration limit");
    case lp::Status::Optimal:
        break;
    }

    PrimalSolution out;
    out.coupling = Coupling{n, m, s.x};
    for (auto& v : out.coupling.pi)
        v = std::max(v, 0.0);
    out.value = s.objective;

    auto& cert = out.certificate;
    cert.basis = s.basis;
    cert.row_duals.assign(s.y.begin(), s.y.begin() + static_cast<std::ptrdiff_t>(n));
    cert.col_duals.assign(s.y.begin() + static_cast<std::ptrdiff_t>(n),
                          s.y.begin() + static_cast<std::ptrdiff_t>(n + m));
    cert.bary_duals.assign(s.y.begin() + static_cast<std::ptrdiff_t>(n + m), s.y.end());
    cert.reduced_costs = s.reduced_costs;
    cert.min_reduced_cost = s.reduced_costs.empty()
                                ? 0.0
                                : *std::min_element(s.reduced_costs.begin(), s.reduced_costs.end());
    cert.exact = options.exact;
    cert.iterations = s.iterations;
    cert.bland_pivots = s.bland_pivots;
    return out;
}

bool feasible(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol)
{
    return check_convex_order(mu, nu, tol).ordered;
}

double expected_cost(Coupling const& coupling, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                     CostSpec const& cost)
{
    CompensatedSum s;
    for (std::size_t i = 0; i < coupling.rows; ++i)
        for (std::size_t j = 0; j < coupling.cols; ++j)
            if (coupling(i, j) != 0.0)
                s.add(coupling(i, j) * cost(mu[i].position, nu[j].position));
    return s.value();
}

CouplingResiduals coupling_residuals(Coupling const& coupling, DiscreteMeasure const& mu, DiscreteMeasure const& nu)
{
    CouplingResiduals r;
    for (std::size_t i = 0; i < coupling.rows; ++i) {
        CompensatedSum row, bary;
        for (std::size_t j = 0; j < coupling.cols; ++j) {
            double const p = coupling(i, j);
            row.add(p);
            bary.add(p * (nu[j].position - mu[i].position));
            r.negativity = std::max(r.negativity, -p);
        }
        r.row = std::max(r.row, std::abs(row.value() - mu[i].weight));
        r.barycenter = std::max(r.barycenter, std::abs(bary.value()));
    }
    for (std::size_t j = 0; j < coupling.cols; ++j) {
        CompensatedSum col;
        for (std::size_t i = 0; i < coupling.rows; ++i)
            col.add(coupling(i, j));
        r.col = std::max(r.col, std::abs(col.value() - nu[j].weight));
    }
    return r;
}

} // namespace mot
