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

#include "mot/pipeline.hpp"

#include "mot/errors.hpp"

#include <algorithm>

namespace mot {
namespace {

PrimalSolution solve_lp(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                        SolveOptions const& options, bool exact)
{
    PrimalOptions po;
    po.exact = exact;
    po.tol = options.tol;
    return solve_primal(mu, nu, cost, po);
}

} // namespace

bool DualSolution::verified(Tolerances const& tol) const
{
    return report.max_ineq_violation <= tol.viol_tol && report.max_support_residual <= tol.eq_tol &&
           report.gap <= tol.duality_tol;
}

DualSolution solve_dual(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                        SolveOptions const& options)
{
    Tolerances const& tol = options.tol;
    DualSolution out;
    out.order = check_convex_order(mu, nu, tol);
    if (!out.order.ordered)
        throw Infeasible("mu and nu are not in convex order");

    out.decomposition = decompose(mu, nu, tol);
    out.primal = solve_lp(mu, nu, cost, options, options.exact);
    std::vector<double> const grid = evaluation_grid(mu, nu, cost, options.grid_refine);

    bool usable = true;
    std::vector<DualTriple> triples;
    for (std::size_t k = 0; k < out.decomposition.components.size(); ++k) {
        Component const& comp = out.decomposition.components[k];
        ComponentReport rep;
        rep.interval = comp.interval;
        try {
            PrimalSolution ps = solve_lp(comp.mu, comp.nu, cost, options, options.exact);
            DualTriple raw;
            try {
                raw = recover_component_dual(comp, static_cast<int>(k + 1), cost, ps, tol);
            } catch (SlacknessViolated const&) {
                if (options.exact)
                    throw;
                ps = solve_lp(comp.mu, comp.nu, cost, options, true);
                raw = recover_component_dual(comp, static_cast<int>(k + 1), cost, ps, tol);
            }
            rep.primal_value = ps.value;
            auto norm = normalize_component(with_envelope(std::move(raw), cost, grid), comp.interval, comp.nu, tol);
            rep.chord = norm.chord;
            rep.shape_violation = norm.violation;
            if (norm.violation)
                usable = false;
            triples.push_back(std::move(norm.triple));
        } catch (Error const& e) {
            rep.failure = e.what();
            usable = false;
        }
        out.components.push_back(std::move(rep));
    }

    if (usable) {
        GlueResult glued = glue(mu, out.decomposition, triples, cost, grid, tol);
        out.glue_violation = glued.violation;
        out.triple = std::move(glued.triple);
        out.method = "glued";
        out.report = verify_duality(out.triple, mu, nu, cost, out.primal.coupling, tol);
        if (!glued.violation && out.verified(tol))
            return out;
    }
    if (!options.allow_fallback) {
        if (!usable)
            out.method = "none";
        return out;
    }

    // Finite LPs always attain their dual, so the full-instance multipliers
    // are a valid certificate even when the componentwise route is blocked.
    DualTriple direct;
    try {
        direct = recover_dual(mu, nu, cost, out.primal, tol);
    } catch (SlacknessViolated const&) {
        if (options.exact)
            throw;
        out.primal = solve_lp(mu, nu, cost, options, true);
        direct = recover_dual(mu, nu, cost, out.primal, tol);
    }
    direct.component.clear();
    for (double x : direct.x)
        direct.component.push_back(out.decomposition.component_of(x));
    out.triple = with_envelope(std::move(direct), cost, grid);
    out.method = "direct";
    out.report = verify_duality(out.triple, mu, nu, cost, out.primal.coupling, tol);
    return out;
}

} // namespace mot
