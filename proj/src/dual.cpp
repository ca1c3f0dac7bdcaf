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

#include "mot/dual.hpp"

#include "mot/errors.hpp"
#include "mot/kernels.hpp"
#include "mot/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mot {
namespace {

bool cauchy_tail(std::vector<double> const& seq, double tol)
{
    if (seq.size() < 3)
        return false;
    std::size_t const n = seq.size();
    return std::abs(seq[n - 1] - seq[n - 2]) <= tol && std::abs(seq[n - 2] - seq[n - 3]) <= tol;
}

double envelope_at(DualTriple const& t, CostSpec const& cost, double y, std::size_t count)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i)
        best = std::min(best, t.v(i, y, cost));
    return best;
}

} // namespace

std::optional<std::size_t> DualTriple::grid_index(double y) const
{
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    if (it == grid.end() || *it != y)
        return std::nullopt;
    return static_cast<std::size_t>(it - grid.begin());
}

double DualTriple::g_at(double y) const
{
    auto k = grid_index(y);
    if (!k) {
        std::ostringstream os;
        os << "dual g is not defined at " << y;
        throw Error(os.str());
    }
    return g[*k];
}

DualTriple DualTriple::minus(AffineGauge const& gauge) const
{
    DualTriple out = *this;
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        out.f[i] -= gauge(out.x[i]);
        out.h[i] -= gauge.slope;
    }
    for (std::size_t k = 0; k < out.grid.size(); ++k)
        out.g[k] -= gauge(out.grid[k]);
    return out;
}

bool ContactSet::contains(std::size_t i, std::size_t j) const
{
    return std::find(pairs.begin(), pairs.end(), std::pair{i, j}) != pairs.end();
}

std::vector<double> evaluation_grid(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                                    int refine)
{
    if (!cost.defined_on_line())
        return nu.positions();
    std::vector<double> grid = union_grid(mu, nu);
    if (refine > 0 && grid.size() > 1) {
        std::vector<double> fine;
        fine.reserve(grid.size() * static_cast<std::size_t>(refine + 1));
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            fine.push_back(grid[k]);
            for (int s = 1; s <= refine; ++s)
                fine.push_back(grid[k] + (grid[k + 1] - grid[k]) * s / (refine + 1));
        }
        fine.push_back(grid.back());
        grid = std::move(fine);
    }
    return grid;
}

DualTriple recover_dual(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                        PrimalSolution const& solution, Tolerances const& tol)
{
    auto const& cert = solution.certificate;
    if (cert.row_duals.size() != mu.size() || cert.col_duals.size() != nu.size())
        throw Error("certificate does not match the measures");

    DualTriple t;
    t.x = mu.positions();
    t.f.resize(mu.size());
    t.h.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        t.f[i] = -cert.row_duals[i];
        t.h[i] = -cert.bary_duals[i];
    }
    t.grid = nu.positions();
    t.g = cert.col_duals;
    t.component.assign(mu.size(), 0);

    double worst = 0.0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) {
            if (solution.coupling(i, j) <= tol.supp_tol)
                continue;
            double const r = std::abs(t.g[j] - t.v(i, nu[j].position, cost));
            if (r > worst) {
                worst = r;
                wi = i;
                wj = j;
            }
        }
    if (worst > tol.eq_tol) {
        std::ostringstream os;
        os << "complementary slackness fails by " << worst << " at (" << mu[wi].position << ", "
           << nu[wj].position << ")";
        throw SlacknessViolated(os.str());
    }
    return t;
}

DualTriple recover_component_dual(Component const& component, int tag, CostSpec const& cost,
                                  PrimalSolution const& solution, Tolerances const& tol)
{
    DualTriple t = recover_dual(component.mu, component.nu, cost, solution, tol);
    t.component.assign(t.x.size(), tag);
    return t;
}

std::vector<double> envelope_g(std::span<double const> x, std::span<double const> f, std::span<double const> h,
                               CostSpec const& cost, std::span<double const> grid)
{
    return kernels::lower_envelope({x, f, h}, cost, grid).value;
}

DualTriple with_envelope(DualTriple triple, CostSpec const& cost, std::vector<double> grid)
{
    triple.g = envelope_g(triple.x, triple.f, triple.h, cost, grid);
    triple.grid = std::move(grid);
    return triple;
}

NormalizedComponent normalize_component(DualTriple const& raw, Interval const& interval,
                                        DiscreteMeasure const& nu_k, Tolerances const& tol)
{
    double const a = interval.lo;
    double const b = interval.hi;
    if (!interval.bounded())
        throw Error("normalize_component needs a bounded interval");
    auto const ia = raw.grid_index(a);
    auto const ib = raw.grid_index(b);
    if (!ia || !ib)
        throw Error("component endpoints are not grid points");

    NormalizedComponent out;
    double const ga = raw.g[*ia];
    double const gb = raw.g[*ib];
    out.chord.slope = (gb - ga) / (b - a);
    out.chord.intercept = ga - out.chord.slope * a;
    out.triple = raw.minus(out.chord);
    out.triple.g[*ia] = 0.0;
    out.triple.g[*ib] = 0.0;
    out.triple.normalization = {out.chord};

    double worst = 0.0;
    auto record = [&](double y, double value, double excess, char const* where) {
        if (excess > tol.viol_tol && excess > worst) {
            worst = excess;
            out.violation = ShapeViolation{y, value, where};
        }
    };
    for (std::size_t k = 0; k < out.triple.grid.size(); ++k) {
        double const y = out.triple.grid[k];
        double const g = out.triple.g[k];
        if (y > a && y < b)
            record(y, g, g, "inside");
        else if (y < a || y > b)
            record(y, g, -g, "outside");
    }
    // With both endpoints charged by nu_k the chord pins g there exactly;
    // an uncharged endpoint is a precondition failure worth reporting.
    if (nu_k.weight_at(a) <= 0.0)
        record(a, 0.0, std::numeric_limits<double>::infinity(), "endpoint");
    if (nu_k.weight_at(b) <= 0.0)
        record(b, 0.0, std::numeric_limits<double>::infinity(), "endpoint");
    return out;
}

NormalizationVerdict halfinfinite_normalize(std::span<DualTriple const> truncations, CostSpec const& cost,
                                            HalfInfiniteDomain const& domain, Tolerances const& tol)
{
    NormalizationVerdict verdict;
    for (DualTriple const& t : truncations) {
        if (t.x.empty())
            throw Error("empty truncation");

        // Gauge: v_{x_1}(left) = 0 and, for linear-growth costs, v_{x_1}
        // nonincreasing on the grid to the right of `left`.
        AffineGauge gauge;
        double const v_left = t.v(0, domain.left, cost);
        if (cost.linear_growth()) {
            double slope = -std::numeric_limits<double>::infinity();
            double prev_y = domain.left;
            double prev_v = v_left;
            for (double y : t.grid) {
                if (y <= domain.left)
                    continue;
                double const vy = t.v(0, y, cost);
                slope = std::max(slope, (vy - prev_v) / (y - prev_y));
                prev_y = y;
                prev_v = vy;
            }
            gauge.slope = std::isfinite(slope) ? slope : 0.0;
        }
        gauge.intercept = v_left - gauge.slope * domain.left;

        double const left = envelope_at(t, cost, domain.left, t.x.size()) - gauge(domain.left);
        double const probe = envelope_at(t, cost, domain.probe, t.x.size()) - gauge(domain.probe);
        verdict.profile.push_back(left);
        verdict.probe_profile.push_back(probe);
        verdict.gauges.push_back(gauge);
        if (probe < left - tol.viol_tol)
            verdict.monotone = false;
    }

    verdict.converged = verdict.monotone && cauchy_tail(verdict.profile, tol.conv_tol) &&
                        cauchy_tail(verdict.probe_profile, tol.conv_tol);
    if (!verdict.profile.empty())
        verdict.limit = verdict.profile.back();
    if (verdict.converged) {
        for (std::size_t n = 0; n < truncations.size(); ++n) {
            AffineGauge shift = verdict.gauges[n];
            shift.intercept += verdict.limit;
            verdict.normalized.push_back(truncations[n].minus(shift));
        }
    }
    return verdict;
}

std::vector<std::size_t> chain_order(DualTriple const& triple, Coupling const& coupling, DiscreteMeasure const& nu,
                                     double supp_tol)
{
    std::size_t const n = triple.x.size();
    std::vector<double> lo(n, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < coupling.cols; ++j)
            if (coupling(i, j) > supp_tol) {
                lo[i] = std::min(lo[i], nu[j].position);
                hi[i] = std::max(hi[i], nu[j].position);
            }

    std::vector<std::size_t> order;
    std::vector<bool> used(n, false);
    if (n == 0)
        return order;
    order.push_back(0);
    used[0] = true;
    double l = lo[0], r = hi[0];
    while (order.size() < n) {
        std::size_t next = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && lo[i] < r && hi[i] > l) {
                next = i;
                break;
            }
        if (next == n)
            for (std::size_t i = 0; i < n; ++i)
                if (!used[i]) {
                    next = i;
                    break;
                }
        used[next] = true;
        order.push_back(next);
        l = std::min(l, lo[next]);
        r = std::max(r, hi[next]);
    }
    return order;
}

std::vector<ChordRecord> chord_sequence(DualTriple const& triple, std::span<std::size_t const> order,
                                        Coupling const& coupling, DiscreteMeasure const& nu, CostSpec const& cost,
                                        double supp_tol)
{
    std::vector<ChordRecord> out;
    double l = std::numeric_limits<double>::infinity();
    double r = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < order.size(); ++n) {
        std::size_t const i = order[n];
        for (std::size_t j = 0; j < coupling.cols; ++j)
            if (coupling(i, j) > supp_tol) {
                l = std::min(l, nu[j].position);
                r = std::max(r, nu[j].position);
            }
        if (!(l < r))
            continue;
        double gl = std::numeric_limits<double>::infinity();
        double gr = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= n; ++k) {
            gl = std::min(gl, triple.v(order[k], l, cost));
            gr = std::min(gr, triple.v(order[k], r, cost));
        }
        ChordRecord rec{l, r, {}};
        rec.line.slope = (gr - gl) / (r - l);
        rec.line.intercept = gl - rec.line.slope * l;
        out.push_back(rec);
    }
    return out;
}

double diagonal_slope(CostSpec const& cost, double x, std::span<double const> grid)
{
    if (cost.defined_on_line()) {
        double const step = 1e-6 * std::max(1.0, std::abs(x));
        return (cost(x, x + step) - cost(x, x - step)) / (2.0 * step);
    }
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.end() || *it != x)
        throw CostDomainError("diagonal atom is not on the evaluation grid");
    double const cxx = cost(x, x);
    std::optional<double> left, right;
    if (it != grid.begin())
        left = (cxx - cost(x, *(it - 1))) / (x - *(it - 1));
    if (it + 1 != grid.end())
        right = (cost(x, *(it + 1)) - cxx) / (*(it + 1) - x);
    if (left && right)
        return 0.5 * (*left + *right);
    return left ? *left : right.value_or(0.0);
}

GlueResult glue(DiscreteMeasure const& mu, ComponentDecomposition const& decomposition,
                std::span<DualTriple const> component_triples, CostSpec const& cost, std::vector<double> grid,
                Tolerances const& tol)
{
    if (component_triples.size() != decomposition.components.size())
        throw Error("one dual triple per component is required");

    GlueResult out;
    DualTriple& t = out.triple;
    t.x = mu.positions();
    t.f.resize(mu.size());
    t.h.resize(mu.size());
    t.component.resize(mu.size());
    for (auto const& ct : component_triples)
        t.normalization.push_back(ct.normalization.empty() ? AffineGauge{} : ct.normalization.front());

    for (std::size_t i = 0; i < mu.size(); ++i) {
        double const x = t.x[i];
        int const k = decomposition.component_of(x);
        t.component[i] = k;
        if (k == 0) {
            t.f[i] = -cost(x, x);
            t.h[i] = -diagonal_slope(cost, x, grid);
            continue;
        }
        DualTriple const& ct = component_triples[static_cast<std::size_t>(k - 1)];
        auto pos = std::lower_bound(ct.x.begin(), ct.x.end(), x);
        if (pos == ct.x.end() || *pos != x)
            throw Error("component triple is missing an atom of its component");
        std::size_t const ci = static_cast<std::size_t>(pos - ct.x.begin());
        t.f[i] = ct.f[ci];
        t.h[i] = ct.h[ci];
    }

    auto const env = kernels::lower_envelope({t.x, t.f, t.h}, cost, grid);
    t.grid = std::move(grid);
    t.g = env.value;

    // Equality on each component's support must survive the global minimum.
    double worst = 0.0;
    auto check = [&](double y, double own) {
        auto k = t.grid_index(y);
        if (!k)
            return;
        double const residual = own - t.g[*k];
        if (residual > tol.viol_tol && residual > worst) {
            worst = residual;
            out.violation = GlueViolation{t.x[env.argmin[*k]], y, residual};
        }
    };
    for (std::size_t k = 0; k < decomposition.components.size(); ++k) {
        DualTriple const& ct = component_triples[k];
        for (auto const& a : decomposition.components[k].nu.atoms())
            check(a.position, envelope_at(ct, cost, a.position, ct.x.size()));
    }
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (t.component[i] == 0)
            check(t.x[i], t.v(i, t.x[i], cost));
    return out;
}

DualityReport verify_duality(DualTriple const& triple, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                             CostSpec const& cost, Coupling const& coupling, Tolerances const& tol)
{
    if (triple.x.size() != mu.size() || coupling.rows != mu.size() || coupling.cols != nu.size())
        throw Error("dual triple, coupling and measures have inconsistent shapes");
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (triple.x[i] != mu[i].position)
            throw Error("dual triple atoms differ from supp(mu)");

    DualityReport rep;
    auto const worst = kernels::max_residual({triple.x, triple.f, triple.h}, cost, triple.grid, triple.g);
    rep.max_ineq_violation = std::max(0.0, worst.value);
    if (!triple.grid.empty() && !triple.x.empty()) {
        rep.worst_ineq_x = triple.x[worst.x_index];
        rep.worst_ineq_y = triple.grid[worst.y_index];
    }

    std::vector<double> g_nu(nu.size());
    for (std::size_t j = 0; j < nu.size(); ++j)
        g_nu[j] = triple.g_at(nu[j].position);

    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) {
            if (coupling(i, j) <= tol.supp_tol)
                continue;
            double const r = std::abs(g_nu[j] - triple.v(i, nu[j].position, cost));
            if (r > rep.max_support_residual) {
                rep.max_support_residual = r;
                rep.worst_support_x = mu[i].position;
                rep.worst_support_y = nu[j].position;
            }
        }

    CompensatedSum dual;
    for (std::size_t j = 0; j < nu.size(); ++j)
        dual.add(nu[j].weight * g_nu[j]);
    for (std::size_t i = 0; i < mu.size(); ++i)
        dual.add(-mu[i].weight * triple.f[i]);
    rep.dual_value = dual.value();
    rep.primal_value = expected_cost(coupling, mu, nu, cost);
    rep.gap = std::abs(rep.dual_value - rep.primal_value);
    return rep;
}

ContactSet contact_set(DualTriple const& triple, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                       CostSpec const& cost, double eq_tol)
{
    ContactSet cs;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) {
            auto k = triple.grid_index(nu[j].position);
            if (!k)
                continue;
            if (std::abs(triple.g[*k] - triple.v(i, nu[j].position, cost)) <= eq_tol)
                cs.pairs.emplace_back(i, j);
        }
    return cs;
}

} // namespace mot
