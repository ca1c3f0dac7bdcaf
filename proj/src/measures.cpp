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

#include "mot/measures.hpp"

#include "mot/errors.hpp"
#include "mot/kernels.hpp"
#include "mot/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mot {
namespace {

std::vector<Atom> canonicalize(std::vector<Atom> atoms)
{
    for (auto const& a : atoms) {
        if (!std::isfinite(a.position) || !std::isfinite(a.weight))
            throw InvalidMeasure("atom positions and weights must be finite");
        if (a.weight < 0.0)
            throw InvalidMeasure("atom weights must be nonnegative");
    }
    std::erase_if(atoms, [](Atom const& a) { return a.weight == 0.0; });
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](Atom const& a, Atom const& b) { return a.position < b.position; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (auto const& a : atoms) {
        if (!merged.empty() && merged.back().position == a.position)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    return merged;
}

} // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms)
    : atoms_(std::move(atoms))
{
    CompensatedSum s;
    for (auto const& a : atoms_)
        s.add(a.weight);
    mass_ = s.value();
}

DiscreteMeasure DiscreteMeasure::probability(std::vector<Atom> atoms, double mass_tol)
{
    DiscreteMeasure m(canonicalize(std::move(atoms)));
    if (m.empty() || std::abs(m.mass() - 1.0) > mass_tol) {
        std::ostringstream os;
        os << "probability measure has total mass " << m.mass();
        throw InvalidMeasure(os.str());
    }
    return m;
}

DiscreteMeasure DiscreteMeasure::finite(std::vector<Atom> atoms)
{
    return DiscreteMeasure(canonicalize(std::move(atoms)));
}

double DiscreteMeasure::first_moment() const
{
    CompensatedSum s;
    for (auto const& a : atoms_)
        s.add(a.weight * a.position);
    return s.value();
}

double DiscreteMeasure::mean() const
{
    return mass_ > 0.0 ? first_moment() / mass_ : 0.0;
}

double DiscreteMeasure::variance() const
{
    double const m = mean();
    CompensatedSum s;
    for (auto const& a : atoms_)
        s.add(a.weight * (a.position - m) * (a.position - m));
    return mass_ > 0.0 ? s.value() / mass_ : 0.0;
}

std::vector<double> DiscreteMeasure::positions() const
{
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (auto const& a : atoms_)
        out.push_back(a.position);
    return out;
}

std::vector<double> DiscreteMeasure::weights() const
{
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (auto const& a : atoms_)
        out.push_back(a.weight);
    return out;
}

std::optional<std::size_t> DiscreteMeasure::index_of(double position) const
{
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), position,
                               [](Atom const& a, double p) { return a.position < p; });
    if (it == atoms_.end() || it->position != position)
        return std::nullopt;
    return static_cast<std::size_t>(it - atoms_.begin());
}

double DiscreteMeasure::weight_at(double position) const
{
    auto i = index_of(position);
    return i ? atoms_[*i].weight : 0.0;
}

DiscreteMeasure DiscreteMeasure::normalized() const
{
    if (!(mass_ > 0.0))
        throw InvalidMeasure("cannot normalize the zero measure");
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms)
        a.weight /= mass_;
    return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::restricted(Interval const& interval) const
{
    std::vector<Atom> atoms;
    for (auto const& a : atoms_)
        if (interval.contains(a.position))
            atoms.push_back(a);
    return DiscreteMeasure(std::move(atoms));
}

double potential(DiscreteMeasure const& m, double x)
{
    CompensatedSum s;
    for (auto const& a : m.atoms())
        s.add(a.weight * std::abs(x - a.position));
    return s.value();
}

std::vector<double> union_grid(DiscreteMeasure const& a, DiscreteMeasure const& b)
{
    std::vector<double> grid = a.positions();
    auto const pb = b.positions();
    grid.insert(grid.end(), pb.begin(), pb.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

OrderReport check_convex_order(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol)
{
    OrderReport report;
    report.mass_gap = mu.mass() - nu.mass();
    report.mean_gap = mu.first_moment() - nu.first_moment();

    std::vector<double> grid = union_grid(mu, nu);
    std::size_t const interior = grid.size();
    if (!grid.empty()) {
        grid.push_back(grid.front() - 1.0);
        grid.push_back(grid[interior - 1] + 1.0);
    }
    std::vector<double> umu(grid.size()), unu(grid.size());
    kernels::potentials(mu.atoms(), grid, umu);
    kernels::potentials(nu.atoms(), grid, unu);

    double worst = -std::numeric_limits<double>::infinity();
    double worst_at = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double const d = umu[k] - unu[k];
        // Points beyond the hull only matter when they strictly dominate.
        if (k < interior ? d > worst : d > worst + tol.order_tol) {
            worst = d;
            worst_at = grid[k];
        }
    }

    bool const moments_ok = std::abs(report.mass_gap) <= tol.order_tol && std::abs(report.mean_gap) <= tol.order_tol;
    bool potentials_ok = true;
    for (std::size_t k = 0; k < interior; ++k)
        if (umu[k] > unu[k] + tol.order_tol)
            potentials_ok = false;

    report.ordered = moments_ok && potentials_ok;
    if (!report.ordered && !grid.empty())
        report.witness = OrderWitness{worst_at, worst};
    return report;
}

std::vector<Interval> strict_components(DiscreteMeasure const& mu, DiscreteMeasure const& nu, double gap_tol)
{
    std::vector<double> const grid = union_grid(mu, nu);
    std::vector<double> umu(grid.size()), unu(grid.size());
    kernels::potentials(mu.atoms(), grid, umu);
    kernels::potentials(nu.atoms(), grid, unu);

    // u_nu - u_mu is piecewise linear with kinks on the grid, so it is
    // positive on a whole open grid segment iff it is positive at one of its
    // ends. Where it vanishes at a grid point the zero is that grid point.
    std::vector<Interval> out;
    std::size_t k = 0;
    while (k < grid.size()) {
        if (unu[k] - umu[k] <= gap_tol) {
            ++k;
            continue;
        }
        std::size_t const start = k;
        while (k < grid.size() && unu[k] - umu[k] > gap_tol)
            ++k;
        double const lo = start == 0 ? -std::numeric_limits<double>::infinity() : grid[start - 1];
        double const hi = k == grid.size() ? std::numeric_limits<double>::infinity() : grid[k];
        out.push_back(Interval::open(lo, hi));
    }
    return out;
}

IrreducibilityReport is_irreducible(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol)
{
    if (!check_convex_order(mu, nu, tol).ordered)
        throw NotInConvexOrder("irreducibility requires measures in convex order");
    IrreducibilityReport report;
    report.components = strict_components(mu, nu, tol.gap_tol);
    if (report.components.size() == 1) {
        report.domain = report.components.front();
        report.irreducible = std::all_of(mu.atoms().begin(), mu.atoms().end(),
                                         [&](Atom const& a) { return report.domain.contains(a.position); });
    }
    return report;
}

} // namespace mot
