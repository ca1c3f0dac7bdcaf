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

#include "mot/decomposition.hpp"

#include "mot/errors.hpp"
#include "mot/numeric.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace mot {

int ComponentDecomposition::component_of(double x) const
{
    for (std::size_t k = 0; k < components.size(); ++k)
        if (components[k].interval.contains(x))
            return static_cast<int>(k) + 1;
    return 0;
}

EndpointSplit endpoint_split(DiscreteMeasure const& nu, Interval const& interval, double target_mass,
                             double target_mean, double tol)
{
    if (!interval.bounded())
        throw InconsistentSplit("endpoint split needs a bounded interval");
    if (!(target_mass > 0.0))
        throw InconsistentSplit("endpoint split needs a positive target mass");

    DiscreteMeasure const inner = nu.restricted(Interval::open(interval.lo, interval.hi));
    double const mass = target_mass - inner.mass();
    double const moment = target_mean * target_mass - inner.first_moment();
    double const width = interval.hi - interval.lo;

    EndpointSplit split;
    split.hi = (moment - interval.lo * mass) / width;
    split.lo = mass - split.hi;

    double const scale = std::max(1.0, target_mass);
    if (split.lo < -tol * scale || split.hi < -tol * scale) {
        std::ostringstream os;
        os << "endpoint masses (" << split.lo << ", " << split.hi << ") on ]" << interval.lo << ", "
           << interval.hi << "[ are negative";
        throw InconsistentSplit(os.str());
    }
    split.lo = std::max(split.lo, 0.0);
    split.hi = std::max(split.hi, 0.0);
    return split;
}

ComponentDecomposition decompose(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol)
{
    if (!check_convex_order(mu, nu, tol).ordered)
        throw NotInConvexOrder("decomposition requires measures in convex order");

    std::vector<Interval> const intervals = strict_components(mu, nu, tol.gap_tol);

    // Mass of nu still unclaimed, atom by atom.
    std::vector<Atom> remaining(nu.atoms().begin(), nu.atoms().end());
    auto claim = [&](double position, double amount, Interval const& interval) {
        if (amount <= 0.0)
            return;
        auto idx = nu.index_of(position);
        double const available = idx ? remaining[*idx].weight : 0.0;
        if (amount > available + tol.split_tol) {
            std::ostringstream os;
            os << "component ]" << interval.lo << ", " << interval.hi << "[ claims " << amount
               << " at " << position << " but only " << available << " is available";
            throw InconsistentSplit(os.str());
        }
        remaining[*idx].weight = std::max(0.0, available - amount);
    };

    ComponentDecomposition out;
    for (Interval const& interval : intervals) {
        assert(interval.lo < interval.hi);
        if (!interval.bounded())
            throw InconsistentSplit("unbounded component in a discrete decomposition");

        Component comp;
        comp.interval = interval;
        comp.mu = mu.restricted(interval);
        if (comp.mu.empty())
            throw InconsistentSplit("component carries no mass of mu");

        EndpointSplit const split = endpoint_split(nu, interval, comp.mu.mass(), comp.mu.mean(), tol.split_tol);
        std::vector<Atom> atoms;
        for (auto const& a : nu.atoms())
            if (interval.contains(a.position)) {
                atoms.push_back(a);
                claim(a.position, a.weight, interval);
            }
        claim(interval.lo, split.lo, interval);
        claim(interval.hi, split.hi, interval);
        if (split.lo > 0.0)
            atoms.push_back({interval.lo, split.lo});
        if (split.hi > 0.0)
            atoms.push_back({interval.hi, split.hi});
        comp.nu = DiscreteMeasure::finite(std::move(atoms));
        out.components.push_back(std::move(comp));
    }

    std::vector<Atom> diag_mu;
    for (auto const& a : mu.atoms())
        if (out.component_of(a.position) == 0)
            diag_mu.push_back(a);
    out.diagonal = DiscreteMeasure::finite(diag_mu);

    // What is left of nu must coincide with the diagonal part of mu.
    for (auto const& a : remaining) {
        double const expected = out.diagonal.weight_at(a.position);
        if (std::abs(a.weight - expected) > tol.split_tol) {
            std::ostringstream os;
            os << "leftover nu mass " << a.weight << " at " << a.position << " differs from diagonal mu mass "
               << expected;
            throw InconsistentSplit(os.str());
        }
    }
    for (auto const& a : out.diagonal.atoms())
        if (!nu.index_of(a.position))
            throw InconsistentSplit("diagonal mu atom has no matching nu atom");
    return out;
}

} // namespace mot
