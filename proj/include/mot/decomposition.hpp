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

#include "mot/measures.hpp"
#include "mot/tolerances.hpp"

#include <vector>

namespace mot {

/// Irreducible piece (mu_k, nu_k) living on the open interval I_k.
struct Component
{
    Interval interval;
    DiscreteMeasure mu;
    DiscreteMeasure nu;
};

/// mu = sum_k mu_k + diagonal and nu = sum_k nu_k + diagonal.
struct ComponentDecomposition
{
    std::vector<Component> components;
    DiscreteMeasure diagonal;

    /// 0 for the diagonal part, k >= 1 for components[k - 1].
    int component_of(double x) const;
};

struct EndpointSplit
{
    double lo = 0.0;
    double hi = 0.0;
};

/// Masses to place at the ends of a bounded interval so that the part of
/// nu strictly inside it, plus the endpoint masses, has the target mass
/// and mean. Throws InconsistentSplit when a mass would be negative.
EndpointSplit endpoint_split(DiscreteMeasure const& nu, Interval const& interval, double target_mass,
                             double target_mean, double tol = 1e-9);

/// Splits a convex-ordered pair into irreducible components and a common
/// diagonal part. Throws NotInConvexOrder or InconsistentSplit.
ComponentDecomposition decompose(DiscreteMeasure const& mu, DiscreteMeasure const& nu, Tolerances const& tol = {});

} // namespace mot
