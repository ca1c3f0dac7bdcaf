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

// End-to-end dual construction: decompose, solve each irreducible
// component, normalize, glue, and verify against the full primal.

#include "mot/cost.hpp"
#include "mot/decomposition.hpp"
#include "mot/dual.hpp"
#include "mot/measures.hpp"
#include "mot/primal.hpp"
#include "mot/tolerances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mot {

struct SolveOptions
{
    Tolerances tol;
    bool exact = false;
    int grid_refine = 0;
    bool allow_fallback = true; // use the full-instance LP dual when gluing fails
};

struct ComponentReport
{
    Interval interval;
    double primal_value = 0.0;
    AffineGauge chord;
    std::optional<ShapeViolation> shape_violation;
    std::optional<std::string> failure; // set when the component LP could not be used
};

struct DualSolution
{
    OrderReport order;
    ComponentDecomposition decomposition;
    PrimalSolution primal;
    DualTriple triple;
    std::vector<ComponentReport> components;
    std::optional<GlueViolation> glue_violation;
    std::string method; // "glued" or "direct"
    DualityReport report;

    bool verified(Tolerances const& tol) const;
};

/// Throws Infeasible when mu and nu are not in convex order.
DualSolution solve_dual(DiscreteMeasure const& mu, DiscreteMeasure const& nu, CostSpec const& cost,
                        SolveOptions const& options = {});

} // namespace mot
