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

#include <span>
#include <utility>
#include <vector>

namespace mot {

struct Knot
{
    double y;
    double value;
};

/// Continuous piecewise-linear function through sorted knots, extended
/// linearly beyond the outer knots (constant when only one knot exists).
class PiecewiseLinear
{
public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<Knot> knots);

    /// Interpolates fn at the given sorted, distinct points.
    template <class Fn>
    static PiecewiseLinear sample(std::span<double const> ys, Fn&& fn)
    {
        std::vector<Knot> knots;
        knots.reserve(ys.size());
        for (double y : ys)
            knots.push_back({y, fn(y)});
        return PiecewiseLinear(std::move(knots));
    }

    double operator()(double y) const;

    std::span<Knot const> knots() const { return knots_; }
    bool empty() const { return knots_.empty(); }

    /// Largest absolute slope between consecutive knots.
    double lipschitz() const;

private:
    std::vector<Knot> knots_;
};

} // namespace mot
