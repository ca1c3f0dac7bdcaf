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

#include "mot/piecewise_linear.hpp"

#include "mot/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mot {

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots)
    : knots_(std::move(knots))
{
    std::sort(knots_.begin(), knots_.end(), [](Knot const& a, Knot const& b) { return a.y < b.y; });
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].y > knots_[i - 1].y))
            throw BadParameters("piecewise-linear knots must have distinct abscissae");
    for (auto const& k : knots_)
        if (!std::isfinite(k.y) || !std::isfinite(k.value))
            throw BadParameters("piecewise-linear knots must be finite");
}

double PiecewiseLinear::operator()(double y) const
{
    if (knots_.empty())
        return 0.0;
    if (knots_.size() == 1)
        return knots_.front().value;

    auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                               [](double v, Knot const& k) { return v < k.y; });
    std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    if (hi == 0)
        hi = 1;
    if (hi == knots_.size())
        hi = knots_.size() - 1;
    Knot const& a = knots_[hi - 1];
    Knot const& b = knots_[hi];
    if (y == a.y)
        return a.value;
    if (y == b.y)
        return b.value;
    double const t = (y - a.y) / (b.y - a.y);
    return a.value + t * (b.value - a.value);
}

double PiecewiseLinear::lipschitz() const
{
    double lip = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        lip = std::max(lip, std::abs(knots_[i].value - knots_[i - 1].value) / (knots_[i].y - knots_[i - 1].y));
    return lip;
}

} // namespace mot
