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

#include "mot/piecewise_linear.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mot {

class CostSpec;

/// c(x,y) = sign * |x - y|^exponent
struct PowerCost
{
    int sign = 1;
    double exponent = 1.0;
};

/// Explicit values on supp(mu) x supp(nu). Rows follow `xs`, columns `ys`;
/// the positions may be given in any order.
struct GridCost
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values; // row-major, xs.size() x ys.size()
};

/// c(x,y) + u(y)
struct ShiftedCost
{
    std::shared_ptr<CostSpec const> base;
    PiecewiseLinear u;
};

/// Arbitrary cost used by the generators. Not serializable as such.
struct CustomCost
{
    std::string name;
    std::function<double(double, double)> fn;
    bool linear_growth = false;
};

class CostSpec
{
public:
    using Kind = std::variant<PowerCost, GridCost, ShiftedCost, CustomCost>;

    CostSpec() = default;

    static CostSpec power(int sign, double exponent);
    static CostSpec grid(std::vector<double> xs, std::vector<double> ys, std::vector<double> values);
    static CostSpec shifted(CostSpec base, PiecewiseLinear u);
    static CostSpec custom(std::string name, std::function<double(double, double)> fn,
                           bool linear_growth = false);

    /// Throws CostDomainError for a grid cost queried off its grid.
    double operator()(double x, double y) const;

    Kind const& kind() const { return kind_; }

    /// False when the cost is only known on a finite grid of (x, y) pairs.
    bool defined_on_line() const;

    /// True when y -> c(x,y) is bounded above by an affine function.
    bool linear_growth() const;

    std::string describe() const;

    /// Grid cost on the given positions holding this cost's values.
    CostSpec materialize(std::span<double const> xs, std::span<double const> ys) const;

private:
    explicit CostSpec(Kind kind);

    struct GridIndex
    {
        std::vector<std::size_t> x_order;
        std::vector<std::size_t> y_order;
    };

    Kind kind_ = PowerCost{};
    std::shared_ptr<GridIndex const> index_;
};

} // namespace mot
