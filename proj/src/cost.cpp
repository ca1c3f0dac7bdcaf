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

#include "mot/cost.hpp"

#include "mot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mot {
namespace {

std::vector<std::size_t> sort_order(std::vector<double> const& v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return order;
}

std::size_t lookup(std::vector<double> const& v, std::vector<std::size_t> const& order, double p, char axis)
{
    auto it = std::lower_bound(order.begin(), order.end(), p, [&](std::size_t i, double q) { return v[i] < q; });
    if (it == order.end() || v[*it] != p) {
        std::ostringstream os;
        os << "grid cost queried at " << axis << " = " << p << ", which is not a grid position";
        throw CostDomainError(os.str());
    }
    return *it;
}

} // namespace

CostSpec::CostSpec(Kind kind)
    : kind_(std::move(kind))
{}

CostSpec CostSpec::power(int sign, double exponent)
{
    if (sign != 1 && sign != -1)
        throw BadParameters("power cost sign must be +1 or -1");
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw BadParameters("power cost exponent must be finite and positive");
    return CostSpec(PowerCost{sign, exponent});
}

CostSpec CostSpec::grid(std::vector<double> xs, std::vector<double> ys, std::vector<double> values)
{
    if (values.size() != xs.size() * ys.size())
        throw BadParameters("grid cost dimensions do not match its positions");
    for (double v : values)
        if (!std::isfinite(v))
            throw BadParameters("grid cost values must be finite");
    auto index = std::make_shared<GridIndex>();
    index->x_order = sort_order(xs);
    index->y_order = sort_order(ys);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[index->x_order[i]] == xs[index->x_order[i - 1]])
            throw BadParameters("grid cost has duplicate row positions");
    for (std::size_t j = 1; j < ys.size(); ++j)
        if (ys[index->y_order[j]] == ys[index->y_order[j - 1]])
            throw BadParameters("grid cost has duplicate column positions");
    CostSpec c(GridCost{std::move(xs), std::move(ys), std::move(values)});
    c.index_ = std::move(index);
    return c;
}

CostSpec CostSpec::shifted(CostSpec base, PiecewiseLinear u)
{
    return CostSpec(ShiftedCost{std::make_shared<CostSpec const>(std::move(base)), std::move(u)});
}

CostSpec CostSpec::custom(std::string name, std::function<double(double, double)> fn, bool linear_growth)
{
    return CostSpec(CustomCost{std::move(name), std::move(fn), linear_growth});
}

double CostSpec::operator()(double x, double y) const
{
    switch (kind_.index()) {
    case 0: {
        auto const& p = std::get<PowerCost>(kind_);
        double const d = std::abs(x - y);
        if (p.exponent == 1.0)
            return p.sign * d;
        if (p.exponent == 2.0)
            return p.sign * d * d;
        return p.sign * std::pow(d, p.exponent);
    }
    case 1: {
        auto const& g = std::get<GridCost>(kind_);
        std::size_t const i = lookup(g.xs, index_->x_order, x, 'x');
        std::size_t const j = lookup(g.ys, index_->y_order, y, 'y');
        return g.values[i * g.ys.size() + j];
    }
    case 2: {
        auto const& s = std::get<ShiftedCost>(kind_);
        return (*s.base)(x, y) + s.u(y);
    }
    default:
        return std::get<CustomCost>(kind_).fn(x, y);
    }
}

bool CostSpec::defined_on_line() const
{
    if (std::holds_alternative<GridCost>(kind_))
        return false;
    if (auto const* s = std::get_if<ShiftedCost>(&kind_))
        return s->base->defined_on_line();
    return true;
}

bool CostSpec::linear_growth() const
{
    if (auto const* p = std::get_if<PowerCost>(&kind_))
        return p->sign < 0 || p->exponent <= 1.0;
    if (auto const* s = std::get_if<ShiftedCost>(&kind_))
        return s->base->linear_growth();
    if (auto const* c = std::get_if<CustomCost>(&kind_))
        return c->linear_growth;
    return true;
}

std::string CostSpec::describe() const
{
    std::ostringstream os;
    if (auto const* p = std::get_if<PowerCost>(&kind_)) {
        os << (p->sign < 0 ? "-" : "") << "|x-y|^" << p->exponent;
    } else if (auto const* g = std::get_if<GridCost>(&kind_)) {
        os << "grid " << g->xs.size() << "x" << g->ys.size();
    } else if (auto const* s = std::get_if<ShiftedCost>(&kind_)) {
        os << s->base->describe() << " + u(y) [" << s->u.knots().size() << " knots]";
    } else {
        os << std::get<CustomCost>(kind_).name;
    }
    return os.str();
}

CostSpec CostSpec::materialize(std::span<double const> xs, std::span<double const> ys) const
{
    std::vector<double> values;
    values.reserve(xs.size() * ys.size());
    for (double x : xs)
        for (double y : ys)
            values.push_back((*this)(x, y));
    return grid({xs.begin(), xs.end()}, {ys.begin(), ys.end()}, std::move(values));
}

} // namespace mot
