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

#include "mot/kernels.hpp"

#include "mot/numeric.hpp"

#include <cmath>
#include <exception>
#include <limits>

#ifdef MOT_HAVE_OPENMP
#include <omp.h>
#endif

namespace mot::kernels {
namespace {

inline double potential_at(std::span<Atom const> atoms, double x)
{
    CompensatedSum s;
    for (auto const& a : atoms)
        s.add(a.weight * std::abs(x - a.position));
    return s.value();
}

inline double family_value(AffineFamily const& fam, CostSpec const& cost, std::size_t i, double y)
{
    return fam.f[i] + fam.h[i] * (y - fam.x[i]) + cost(fam.x[i], y);
}

inline void envelope_point(AffineFamily const& fam, CostSpec const& cost, double y, double& value,
                           std::size_t& arg)
{
    value = std::numeric_limits<double>::infinity();
    arg = 0;
    for (std::size_t i = 0; i < fam.x.size(); ++i) {
        double const v = family_value(fam, cost, i, y);
        if (v < value) {
            value = v;
            arg = i;
        }
    }
}

// Ties are resolved towards the smallest (x, y) index pair so that the
// serial and parallel versions agree exactly.
inline bool better(ResidualMax const& a, ResidualMax const& b)
{
    if (a.value != b.value)
        return a.value > b.value;
    if (a.x_index != b.x_index)
        return a.x_index < b.x_index;
    return a.y_index < b.y_index;
}

inline ResidualMax residual_row(AffineFamily const& fam, CostSpec const& cost, std::span<double const> grid,
                                std::span<double const> g, std::size_t i)
{
    ResidualMax best{-std::numeric_limits<double>::infinity(), i, 0};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double const r = g[k] - family_value(fam, cost, i, grid[k]);
        if (r > best.value) {
            best.value = r;
            best.y_index = k;
        }
    }
    return best;
}

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class ExceptionSlot
{
public:
    template <class Fn>
    void run(Fn&& fn)
    {
        try {
            fn();
        } catch (...) {
#pragma omp critical(mot_kernel_exception)
            if (!error_)
                error_ = std::current_exception();
        }
    }

    void rethrow() const
    {
        if (error_)
            std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

} // namespace

namespace serial {

void potentials(std::span<Atom const> atoms, std::span<double const> points, std::span<double> out)
{
    for (std::size_t k = 0; k < points.size(); ++k)
        out[k] = potential_at(atoms, points[k]);
}

Envelope lower_envelope(AffineFamily family, CostSpec const& cost, std::span<double const> grid)
{
    Envelope env{std::vector<double>(grid.size()), std::vector<std::size_t>(grid.size())};
    for (std::size_t k = 0; k < grid.size(); ++k)
        envelope_point(family, cost, grid[k], env.value[k], env.argmin[k]);
    return env;
}

ResidualMax max_residual(AffineFamily family, CostSpec const& cost, std::span<double const> grid,
                         std::span<double const> g)
{
    ResidualMax best{-std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t i = 0; i < family.x.size(); ++i) {
        ResidualMax const row = residual_row(family, cost, grid, g, i);
        if (better(row, best))
            best = row;
    }
    return best;
}

} // namespace serial

namespace parallel {

void potentials(std::span<Atom const> atoms, std::span<double const> points, std::span<double> out)
{
    auto const n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        out[k] = potential_at(atoms, points[k]);
}

Envelope lower_envelope(AffineFamily family, CostSpec const& cost, std::span<double const> grid)
{
    Envelope env{std::vector<double>(grid.size()), std::vector<std::size_t>(grid.size())};
    auto const n = static_cast<std::ptrdiff_t>(grid.size());
    ExceptionSlot slot;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        slot.run([&] { envelope_point(family, cost, grid[k], env.value[k], env.argmin[k]); });
    slot.rethrow();
    return env;
}

ResidualMax max_residual(AffineFamily family, CostSpec const& cost, std::span<double const> grid,
                         std::span<double const> g)
{
    auto const n = static_cast<std::ptrdiff_t>(family.x.size());
    std::vector<ResidualMax> rows(family.x.size());
    ExceptionSlot slot;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        slot.run([&] { rows[i] = residual_row(family, cost, grid, g, static_cast<std::size_t>(i)); });
    slot.rethrow();

    ResidualMax best{-std::numeric_limits<double>::infinity(), 0, 0};
    for (auto const& row : rows)
        if (better(row, best))
            best = row;
    return best;
}

} // namespace parallel

int max_threads()
{
#ifdef MOT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace mot::kernels
