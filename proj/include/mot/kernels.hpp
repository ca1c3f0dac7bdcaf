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

// Data-parallel inner loops of the library. Every kernel exists twice: a
// plain serial reference used by the tests, and an OpenMP version used by
// the library. Both must produce identical results.

#include "mot/cost.hpp"
#include "mot/measures.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mot::kernels {

/// Affine-plus-cost functions v_x(y) = f(x) + h(x)(y - x) + c(x, y).
struct AffineFamily
{
    std::span<double const> x;
    std::span<double const> f;
    std::span<double const> h;
};

struct Envelope
{
    std::vector<double> value;
    std::vector<std::size_t> argmin; // index into the family; first minimizer wins
};

/// Location and size of the largest g(y) - v_x(y) over a cross grid.
struct ResidualMax
{
    double value = 0.0;
    std::size_t x_index = 0;
    std::size_t y_index = 0;
};

namespace serial {

void potentials(std::span<Atom const> atoms, std::span<double const> points, std::span<double> out);
Envelope lower_envelope(AffineFamily family, CostSpec const& cost, std::span<double const> grid);
ResidualMax max_residual(AffineFamily family, CostSpec const& cost, std::span<double const> grid,
                         std::span<double const> g);

} // namespace serial

namespace parallel {

void potentials(std::span<Atom const> atoms, std::span<double const> points, std::span<double> out);
Envelope lower_envelope(AffineFamily family, CostSpec const& cost, std::span<double const> grid);
ResidualMax max_residual(AffineFamily family, CostSpec const& cost, std::span<double const> grid,
                         std::span<double const> g);

} // namespace parallel

using parallel::lower_envelope;
using parallel::max_residual;
using parallel::potentials;

int max_threads();

} // namespace mot::kernels
