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

// JSON and CSV formats of the command line tool. Every file carries
// "format": 1; unknown fields are rejected.

#include "mot/cost.hpp"
#include "mot/dual.hpp"
#include "mot/measures.hpp"
#include "mot/primal.hpp"
#include "mot/tolerances.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mot::io {

using nlohmann::json;

inline constexpr int format_version = 1;

/// Malformed input; maps to exit code 2.
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions
{
    Tolerances tol;
    int grid_refine = 0;
    bool exact = false;
};

struct Instance
{
    DiscreteMeasure mu;
    DiscreteMeasure nu;
    CostSpec cost;
    RunOptions options;
};

Instance parse_instance(json const& doc);
json instance_to_json(Instance const& instance);

/// Applies {"name": value, ...} to tol. Throws ParseError on unknown names.
void apply_tolerances(Tolerances& tol, json const& overrides);
json tolerances_to_json(Tolerances const& tol);

json cost_to_json(CostSpec const& cost);
CostSpec parse_cost(json const& doc, DiscreteMeasure const& mu, DiscreteMeasure const& nu);

json measure_to_json(DiscreteMeasure const& m);
std::vector<Knot> parse_knots(json const& doc);

json triple_to_json(DualTriple const& t);
DualTriple parse_triple(json const& doc);

/// Sparse list of [i, j, pi] for the nonzero entries.
json coupling_to_json(Coupling const& c);
Coupling parse_coupling(json const& doc, std::size_t rows, std::size_t cols);

json load_json(std::filesystem::path const& path);
void save_json(std::filesystem::path const& path, json const& doc);

/// Shortest decimal string that reads back to the same double.
std::string shortest(double v);

void write_potentials_csv(std::filesystem::path const& path, DiscreteMeasure const& mu, DiscreteMeasure const& nu);
void write_dual_csv(std::filesystem::path const& path, DualTriple const& t);
void write_coupling_csv(std::filesystem::path const& path, Coupling const& c, DiscreteMeasure const& mu,
                        DiscreteMeasure const& nu);

} // namespace mot::io
