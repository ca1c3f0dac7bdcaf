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

#include "io.hpp"

#include "mot/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace mot::io {
namespace {

[[noreturn]] void fail(std::string const& what) { throw ParseError(what); }

void only_keys(json const& obj, std::initializer_list<char const*> allowed, char const* where)
{
    if (!obj.is_object())
        fail(std::string(where) + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (char const* k : allowed)
            known = known || it.key() == k;
        if (!known)
            fail(std::string("unknown field '") + it.key() + "' in " + where);
    }
}

json const& required(json const& obj, char const* key, char const* where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        fail(std::string("missing field '") + key + "' in " + where);
    return *it;
}

double number(json const& v, char const* where)
{
    if (!v.is_number())
        fail(std::string(where) + " must be a number");
    return v.get<double>();
}

std::vector<double> numbers(json const& v, char const* where)
{
    if (!v.is_array())
        fail(std::string(where) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (auto const& e : v)
        out.push_back(number(e, where));
    return out;
}

std::vector<std::pair<double, double>> pairs(json const& v, char const* where)
{
    if (!v.is_array())
        fail(std::string(where) + " must be an array of [a, b] pairs");
    std::vector<std::pair<double, double>> out;
    for (auto const& e : v) {
        if (!e.is_array() || e.size() != 2)
            fail(std::string(where) + " entries must be [a, b] pairs");
        out.emplace_back(number(e[0], where), number(e[1], where));
    }
    return out;
}

DiscreteMeasure parse_measure(json const& v, char const* where, double mass_tol)
{
    std::vector<Atom> atoms;
    for (auto [p, w] : pairs(v, where))
        atoms.push_back({p, w});
    try {
        return DiscreteMeasure::probability(std::move(atoms), mass_tol);
    } catch (Error const& e) {
        fail(std::string(where) + ": " + e.what());
    }
}

void check_format(json const& doc, char const* where)
{
    json const& f = required(doc, "format", where);
    if (!f.is_number_integer() || f.get<int>() != format_version)
        fail(std::string(where) + ": unsupported format, expected 1");
}

template <class Fn>
void write_csv(std::filesystem::path const& path, char const* header, Fn&& rows)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write " + path.string());
    os << header << '\n';
    rows(os);
}

} // namespace

std::string shortest(double v)
{
    if (v == 0.0)
        v = 0.0; // no "-0" in output
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void apply_tolerances(Tolerances& tol, json const& overrides)
{
    if (!overrides.is_object())
        fail("tolerances must be an object");
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
        std::string const& k = it.key();
        double const v = number(it.value(), "tolerance value");
        if (!(v >= 0.0))
            fail("tolerance '" + k + "' must be nonnegative");
        if (k == "mass_tol") tol.mass_tol = v;
        else if (k == "order_tol") tol.order_tol = v;
        else if (k == "gap_tol") tol.gap_tol = v;
        else if (k == "eq_tol") tol.eq_tol = v;
        else if (k == "viol_tol") tol.viol_tol = v;
        else if (k == "supp_tol") tol.supp_tol = v;
        else if (k == "conv_tol") tol.conv_tol = v;
        else if (k == "lp_tol") tol.lp_tol = v;
        else if (k == "coupling_tol") tol.coupling_tol = v;
        else if (k == "split_tol") tol.split_tol = v;
        else if (k == "duality_tol") tol.duality_tol = v;
        else fail("unknown tolerance '" + k + "'");
    }
}

json tolerances_to_json(Tolerances const& tol)
{
    return {{"mass_tol", tol.mass_tol},     {"order_tol", tol.order_tol},       {"gap_tol", tol.gap_tol},
            {"eq_tol", tol.eq_tol},         {"viol_tol", tol.viol_tol},         {"supp_tol", tol.supp_tol},
            {"conv_tol", tol.conv_tol},     {"lp_tol", tol.lp_tol},             {"coupling_tol", tol.coupling_tol},
            {"split_tol", tol.split_tol},   {"duality_tol", tol.duality_tol}};
}

json measure_to_json(DiscreteMeasure const& m)
{
    json out = json::array();
    for (Atom const& a : m.atoms())
        out.push_back({a.position, a.weight});
    return out;
}

std::vector<Knot> parse_knots(json const& doc)
{
    std::vector<Knot> knots;
    for (auto [y, v] : pairs(doc, "u_knots"))
        knots.push_back({y, v});
    if (knots.empty())
        fail("u_knots must not be empty");
    return knots;
}

CostSpec parse_cost(json const& doc, DiscreteMeasure const& mu, DiscreteMeasure const& nu)
{
    if (!doc.is_object() || doc.size() != 1)
        fail("cost must be an object with exactly one of power, grid, shifted");
    try {
        if (auto it = doc.find("power"); it != doc.end()) {
            only_keys(*it, {"sign", "exponent"}, "cost.power");
            json const& s = required(*it, "sign", "cost.power");
            if (!s.is_number_integer())
                fail("cost.power.sign must be +1 or -1");
            return CostSpec::power(s.get<int>(), number(required(*it, "exponent", "cost.power"), "exponent"));
        }
        if (auto it = doc.find("grid"); it != doc.end()) {
            only_keys(*it, {"values"}, "cost.grid");
            json const& rows = required(*it, "values", "cost.grid");
            if (!rows.is_array() || rows.size() != mu.size())
                fail("cost.grid.values needs one row per atom of mu");
            std::vector<double> values;
            for (auto const& row : rows) {
                std::vector<double> r = numbers(row, "cost.grid.values row");
                if (r.size() != nu.size())
                    fail("cost.grid.values rows need one entry per atom of nu");
                values.insert(values.end(), r.begin(), r.end());
            }
            return CostSpec::grid(mu.positions(), nu.positions(), std::move(values));
        }
        if (auto it = doc.find("shifted"); it != doc.end()) {
            only_keys(*it, {"base", "u_knots"}, "cost.shifted");
            CostSpec base = parse_cost(required(*it, "base", "cost.shifted"), mu, nu);
            return CostSpec::shifted(std::move(base),
                                     PiecewiseLinear(parse_knots(required(*it, "u_knots", "cost.shifted"))));
        }
    } catch (BadParameters const& e) {
        fail(std::string("cost: ") + e.what());
    } catch (InvalidMeasure const& e) {
        fail(std::string("cost: ") + e.what());
    }
    fail("cost must be one of power, grid, shifted");
}

json cost_to_json(CostSpec const& cost)
{
    if (auto const* p = std::get_if<PowerCost>(&cost.kind()))
        return {{"power", {{"sign", p->sign}, {"exponent", p->exponent}}}};
    if (auto const* g = std::get_if<GridCost>(&cost.kind())) {
        // Rows and columns follow the sorted positions.
        std::vector<double> xs = g->xs, ys = g->ys;
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        json rows = json::array();
        for (double x : xs) {
            json row = json::array();
            for (double y : ys)
                row.push_back(cost(x, y));
            rows.push_back(std::move(row));
        }
        return {{"grid", {{"values", std::move(rows)}}}};
    }
    if (auto const* s = std::get_if<ShiftedCost>(&cost.kind())) {
        json knots = json::array();
        for (Knot const& k : s->u.knots())
            knots.push_back({k.y, k.value});
        return {{"shifted", {{"base", cost_to_json(*s->base)}, {"u_knots", std::move(knots)}}}};
    }
    throw Error("cost '" + cost.describe() + "' has no file representation; materialize it first");
}

Instance parse_instance(json const& doc)
{
    only_keys(doc, {"format", "mu", "nu", "cost", "options"}, "instance");
    check_format(doc, "instance");
    Instance inst;
    if (auto it = doc.find("options"); it != doc.end()) {
        only_keys(*it, {"tolerances", "grid_refine", "exact_mode"}, "options");
        if (auto t = it->find("tolerances"); t != it->end())
            apply_tolerances(inst.options.tol, *t);
        if (auto g = it->find("grid_refine"); g != it->end()) {
            if (!g->is_number_integer() || g->get<int>() < 0)
                fail("options.grid_refine must be a nonnegative integer");
            inst.options.grid_refine = g->get<int>();
        }
        if (auto e = it->find("exact_mode"); e != it->end()) {
            if (!e->is_boolean())
                fail("options.exact_mode must be a boolean");
            inst.options.exact = e->get<bool>();
        }
    }
    inst.mu = parse_measure(required(doc, "mu", "instance"), "mu", inst.options.tol.mass_tol);
    inst.nu = parse_measure(required(doc, "nu", "instance"), "nu", inst.options.tol.mass_tol);
    inst.cost = parse_cost(required(doc, "cost", "instance"), inst.mu, inst.nu);
    return inst;
}

json instance_to_json(Instance const& inst)
{
    json options = {{"tolerances", tolerances_to_json(inst.options.tol)},
                    {"grid_refine", inst.options.grid_refine},
                    {"exact_mode", inst.options.exact}};
    return {{"format", format_version},
            {"mu", measure_to_json(inst.mu)},
            {"nu", measure_to_json(inst.nu)},
            {"cost", cost_to_json(inst.cost)},
            {"options", std::move(options)}};
}

json triple_to_json(DualTriple const& t)
{
    json norm = json::array();
    for (AffineGauge const& a : t.normalization)
        norm.push_back({{"intercept", a.intercept}, {"slope", a.slope}});
    return {{"x", t.x}, {"f", t.f}, {"h", t.h}, {"grid", t.grid}, {"g", t.g}, {"component", t.component},
            {"normalization", std::move(norm)}};
}

DualTriple parse_triple(json const& doc)
{
    only_keys(doc, {"x", "f", "h", "grid", "g", "component", "normalization"}, "dual");
    DualTriple t;
    t.x = numbers(required(doc, "x", "dual"), "dual.x");
    t.f = numbers(required(doc, "f", "dual"), "dual.f");
    t.h = numbers(required(doc, "h", "dual"), "dual.h");
    t.grid = numbers(required(doc, "grid", "dual"), "dual.grid");
    t.g = numbers(required(doc, "g", "dual"), "dual.g");
    if (t.f.size() != t.x.size() || t.h.size() != t.x.size() || t.g.size() != t.grid.size())
        fail("dual arrays have inconsistent lengths");
    if (!std::is_sorted(t.grid.begin(), t.grid.end()) ||
        std::adjacent_find(t.grid.begin(), t.grid.end()) != t.grid.end())
        fail("dual.grid must be strictly increasing");
    if (auto it = doc.find("component"); it != doc.end()) {
        if (!it->is_array() || it->size() != t.x.size())
            fail("dual.component needs one entry per atom");
        for (auto const& c : *it) {
            if (!c.is_number_integer())
                fail("dual.component entries must be integers");
            t.component.push_back(c.get<int>());
        }
    } else {
        t.component.assign(t.x.size(), 0);
    }
    if (auto it = doc.find("normalization"); it != doc.end()) {
        if (!it->is_array())
            fail("dual.normalization must be an array");
        for (auto const& a : *it) {
            only_keys(a, {"intercept", "slope"}, "dual.normalization");
            t.normalization.push_back({number(required(a, "intercept", "normalization"), "intercept"),
                                       number(required(a, "slope", "normalization"), "slope")});
        }
    }
    return t;
}

json coupling_to_json(Coupling const& c)
{
    json out = json::array();
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j)
            if (c(i, j) != 0.0)
                out.push_back({i, j, c(i, j)});
    return out;
}

Coupling parse_coupling(json const& doc, std::size_t rows, std::size_t cols)
{
    if (!doc.is_array())
        fail("coupling must be an array of [i, j, pi]");
    Coupling c{rows, cols, std::vector<double>(rows * cols, 0.0)};
    for (auto const& e : doc) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
            fail("coupling entries must be [i, j, pi]");
        std::size_t const i = e[0].get<std::size_t>(), j = e[1].get<std::size_t>();
        if (i >= rows || j >= cols)
            fail("coupling index out of range");
        c(i, j) = number(e[2], "coupling pi");
    }
    return c;
}

json load_json(std::filesystem::path const& path)
{
    std::ifstream is(path);
    if (!is)
        fail("cannot open " + path.string());
    try {
        return json::parse(is);
    } catch (json::parse_error const& e) {
        fail(path.string() + ": " + e.what());
    }
}

void save_json(std::filesystem::path const& path, json const& doc)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write " + path.string());
    os << doc.dump(2) << '\n';
}

void write_potentials_csv(std::filesystem::path const& path, DiscreteMeasure const& mu, DiscreteMeasure const& nu)
{
    write_csv(path, "x,u_mu,u_nu", [&](std::ostream& os) {
        for (double x : union_grid(mu, nu))
            os << shortest(x) << ',' << shortest(potential(mu, x)) << ',' << shortest(potential(nu, x)) << '\n';
    });
}

void write_dual_csv(std::filesystem::path const& path, DualTriple const& t)
{
    std::vector<double> points = t.grid;
    points.insert(points.end(), t.x.begin(), t.x.end());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    write_csv(path, "y,f,g,h", [&](std::ostream& os) {
        for (double y : points) {
            auto xi = std::lower_bound(t.x.begin(), t.x.end(), y);
            bool const atom = xi != t.x.end() && *xi == y;
            std::size_t const i = static_cast<std::size_t>(xi - t.x.begin());
            auto k = t.grid_index(y);
            os << shortest(y) << ',' << (atom ? shortest(t.f[i]) : "") << ',' << (k ? shortest(t.g[*k]) : "")
               << ',' << (atom ? shortest(t.h[i]) : "") << '\n';
        }
    });
}

void write_coupling_csv(std::filesystem::path const& path, Coupling const& c, DiscreteMeasure const& mu,
                        DiscreteMeasure const& nu)
{
    write_csv(path, "i,j,x,y,pi", [&](std::ostream& os) {
        for (std::size_t i = 0; i < c.rows; ++i)
            for (std::size_t j = 0; j < c.cols; ++j)
                if (c(i, j) != 0.0)
                    os << i << ',' << j << ',' << shortest(mu[i].position) << ',' << shortest(nu[j].position) << ','
                       << shortest(c(i, j)) << '\n';
    });
}

} // namespace mot::io
