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

#include "cli.hpp"

#include "io.hpp"

#include "mot/counterexamples.hpp"
#include "mot/decomposition.hpp"
#include "mot/errors.hpp"
#include "mot/pipeline.hpp"
#include "mot/regularity.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mot::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

constexpr int exit_ok = 0;
constexpr int exit_internal = 1;
constexpr int exit_parse = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_verification = 4;

struct Common
{
    std::string input;
    std::vector<std::string> tol;
    std::optional<int> grid_refine;
    bool exact = false;
    std::string csv_out;
    std::string out;
};

class Clock
{
public:
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// defaults < file options < MOT_TOL_OVERRIDES < flags
io::RunOptions resolve_options(io::RunOptions opts, Common const& c)
{
    if (char const* env = std::getenv("MOT_TOL_OVERRIDES"); env && *env) {
        json doc;
        try {
            doc = json::parse(env);
        } catch (json::parse_error const& e) {
            throw io::ParseError(std::string("MOT_TOL_OVERRIDES: ") + e.what());
        }
        io::apply_tolerances(opts.tol, doc);
    }
    for (std::string const& kv : c.tol) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw io::ParseError("--tol expects name=value, got '" + kv + "'");
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1)
                throw std::invalid_argument(kv);
        } catch (std::logic_error const&) {
            throw io::ParseError("--tol value is not a number: '" + kv + "'");
        }
        io::apply_tolerances(opts.tol, json{{kv.substr(0, eq), v}});
    }
    if (c.grid_refine) {
        if (*c.grid_refine < 0)
            throw io::ParseError("--grid-refine must be nonnegative");
        opts.grid_refine = *c.grid_refine;
    }
    opts.exact = opts.exact || c.exact;
    return opts;
}

io::Instance load_instance(Common const& c)
{
    io::Instance inst = io::parse_instance(io::load_json(c.input));
    inst.options = resolve_options(inst.options, c);
    return inst;
}

json order_json(OrderReport const& r)
{
    json out = {{"ordered", r.ordered}, {"mass_gap", r.mass_gap}, {"mean_gap", r.mean_gap}, {"witness", nullptr}};
    if (r.witness)
        out["witness"] = {{"point", r.witness->point}, {"deficit", r.witness->deficit}};
    return out;
}

json interval_json(Interval const& I) { return json::array({I.lo, I.hi}); }

json decomposition_json(ComponentDecomposition const& d)
{
    json comps = json::array();
    for (Component const& c : d.components)
        comps.push_back({{"interval", interval_json(c.interval)},
                         {"mass", c.mu.mass()},
                         {"mean", c.mu.mean()},
                         {"mu", io::measure_to_json(c.mu)},
                         {"nu", io::measure_to_json(c.nu)}});
    return {{"count", d.components.size()},
            {"components", std::move(comps)},
            {"diagonal", io::measure_to_json(d.diagonal)},
            {"diagonal_mass", d.diagonal.mass()}};
}

json duality_json(DualityReport const& r)
{
    return {{"primal_value", r.primal_value},
            {"dual_value", r.dual_value},
            {"gap", r.gap},
            {"max_ineq_violation", r.max_ineq_violation},
            {"max_support_residual", r.max_support_residual},
            {"worst_ineq", {r.worst_ineq_x, r.worst_ineq_y}},
            {"worst_support", {r.worst_support_x, r.worst_support_y}}};
}

bool within(DualityReport const& r, Tolerances const& tol)
{
    return r.max_ineq_violation <= tol.viol_tol && r.max_support_residual <= tol.eq_tol && r.gap <= tol.duality_tol;
}

json certificate_json(LipschitzCertificate const& c)
{
    return {{"L1", c.L1},
            {"L2", c.L2},
            {"measured", {{"lip_f", c.measured.f}, {"lip_g", c.measured.g}, {"sup_h", c.measured.h}}},
            {"bounds", {{"lip_f", c.bounds.f}, {"lip_g", c.bounds.g}, {"sup_h", c.bounds.h}}},
            {"pass", c.pass},
            {"summary", c.describe()}};
}

void write_csvs(std::string const& dir, DiscreteMeasure const& mu, DiscreteMeasure const& nu, DualTriple const& t,
                Coupling const& coupling)
{
    if (dir.empty())
        return;
    fs::create_directories(dir);
    io::write_potentials_csv(fs::path(dir) / "potentials.csv", mu, nu);
    io::write_dual_csv(fs::path(dir) / "dual.csv", t);
    io::write_coupling_csv(fs::path(dir) / "coupling.csv", coupling, mu, nu);
}

SolveOptions solve_options(io::RunOptions const& o)
{
    SolveOptions so;
    so.tol = o.tol;
    so.exact = o.exact;
    so.grid_refine = o.grid_refine;
    return so;
}

json solve_report(DualSolution const& sol, CostSpec const& cost)
{
    json shapes = json::array();
    json failures = json::array();
    json intervals = json::array();
    for (std::size_t k = 0; k < sol.components.size(); ++k) {
        ComponentReport const& c = sol.components[k];
        intervals.push_back(interval_json(c.interval));
        if (c.shape_violation)
            shapes.push_back({{"component", k + 1},
                              {"y", c.shape_violation->y},
                              {"value", c.shape_violation->value},
                              {"where", c.shape_violation->where}});
        if (c.failure)
            failures.push_back({{"component", k + 1}, {"reason", *c.failure}});
    }
    json glue = nullptr;
    if (sol.glue_violation)
        glue = {{"x", sol.glue_violation->x}, {"y", sol.glue_violation->y}, {"residual", sol.glue_violation->residual}};

    json out = {{"format", io::format_version},
                {"cost", cost.describe()},
                {"convex_order", order_json(sol.order)},
                {"components", {{"count", sol.components.size()}, {"intervals", std::move(intervals)}}},
                {"diagonal_mass", sol.decomposition.diagonal.mass()},
                {"lp_objective", sol.primal.value},
                {"method", sol.method},
                {"verdicts", {{"shape", std::move(shapes)}, {"glue", std::move(glue)}, {"component_failures", failures}}}};
    out.update(duality_json(sol.report));
    return out;
}

std::vector<int> levels_up_to(int top, int least, std::initializer_list<int> divisors)
{
    std::vector<int> out;
    for (int d : divisors)
        out.push_back(std::max(least, top / d));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void emit_instance(std::string const& path, DiscreteMeasure const& mu, DiscreteMeasure const& nu,
                   CostSpec const& cost)
{
    if (path.empty())
        return;
    io::Instance inst;
    inst.mu = mu;
    inst.nu = nu;
    auto const xs = mu.positions(), ys = nu.positions();
    inst.cost = std::holds_alternative<CustomCost>(cost.kind()) ? cost.materialize(xs, ys) : cost;
    io::save_json(path, io::instance_to_json(inst));
}

// --- subcommands -----------------------------------------------------------

int cmd_check_order(Common const& c, std::ostream& out)
{
    io::Instance inst = load_instance(c);
    OrderReport r = check_convex_order(inst.mu, inst.nu, inst.options.tol);
    out << json{{"format", io::format_version}, {"convex_order", order_json(r)}}.dump(2) << '\n';
    return r.ordered ? exit_ok : exit_infeasible;
}

int cmd_decompose(Common const& c, std::ostream& out)
{
    io::Instance inst = load_instance(c);
    ComponentDecomposition d = decompose(inst.mu, inst.nu, inst.options.tol);
    json doc = {{"format", io::format_version}, {"decomposition", decomposition_json(d)}};
    if (!c.out.empty())
        io::save_json(c.out, doc);
    out << doc.dump(2) << '\n';
    return exit_ok;
}

int cmd_solve(Common const& c, std::ostream& out)
{
    Clock total;
    io::Instance inst = load_instance(c);
    DualSolution sol = solve_dual(inst.mu, inst.nu, inst.cost, solve_options(inst.options));
    json report = solve_report(sol, inst.cost);
    bool const ok = within(sol.report, inst.options.tol);
    report["verified"] = ok;
    report["timings"] = {{"total_ms", total.ms()}};

    if (!c.out.empty()) {
        json saved = {{"format", io::format_version},
                      {"kind", "solution"},
                      {"instance", io::instance_to_json(inst)},
                      {"coupling", io::coupling_to_json(sol.primal.coupling)},
                      {"dual", io::triple_to_json(sol.triple)},
                      {"report", report}};
        io::save_json(c.out, saved);
    }
    write_csvs(c.csv_out, inst.mu, inst.nu, sol.triple, sol.primal.coupling);
    out << report.dump(2) << '\n';
    return ok ? exit_ok : exit_verification;
}

int cmd_report(Common const& c, std::ostream& out)
{
    json doc = io::load_json(c.input);
    if (!doc.is_object())
        throw io::ParseError("solution file must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "format" && it.key() != "kind" && it.key() != "instance" && it.key() != "coupling" &&
            it.key() != "dual" && it.key() != "report")
            throw io::ParseError("unknown field '" + it.key() + "' in solution");
    if (doc.value("format", 0) != io::format_version || doc.value("kind", std::string()) != "solution")
        throw io::ParseError("not a format 1 solution file");
    if (!doc.contains("instance") || !doc.contains("coupling") || !doc.contains("dual"))
        throw io::ParseError("solution file needs instance, coupling and dual");
    io::Instance inst = io::parse_instance(doc["instance"]);
    inst.options = resolve_options(inst.options, c);
    Coupling coupling = io::parse_coupling(doc["coupling"], inst.mu.size(), inst.nu.size());
    DualTriple triple = io::parse_triple(doc["dual"]);
    DualityReport r = verify_duality(triple, inst.mu, inst.nu, inst.cost, coupling, inst.options.tol);
    bool const ok = within(r, inst.options.tol);
    json report = {{"format", io::format_version}, {"cost", inst.cost.describe()}, {"verified", ok}};
    report.update(duality_json(r));
    out << report.dump(2) << '\n';
    return ok ? exit_ok : exit_verification;
}

int cmd_smooth(Common const& c, std::string const& u_arg, bool auto_u, std::ostream& out)
{
    Clock total;
    io::Instance inst = load_instance(c);
    Interval const J = Interval::closed(inst.nu[0].position, inst.nu[inst.nu.size() - 1].position);

    PiecewiseLinear u;
    std::optional<double> lambda;
    if (auto_u) {
        std::vector<double> grid;
        for (double y : evaluation_grid(inst.mu, inst.nu, inst.cost, inst.options.grid_refine))
            if (J.contains(y))
                grid.push_back(y);
        Convexifier conv = auto_convexifier(inst.cost, inst.mu.positions(), grid);
        u = conv.u;
        lambda = conv.lambda;
    } else {
        json knots;
        if (fs::exists(u_arg))
            knots = io::load_json(u_arg);
        else
            try {
                knots = json::parse(u_arg);
            } catch (json::parse_error const& e) {
                throw io::ParseError(std::string("--u: ") + e.what());
            }
        u = PiecewiseLinear(io::parse_knots(knots));
    }

    CostSpec const shifted = CostSpec::shifted(inst.cost, u);
    DualSolution sol = solve_dual(inst.mu, inst.nu, shifted, solve_options(inst.options));
    SmoothedDual sm = lipschitz_postprocess(sol.triple, inst.cost, u, J);
    DualityReport r = verify_duality(sm.triple, inst.mu, inst.nu, inst.cost, sol.primal.coupling, inst.options.tol);
    bool const ok = within(r, inst.options.tol);

    json cert = certificate_json(sm.certificate);
    if (lambda)
        cert["auto_u_lambda"] = *lambda;
    json report = {{"format", io::format_version},
                   {"cost", inst.cost.describe()},
                   {"J", interval_json(J)},
                   {"shifted_method", sol.method},
                   {"lipschitz_certificate", std::move(cert)},
                   {"verified", ok},
                   {"timings", {{"total_ms", total.ms()}}}};
    report.update(duality_json(r));
    if (!c.out.empty())
        io::save_json(c.out, {{"format", io::format_version},
                              {"kind", "solution"},
                              {"instance", io::instance_to_json(inst)},
                              {"coupling", io::coupling_to_json(sol.primal.coupling)},
                              {"dual", io::triple_to_json(sm.triple)},
                              {"report", report}});
    write_csvs(c.csv_out, inst.mu, inst.nu, sm.triple, sol.primal.coupling);
    out << report.dump(2) << '\n';
    return ok && sm.certificate.pass ? exit_ok : exit_verification;
}

struct ExampleArgs
{
    std::string which;
    int N = 0;
    int K = 256;
    double r = 1.5;
    double s = 1.2;
    std::string out;
    std::vector<std::string> tol;
};

int cmd_example(ExampleArgs const& a, std::ostream& out)
{
    Common c;
    c.tol = a.tol;
    Tolerances const tol = resolve_options({}, c).tol;
    json report = {{"format", io::format_version}, {"example", a.which}};

    if (a.which == "linear") {
        int const N = a.N ? a.N : 16;
        auto const levels = levels_up_to(N, 2, {4, 2, 1});
        LinearGrowthDiagnostic d = diagnose_linear_growth(levels, tol);
        json rows = json::array();
        for (auto const& l : d.levels)
            rows.push_back({{"N", l.N}, {"g_at_minus_one", l.g_at_minus_one}, {"expected", -(l.N - 1.0)}});
        report["levels"] = std::move(rows);
        report["verdict"] = {{"converged", d.verdict.converged},
                             {"monotone", d.verdict.monotone},
                             {"profile", d.verdict.profile},
                             {"probe_profile", d.verdict.probe_profile}};
        TruncatedFamily fam = gen_linear_growth(N);
        emit_instance(a.out, fam.mu, fam.nu, fam.cost);
    } else if (a.which == "local-convexity") {
        int const N = a.N ? a.N : 32;
        auto const levels = levels_up_to(N, 2, {4, 2, 1});
        LocalConvexityDiagnostic d = diagnose_local_convexity(levels, tol);
        json rows = json::array();
        for (auto const& l : d.levels)
            rows.push_back({{"N", l.N},
                            {"slope_check", l.slope_check},
                            {"min_slope_drop", l.min_slope_drop},
                            {"statistic", l.statistic},
                            {"bound", l.bound},
                            {"shape", l.shape}});
        report["levels"] = std::move(rows);
        report["slope_check"] = d.levels.back().slope_check;
        report["monotone"] = d.monotone;
        TruncatedFamily fam = gen_local_convexity(N);
        emit_instance(a.out, fam.mu, fam.nu, fam.cost);
    } else if (a.which == "cr") {
        int const N = a.N ? a.N : 64;
        auto const levels = levels_up_to(N, 2, {4, 2, 1});
        CrDiagnostic d = diagnose_cr(a.r, a.s, levels, tol);
        json rows = json::array();
        for (auto const& l : d.levels)
            rows.push_back({{"N", l.N}, {"regression_slope", l.regression_slope}, {"weighted_sum", l.weighted_sum}});
        report["r"] = a.r;
        report["s"] = a.s;
        report["target_slope"] = a.s - a.s * a.r;
        report["levels"] = std::move(rows);
        report["cauchy"] = d.cauchy;
        report["monotone"] = d.monotone;
        TruncatedFamily fam = gen_cr_cost(a.r, a.s, N);
        emit_instance(a.out, fam.mu, fam.nu, fam.cost);
    } else if (a.which == "nonintegrable") {
        auto const levels = levels_up_to(a.K, 8, {16, 4, 1});
        NonintegrableDiagnostic d = diagnose_nonintegrable(levels, tol);
        json rows = json::array();
        for (auto const& l : d.levels)
            rows.push_back({{"K", l.K}, {"nu_g", l.nu_g}, {"verify", duality_json(l.report)}});
        report["xi"] = xi_formula;
        report["levels"] = std::move(rows);
        report["diverging"] = d.diverging;
        NonintegrableInstance inst = gen_nonintegrable(a.K);
        emit_instance(a.out, inst.mu, inst.nu, inst.cost);
    } else {
        throw io::ParseError("unknown example '" + a.which + "'");
    }
    out << report.dump(2) << '\n';
    return exit_ok;
}

void add_common(CLI::App* sub, Common& c, bool with_input = true)
{
    if (with_input)
        sub->add_option("input", c.input, "Instance file (JSON)")->required();
    sub->add_option("--tol", c.tol, "Tolerance override name=value (repeatable)");
    sub->add_option("--grid-refine", c.grid_refine, "Extra grid points per gap for parametric costs");
    sub->add_flag("--exact", c.exact, "Solve LPs in exact rational arithmetic");
}

} // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Martingale optimal transport on the line", "mot"};
    app.require_subcommand(1);

    Common c;
    auto* check = app.add_subcommand("check-order", "Test convex order of mu and nu");
    add_common(check, c);
    auto* dec = app.add_subcommand("decompose", "Split into irreducible components");
    add_common(dec, c);
    dec->add_option("--out", c.out, "Write the decomposition here");
    auto* solve = app.add_subcommand("solve", "Primal and dual solution with verification");
    add_common(solve, c);
    solve->add_option("--out", c.out, "Write the solution (instance, coupling, dual) here");
    solve->add_option("--csv-out", c.csv_out, "Directory for potentials.csv, dual.csv, coupling.csv");

    std::string u_arg;
    bool auto_u = false;
    auto* smooth = app.add_subcommand("smooth", "Lipschitz post-processing of the dual");
    add_common(smooth, c);
    auto* u_opt = smooth->add_option("--u", u_arg, "Knots [[y, u(y)], ...] as JSON text or file");
    auto* auto_opt = smooth->add_flag("--auto-u", auto_u, "Use u = lambda y^2 from the cost's grid curvature");
    u_opt->excludes(auto_opt);
    smooth->add_option("--out", c.out, "Write the smoothed solution here");
    smooth->add_option("--csv-out", c.csv_out, "Directory for CSV output");

    ExampleArgs ex;
    auto* example = app.add_subcommand("example", "Generate a counterexample family and run its diagnostic");
    example->add_option("name", ex.which, "linear | local-convexity | cr | nonintegrable")
        ->required()
        ->check(CLI::IsMember({"linear", "local-convexity", "cr", "nonintegrable"}));
    example->add_option("--N", ex.N, "Truncation level");
    example->add_option("--K", ex.K, "Discretization level (nonintegrable)");
    example->add_option("--r", ex.r, "Cost exponent (cr)");
    example->add_option("--s", ex.s, "Grid exponent (cr)");
    example->add_option("--out", ex.out, "Write the generated instance here");
    example->add_option("--tol", ex.tol, "Tolerance override name=value (repeatable)");

    auto* report = app.add_subcommand("report", "Re-verify a saved solution");
    add_common(report, c);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_parse;
    }

    try {
        if (check->parsed())
            return cmd_check_order(c, out);
        if (dec->parsed())
            return cmd_decompose(c, out);
        if (solve->parsed())
            return cmd_solve(c, out);
        if (smooth->parsed()) {
            if (!auto_u && u_arg.empty()) {
                err << "error: smooth needs --u or --auto-u\n";
                return exit_parse;
            }
            return cmd_smooth(c, u_arg, auto_u, out);
        }
        if (example->parsed())
            return cmd_example(ex, out);
        if (report->parsed())
            return cmd_report(c, out);
    } catch (io::ParseError const& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (json::exception const& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (BadParameters const& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (InvalidMeasure const& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    } catch (Infeasible const& e) {
        err << "error: " << e.what() << '\n';
        return exit_infeasible;
    } catch (NotInConvexOrder const& e) {
        err << "error: " << e.what() << '\n';
        return exit_infeasible;
    } catch (SlacknessViolated const& e) {
        err << "error: " << e.what() << '\n';
        return exit_verification;
    } catch (InconsistentSplit const& e) {
        err << "error: " << e.what() << '\n';
        return exit_verification;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_internal;
}

} // namespace mot::cli
