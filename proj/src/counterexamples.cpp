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

#include "mot/counterexamples.hpp"

#include "mot/errors.hpp"
#include "mot/numeric.hpp"
#include "mot/pipeline.hpp"
#include "mot/regularity.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>

namespace mot {
namespace {

void require_level(int N, int least, char const* what)
{
    if (N < least) {
        std::ostringstream os;
        os << what << " needs a level of at least " << least << ", got " << N;
        throw BadParameters(os.str());
    }
}

// y_0 = 0, y_n = sum_{k<=n} k^-s; x_n midpoints plus a resting atom at y_N.
TruncatedFamily chain_family(std::string name, int N, double s, CostSpec cost)
{
    TruncatedFamily fam;
    fam.name = std::move(name);
    fam.level = N;
    fam.ys.push_back(0.0);
    CompensatedSum acc;
    for (int k = 1; k <= N; ++k) {
        acc.add(std::pow(static_cast<double>(k), -s));
        fam.ys.push_back(acc.value());
    }
    for (int n = 1; n <= N; ++n)
        fam.xs.push_back(0.5 * (fam.ys[n - 1] + fam.ys[n]));
    fam.xs.push_back(fam.ys[N]);

    double const w = 1.0 / (N + 1);
    std::vector<Atom> mu, nu;
    for (double x : fam.xs)
        mu.push_back({x, w});
    for (int n = 1; n <= N; ++n) {
        nu.push_back({fam.ys[n - 1], 0.5 * w});
        nu.push_back({fam.ys[n], 0.5 * w});
    }
    nu.push_back({fam.ys[N], w});
    fam.mu = DiscreteMeasure::probability(std::move(mu));
    fam.nu = DiscreteMeasure::probability(std::move(nu));
    fam.cost = std::move(cost);
    return fam;
}

bool cauchy_tail(std::vector<double> const& seq, double tol)
{
    std::size_t const n = seq.size();
    return n >= 3 && std::abs(seq[n - 1] - seq[n - 2]) <= tol && std::abs(seq[n - 2] - seq[n - 3]) <= tol;
}

bool nonincreasing(std::vector<double> const& seq)
{
    for (std::size_t k = 1; k < seq.size(); ++k)
        if (seq[k] > seq[k - 1])
            return false;
    return true;
}

/// Point of ]0,1[ where xi' equals s.
double xi_prime_inverse(double s, double x)
{
    double lo = 0.5, hi = 0.5;
    for (int k = 0; k < 1100 && xi_prime(lo) <= s; ++k)
        lo *= 0.5;
    for (int k = 0; k < 1100 && xi_prime(hi) >= s; ++k)
        hi = 1.0 - 0.5 * (1.0 - hi);
    if (!(xi_prime(lo) > s) || !(xi_prime(hi) < s) || !(lo > 0.0) || !(hi < 1.0))
        throw RootFindFailed("no tangency point for the requested slope", x);
    std::uintmax_t iters = 200;
    auto fn = [s](double y) { return xi_prime(y) - s; };
    auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    if (iters >= 200)
        throw RootFindFailed("tangency point did not converge", x);
    return 0.5 * (a + b);
}

/// Value at x of the tangent line to xi with slope s.
double tangent_at(double s, double x)
{
    double const p = xi_prime_inverse(s, x);
    return xi(p) + s * (x - p);
}

} // namespace

TruncatedFamily gen_linear_growth(int N)
{
    require_level(N, 2, "gen_linear_growth");
    TruncatedFamily fam;
    fam.name = "linear";
    fam.level = N;
    double const w = 1.0 / N;
    std::vector<Atom> mu, nu;
    for (int n = 1; n <= N; ++n) {
        fam.xs.push_back(n);
        mu.push_back({static_cast<double>(n), w});
        nu.push_back({n - 1.0, 0.5 * w});
        nu.push_back({n + 1.0, 0.5 * w});
    }
    for (int y = -1; y <= N + 1; ++y)
        fam.ys.push_back(y);
    fam.mu = DiscreteMeasure::probability(std::move(mu));
    fam.nu = DiscreteMeasure::probability(std::move(nu));
    fam.cost = CostSpec::custom(
        "linear-growth counterexample",
        [](double x, double y) {
            double const shift = x - 1.0;
            return y >= shift ? y * y : shift * y;
        },
        false);
    return fam;
}

TruncatedFamily gen_local_convexity(int N)
{
    require_level(N, 2, "gen_local_convexity");
    // The tent for x uses the cell [y_{n-1}, y_n] that contains it; the
    // resting atom at y_N gets the zero cost.
    auto cells = std::make_shared<std::vector<double>>();
    TruncatedFamily fam = chain_family("local-convexity", N, 2.0, CostSpec{});
    *cells = fam.ys;
    fam.cost = CostSpec::custom(
        "local-convexity counterexample",
        [cells](double x, double y) {
            std::vector<double> const& ys = *cells;
            if (x >= ys.back())
                return 0.0;
            auto it = std::upper_bound(ys.begin(), ys.end(), x);
            std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(it - ys.begin()), 1, ys.size() - 1);
            double const lo = ys[n - 1], hi = ys[n];
            if (y < lo)
                return y - lo;
            if (y > hi)
                return hi - y;
            return 0.0;
        },
        true);
    return fam;
}

TruncatedFamily gen_cr_cost(double r, double s, int N)
{
    if (!(r > 1.0 && r < 2.0) || !(s > 1.0) || !(s * r < 2.0)) {
        std::ostringstream os;
        os << "need 1 < r < 2, s > 1 and s r < 2; got r = " << r << ", s = " << s;
        throw BadParameters(os.str());
    }
    require_level(N, 2, "gen_cr_cost");
    return chain_family("cr", N, s, CostSpec::power(-1, r));
}

double xi(double y) { return 4.0 - 1.0 / y - 1.0 / (1.0 - y); }

double xi_prime(double y) { return 1.0 / (y * y) - 1.0 / ((1.0 - y) * (1.0 - y)); }

NonintegrableInstance gen_nonintegrable(int K)
{
    require_level(K, 8, "gen_nonintegrable");
    NonintegrableInstance inst;
    inst.K = K;
    inst.cost = CostSpec::power(-1, 1.0);
    double const w = 1.0 / K;

    std::vector<Atom> mu, nu;
    std::vector<double> f, h;
    for (int k = 0; k < K; ++k) {
        double const x = (k + 0.5) / K;
        double const d = xi_prime(x);
        // Kinks of the line meet where the two tangents of slope h +- 1 cross.
        auto F = [x](double hh) { return tangent_at(hh + 1.0, x) - tangent_at(hh - 1.0, x); };
        double hk = 0.0;
        if (x != 0.5) {
            std::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(F, d - 1.0, d + 1.0,
                                                            boost::math::tools::eps_tolerance<double>(50), iters);
            if (iters >= 200)
                throw RootFindFailed("two-point tangency did not converge", x);
            hk = 0.5 * (a + b);
        }
        double const ym = xi_prime_inverse(hk + 1.0, x);
        double const yp = xi_prime_inverse(hk - 1.0, x);
        if (!(ym < x && x < yp))
            throw RootFindFailed("tangency points do not straddle the atom", x);
        double const wm = (yp - x) / (yp - ym);
        mu.push_back({x, w});
        nu.push_back({ym, w * wm});
        nu.push_back({yp, w * (1.0 - wm)});
        f.push_back(xi(ym) + (hk + 1.0) * (x - ym));
        h.push_back(hk);
        inst.y_minus.push_back(ym);
        inst.y_plus.push_back(yp);
    }
    inst.mu = DiscreteMeasure::probability(std::move(mu));
    inst.nu = DiscreteMeasure::probability(std::move(nu));

    inst.coupling.rows = inst.mu.size();
    inst.coupling.cols = inst.nu.size();
    inst.coupling.pi.assign(inst.coupling.rows * inst.coupling.cols, 0.0);
    for (std::size_t i = 0; i < inst.mu.size(); ++i) {
        double const x = inst.mu[i].position;
        double const ym = inst.y_minus[i], yp = inst.y_plus[i];
        double const wm = (yp - x) / (yp - ym);
        inst.coupling(i, *inst.nu.index_of(ym)) += w * wm;
        inst.coupling(i, *inst.nu.index_of(yp)) += w * (1.0 - wm);
    }

    DualTriple& t = inst.triple;
    t.x = inst.mu.positions();
    t.f = std::move(f);
    t.h = std::move(h);
    t.grid = inst.nu.positions();
    for (double y : t.grid)
        t.g.push_back(xi(y));
    t.component.assign(t.x.size(), 1);
    return inst;
}

LinearGrowthDiagnostic diagnose_linear_growth(std::span<int const> Ns, Tolerances const& tol)
{
    LinearGrowthDiagnostic out;
    std::vector<DualTriple> truncations;
    for (int N : Ns) {
        TruncatedFamily fam = gen_linear_growth(N);
        DualTriple t;
        t.x = fam.xs;
        t.f.assign(t.x.size(), 0.0);
        t.h.assign(t.x.size(), 0.0);
        t.component.assign(t.x.size(), 1);
        t = with_envelope(std::move(t), fam.cost, fam.ys);
        out.levels.push_back({N, t.g_at(-1.0)});
        truncations.push_back(std::move(t));
    }
    CostSpec const cost = gen_linear_growth(2).cost;
    out.verdict = halfinfinite_normalize(truncations, cost, {0.0, -1.0}, tol);
    return out;
}

LocalConvexityDiagnostic diagnose_local_convexity(std::span<int const> Ns, Tolerances const& tol)
{
    LocalConvexityDiagnostic out;
    std::vector<double> stats;
    for (int N : Ns) {
        TruncatedFamily fam = gen_local_convexity(N);
        PrimalOptions po;
        po.tol = tol;
        PrimalSolution ps = solve_primal(fam.mu, fam.nu, fam.cost, po);
        DualTriple raw = recover_dual(fam.mu, fam.nu, fam.cost, ps, tol);

        LocalConvexityLevel lvl;
        lvl.N = N;
        lvl.h.assign(raw.h.begin(), raw.h.begin() + N);
        lvl.min_slope_drop = std::numeric_limits<double>::infinity();
        for (int n = 0; n + 1 < N; ++n)
            lvl.min_slope_drop = std::min(lvl.min_slope_drop, lvl.h[n] - lvl.h[n + 1]);
        lvl.slope_check = lvl.min_slope_drop >= 1.0 - 1e-6;
        double const y0 = fam.ys.front(), yN = fam.ys.back();
        lvl.statistic = raw.g_at(yN) - raw.g_at(y0) - lvl.h[0] * (yN - y0);
        CompensatedSum bound;
        for (int n = 1; n <= N; ++n)
            bound.add(-(n - 1.0) / (static_cast<double>(n) * n));
        lvl.bound = bound.value();

        SolveOptions so;
        so.tol = tol;
        DualSolution sol = solve_dual(fam.mu, fam.nu, fam.cost, so);
        lvl.shape = "none";
        for (auto const& c : sol.components)
            if (c.shape_violation) {
                std::ostringstream os;
                os << c.shape_violation->where << " at y = " << c.shape_violation->y;
                lvl.shape = os.str();
                break;
            }
        stats.push_back(lvl.statistic);
        out.levels.push_back(std::move(lvl));
    }
    out.monotone = nonincreasing(stats);
    return out;
}

double loglog_slope(std::span<double const> values, std::size_t first, std::size_t last)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = first; k <= last && k <= values.size(); ++k) {
        double const v = values[k - 1];
        if (!(v > 0.0))
            continue;
        double const lx = std::log(static_cast<double>(k));
        double const ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CrDiagnostic diagnose_cr(double r, double s, std::span<int const> Ns, Tolerances const& tol)
{
    CrDiagnostic out;
    out.r = r;
    out.s = s;
    std::vector<double> sums;
    for (int N : Ns) {
        TruncatedFamily fam = gen_cr_cost(r, s, N);
        PrimalOptions po;
        po.tol = tol;
        PrimalSolution ps = solve_primal(fam.mu, fam.nu, fam.cost, po);
        DualTriple raw = recover_dual(fam.mu, fam.nu, fam.cost, ps, tol);

        CrLevel lvl;
        lvl.N = N;
        for (int n = 0; n < N; ++n)
            lvl.b.push_back(raw.h[n] - raw.h[0]);
        for (int n = 0; n + 1 < N; ++n)
            lvl.drops.push_back(lvl.b[n] - lvl.b[n + 1]);
        lvl.regression_slope = loglog_slope(lvl.drops, 2, lvl.drops.size() > 2 ? lvl.drops.size() - 1 : 2);
        CompensatedSum acc;
        for (int n = 1; n <= N; ++n)
            acc.add((fam.ys[n] - fam.ys[n - 1]) * lvl.b[n - 1]);
        lvl.weighted_sum = acc.value();
        sums.push_back(lvl.weighted_sum);
        out.levels.push_back(std::move(lvl));
    }
    out.cauchy = cauchy_tail(sums, tol.conv_tol);
    out.monotone = nonincreasing(sums);
    return out;
}

NonintegrableDiagnostic diagnose_nonintegrable(std::span<int const> Ks, Tolerances const& tol)
{
    NonintegrableDiagnostic out;
    std::vector<ProbeLevel> probes;
    Tolerances loose = tol;
    loose.viol_tol = std::max(tol.viol_tol, 1e-6);
    for (int K : Ks) {
        NonintegrableInstance inst = gen_nonintegrable(K);
        NonintegrableLevel lvl;
        lvl.K = K;
        lvl.report = verify_duality(inst.triple, inst.mu, inst.nu, inst.cost, inst.coupling, loose);
        std::vector<Knot> knots;
        for (std::size_t k = 0; k < inst.triple.grid.size(); ++k)
            knots.push_back({inst.triple.grid[k], inst.triple.g[k]});
        probes.push_back({inst.nu, PiecewiseLinear(std::move(knots))});
        out.levels.push_back(std::move(lvl));
    }
    IntegrabilityProbe probe = integrability_probe(probes, tol);
    for (std::size_t k = 0; k < out.levels.size(); ++k)
        out.levels[k].nu_g = probe.values[k];
    out.diverging = probe.diverging;
    return out;
}

} // namespace mot
