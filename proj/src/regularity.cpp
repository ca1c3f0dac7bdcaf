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

#include "mot/regularity.hpp"

#include "mot/errors.hpp"
#include "mot/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace mot {
namespace {

double interpolate(Knot const& a, Knot const& b, double y)
{
    return a.value + (b.value - a.value) * (y - a.y) / (b.y - a.y);
}

double slope(Knot const& a, Knot const& b) { return (b.value - a.value) / (b.y - a.y); }

} // namespace

double ConcaveEnvelope::operator()(double y) const
{
    if (hull_.empty())
        return 0.0;
    if (y <= hull_.front().y)
        return hull_.front().value;
    if (y >= hull_.back().y)
        return hull_.back().value;
    auto it = std::lower_bound(hull_.begin(), hull_.end(), y, [](Knot const& k, double v) { return k.y < v; });
    if (it->y == y)
        return it->value;
    return interpolate(*(it - 1), *it, y);
}

std::pair<double, double> ConcaveEnvelope::superdifferential(double y) const
{
    if (hull_.size() < 2 || y < hull_.front().y || y > hull_.back().y)
        return {0.0, 0.0};
    auto it = std::lower_bound(hull_.begin(), hull_.end(), y, [](Knot const& k, double v) { return k.y < v; });
    std::size_t const k = static_cast<std::size_t>(it - hull_.begin());
    if (it->y != y) {
        double const s = slope(hull_[k - 1], hull_[k]);
        return {s, s};
    }
    if (k == 0) {
        double const s = slope(hull_[0], hull_[1]);
        return {s, s};
    }
    if (k + 1 == hull_.size()) {
        double const s = slope(hull_[k - 1], hull_[k]);
        return {s, s};
    }
    return {slope(hull_[k], hull_[k + 1]), slope(hull_[k - 1], hull_[k])};
}

double ConcaveEnvelope::supergradient(double y) const
{
    auto [lo, hi] = superdifferential(y);
    return 0.5 * (lo + hi);
}

ConcaveEnvelope concave_envelope(std::span<Knot const> points)
{
    std::vector<Knot> hull;
    hull.reserve(points.size());
    for (Knot const& c : points) {
        if (!hull.empty() && !(c.y > hull.back().y))
            throw Error("concave_envelope needs strictly increasing abscissae");
        while (hull.size() >= 2) {
            Knot const& a = hull[hull.size() - 2];
            Knot const& b = hull.back();
            double const cross = (b.y - a.y) * (c.value - a.value) - (b.value - a.value) * (c.y - a.y);
            if (cross < 0.0)
                break;
            hull.pop_back();
        }
        hull.push_back(c);
    }
    return ConcaveEnvelope(std::move(hull));
}

double grid_lipschitz(std::span<double const> ys, std::span<double const> values)
{
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < ys.size(); ++k)
        best = std::max(best, std::abs(values[k + 1] - values[k]) / (ys[k + 1] - ys[k]));
    return best;
}

std::string LipschitzCertificate::describe() const
{
    std::ostringstream os;
    os << std::setprecision(6);
    double const scale = std::max({1.0, std::abs(L1), std::abs(L2)});
    if (std::abs(L1 - L2) <= 1e-12 * scale)
        os << "L = " << L1 << ": Lip(f) <= 7L = " << bounds.f << ", Lip(g) <= 5L = " << bounds.g
           << ", sup|h| <= 6L = " << bounds.h;
    else
        os << "L1 = " << L1 << ", L2 = " << L2 << ": Lip(f) <= " << bounds.f << ", Lip(g) <= " << bounds.g
           << ", sup|h| <= " << bounds.h;
    os << "; measured " << measured.f << ", " << measured.g << ", " << measured.h << (pass ? " (pass)" : " (fail)");
    return os.str();
}

SmoothedDual lipschitz_postprocess(DualTriple const& shifted, CostSpec const& cost, PiecewiseLinear const& u,
                                   Interval const& J)
{
    if (!J.bounded())
        throw NotCompact("Lipschitz post-processing needs a compact J");

    std::vector<double> ys;
    std::vector<double> clamped;
    for (std::size_t k = 0; k < shifted.grid.size(); ++k) {
        double const y = shifted.grid[k];
        if (y < J.lo || y > J.hi)
            continue;
        ys.push_back(y);
        clamped.push_back(std::min(shifted.g[k], 0.0));
    }
    if (ys.empty())
        throw Error("no grid point lies in J");

    SmoothedDual out;
    DualTriple& t = out.triple;
    t.x = shifted.x;
    t.component = shifted.component;
    t.normalization = shifted.normalization;
    t.f.resize(t.x.size());
    t.h.resize(t.x.size());
    out.H.resize(t.x.size());

    std::vector<double> u_grid(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k)
        u_grid[k] = u.empty() ? 0.0 : u(ys[k]);

    std::vector<Knot> pts(ys.size());
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        double const x = t.x[i];
        for (std::size_t k = 0; k < ys.size(); ++k)
            pts[k] = {ys[k], clamped[k] - cost(x, ys[k]) - u_grid[k]};
        out.H[i] = concave_envelope(pts);
        t.f[i] = out.H[i](x);
        t.h[i] = out.H[i].supergradient(x);
    }

    t.grid = ys;
    t.g.resize(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k)
        t.g[k] = clamped[k] - u_grid[k];

    // Moduli of c and u on the grid inside J.
    std::vector<double> xs = t.x;
    if (cost.defined_on_line()) {
        xs.insert(xs.end(), ys.begin(), ys.end());
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    double L1 = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t k = 0; k < ys.size(); ++k) {
            double const cxy = cost(xs[a], ys[k]);
            if (k + 1 < ys.size())
                L1 = std::max(L1, std::abs(cost(xs[a], ys[k + 1]) - cxy) / (ys[k + 1] - ys[k]));
            if (a + 1 < xs.size())
                L1 = std::max(L1, std::abs(cost(xs[a + 1], ys[k]) - cxy) / (xs[a + 1] - xs[a]));
        }

    LipschitzCertificate& cert = out.certificate;
    cert.L1 = L1;
    cert.L2 = grid_lipschitz(ys, u_grid);
    double const L = cert.L1 + cert.L2;
    cert.bounds = {cert.L1 + 3.0 * L, 2.0 * L + cert.L2, 3.0 * L};
    cert.measured.f = grid_lipschitz(t.x, t.f);
    cert.measured.g = grid_lipschitz(t.grid, t.g);
    for (double h : t.h)
        cert.measured.h = std::max(cert.measured.h, std::abs(h));
    constexpr double slack = 1e-9;
    cert.pass = cert.measured.f <= cert.bounds.f + slack && cert.measured.g <= cert.bounds.g + slack &&
                cert.measured.h <= cert.bounds.h + slack;
    return out;
}

Convexifier auto_convexifier(CostSpec const& cost, std::span<double const> xs, std::span<double const> grid)
{
    Convexifier out;
    for (double x : xs)
        for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
            double const y0 = grid[k - 1], y1 = grid[k], y2 = grid[k + 1];
            double const left = (cost(x, y1) - cost(x, y0)) / (y1 - y0);
            double const right = (cost(x, y2) - cost(x, y1)) / (y2 - y1);
            double const dd = (right - left) / (y2 - y0);
            out.lambda = std::max(out.lambda, -dd);
        }
    double const lambda = out.lambda;
    out.u = PiecewiseLinear::sample(grid, [lambda](double y) { return lambda * y * y; });
    return out;
}

IntegrabilityProbe integrability_probe(std::span<ProbeLevel const> levels, Tolerances const& tol)
{
    IntegrabilityProbe out;
    for (ProbeLevel const& level : levels) {
        CompensatedSum s;
        for (Atom const& a : level.nu.atoms())
            s.add(a.weight * level.g(a.position));
        out.values.push_back(s.value());
    }
    std::size_t const n = out.values.size();
    if (n >= 3) {
        double const a = out.values[n - 3], b = out.values[n - 2], c = out.values[n - 1];
        out.cauchy = std::abs(c - b) <= tol.conv_tol && std::abs(b - a) <= tol.conv_tol;
        out.diverging = !out.cauchy && b < a - tol.conv_tol && c < b - tol.conv_tol;
    }
    return out;
}

} // namespace mot
