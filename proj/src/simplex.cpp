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

#include "mot/simplex.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace mot::lp {
namespace {

template <class S>
struct Arith;

template <>
struct Arith<double>
{
    static constexpr bool exact = false;
    static double from(double v) { return v; }
    static double to_double(double v) { return v; }
    static bool greater(double v, double tol) { return v > tol; }
    static bool less(double v, double tol) { return v < -tol; }
    static double abs(double v) { return std::abs(v); }
};

template <>
struct Arith<mpq_class>
{
    static constexpr bool exact = true;
    static mpq_class from(double v) { return mpq_class(v); }
    static double to_double(mpq_class const& v) { return v.get_d(); }
    static bool greater(mpq_class const& v, double) { return sgn(v) > 0; }
    static bool less(mpq_class const& v, double) { return sgn(v) < 0; }
    static mpq_class abs(mpq_class const& v) { return ::abs(v); }
};

template <class S>
class Simplex
{
    using A = Arith<S>;

public:
    Simplex(Problem const& p, Options const& opt)
        : p_(p)
        , opt_(opt)
        , m_(p.rows)
        , n_(p.cols)
    {
        sign_.resize(m_);
        b_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) {
            sign_[r] = p.b[r] < 0.0 ? -1 : 1;
            b_[r] = A::from(std::abs(p.b[r]));
        }
        val_.resize(p.value.size());
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = p.col_start[j]; k < p.col_start[j + 1]; ++k)
                val_[k] = A::from(p.value[k] * sign_[p.row_index[k]]);
        c_.resize(n_);
        double cmax = 1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            c_[j] = A::from(p.c[j]);
            cmax = std::max(cmax, std::abs(p.c[j]));
        }
        opt_tol_ = opt.opt_tol * cmax;
        double bsum = 1.0;
        for (double v : p.b)
            bsum += std::abs(v);
        feas_tol_ = opt.feas_tol * bsum;

        binv_.assign(m_ * m_, S(0));
        for (std::size_t r = 0; r < m_; ++r)
            binv_[r * m_ + r] = S(1);
        basis_.resize(m_);
        pos_.assign(n_ + m_, npos);
        for (std::size_t r = 0; r < m_; ++r) {
            basis_[r] = n_ + r;
            pos_[n_ + r] = r;
        }
        xb_ = b_;
        redundant_.assign(m_, false);
        max_iter_ = opt.max_iterations ? opt.max_iterations : std::max<std::size_t>(2000, 50 * (m_ + n_));
    }

    Solution run()
    {
        Solution sol;
        // Phase 1: minimize the sum of artificials.
        std::vector<S> cost1(n_ + m_, S(0));
        for (std::size_t r = 0; r < m_; ++r)
            cost1[n_ + r] = S(1);
        Status st = iterate(cost1, true);
        if (st == Status::IterationLimit || st == Status::Unbounded) {
            sol.status = Status::IterationLimit;
            return finish(sol, cost1);
        }
        S infeas(0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] >= n_)
                infeas += xb_[r];
        sol.infeasibility = A::to_double(infeas);
        // Inputs are doubles, so even in exact mode the system can be
        // inconsistent at rounding level; judge the residual in floating point.
        if (A::to_double(infeas) > feas_tol_) {
            sol.status = Status::Infeasible;
            return finish(sol, cost1);
        }
        drive_out_artificials();

        // Phase 2.
        std::vector<S> cost2(n_ + m_, S(0));
        for (std::size_t j = 0; j < n_; ++j)
            cost2[j] = c_[j];
        sol.status = iterate(cost2, false);
        return finish(sol, cost2);
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    // Column j of the sign-adjusted matrix, artificials included.
    template <class Fn>
    void for_column(std::size_t j, Fn&& fn) const
    {
        if (j >= n_) {
            fn(j - n_, S(1));
            return;
        }
        for (std::size_t k = p_.col_start[j]; k < p_.col_start[j + 1]; ++k)
            fn(p_.row_index[k], val_[k]);
    }

    std::vector<S> duals(std::vector<S> const& cost) const
    {
        std::vector<S> y(m_, S(0));
        for (std::size_t r = 0; r < m_; ++r) {
            S const& cb = cost[basis_[r]];
            if (cb == 0)
                continue;
            S const* row = &binv_[r * m_];
            for (std::size_t k = 0; k < m_; ++k)
                y[k] += cb * row[k];
        }
        return y;
    }

    S reduced_cost(std::vector<S> const& cost, std::vector<S> const& y, std::size_t j) const
    {
        S d = cost[j];
        for_column(j, [&](std::size_t r, S const& a) { d -= y[r] * a; });
        return d;
    }

    std::vector<S> ftran(std::size_t j) const
    {
        std::vector<S> alpha(m_, S(0));
        for_column(j, [&](std::size_t r, S const& a) {
            for (std::size_t i = 0; i < m_; ++i)
                alpha[i] += binv_[i * m_ + r] * a;
        });
        return alpha;
    }

    void pivot(std::size_t row, std::size_t entering, std::vector<S> const& alpha, S const& theta)
    {
        for (std::size_t i = 0; i < m_; ++i)
            if (i != row)
                xb_[i] -= theta * alpha[i];
        xb_[row] = theta;

        S const inv = S(1) / alpha[row];
        S* prow = &binv_[row * m_];
        for (std::size_t k = 0; k < m_; ++k)
            prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || alpha[i] == 0)
                continue;
            S const factor = alpha[i];
            S* irow = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                irow[k] -= factor * prow[k];
        }
        pos_[basis_[row]] = npos;
        basis_[row] = entering;
        pos_[entering] = row;

        if constexpr (!A::exact) {
            for (auto& v : xb_)
                if (v < 0.0 && v > -feas_tol_)
                    v = 0.0;
            if (++since_refactor_ >= opt_.refactor_every)
                refactor();
        }
    }

    void refactor()
    {
        since_refactor_ = 0;
        // Gauss-Jordan on [B | I] with partial pivoting.
        std::vector<double> bm(m_ * m_, 0.0), inv(m_ * m_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            inv[r * m_ + r] = 1.0;
            for_column(basis_[r], [&](std::size_t i, S const& a) { bm[i * m_ + r] = A::to_double(a); });
        }
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t best = col;
            for (std::size_t i = col + 1; i < m_; ++i)
                if (std::abs(bm[i * m_ + col]) > std::abs(bm[best * m_ + col]))
                    best = i;
            if (std::abs(bm[best * m_ + col]) < 1e-18)
                return; // singular: keep the product-form inverse
            if (best != col)
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(bm[best * m_ + k], bm[col * m_ + k]);
                    std::swap(inv[best * m_ + k], inv[col * m_ + k]);
                }
            double const d = 1.0 / bm[col * m_ + col];
            for (std::size_t k = 0; k < m_; ++k) {
                bm[col * m_ + k] *= d;
                inv[col * m_ + k] *= d;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == col)
                    continue;
                double const f = bm[i * m_ + col];
                if (f == 0.0)
                    continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    bm[i * m_ + k] -= f * bm[col * m_ + k];
                    inv[i * m_ + k] -= f * inv[col * m_ + k];
                }
            }
        }
        if constexpr (!A::exact) {
            binv_ = std::move(inv);
            for (std::size_t i = 0; i < m_; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < m_; ++k)
                    s += binv_[i * m_ + k] * b_[k];
                xb_[i] = std::abs(s) < feas_tol_ ? 0.0 : s;
            }
        }
    }

    // Ratio test. Floating point uses a two-pass Harris test: the first pass
    // finds the largest step allowed with slightly relaxed bounds, the second
    // picks among rows within that step the largest pivot (or, under Bland,
    // the smallest basic index among pivots of comparable size).
    std::size_t choose_leaving(std::vector<S> const& alpha, bool bland) const
    {
        std::size_t leave = npos;
        if constexpr (A::exact) {
            S ratio(0);
            for (std::size_t r = 0; r < m_; ++r) {
                if (redundant_[r] || sgn(alpha[r]) <= 0)
                    continue;
                S const q = xb_[r] / alpha[r];
                bool take = leave == npos || q < ratio;
                if (!take && q == ratio)
                    take = bland ? basis_[r] < basis_[leave] : alpha[r] > alpha[leave];
                if (take) {
                    leave = r;
                    ratio = q;
                }
            }
            return leave;
        } else {
            double amax = 0.0;
            for (std::size_t r = 0; r < m_; ++r)
                if (!redundant_[r])
                    amax = std::max(amax, alpha[r]);
            double const threshold = std::max(opt_.pivot_tol, 1e-11 * amax);
            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r)
                if (!redundant_[r] && alpha[r] > threshold)
                    bound = std::min(bound, (std::max(xb_[r], 0.0) + opt_.feas_tol) / alpha[r]);
            if (!std::isfinite(bound))
                return npos;
            double tie_max = 0.0;
            for (std::size_t r = 0; r < m_; ++r)
                if (!redundant_[r] && alpha[r] > threshold && std::max(xb_[r], 0.0) / alpha[r] <= bound)
                    tie_max = std::max(tie_max, alpha[r]);
            double const floor = bland ? 1e-3 * tie_max : tie_max;
            for (std::size_t r = 0; r < m_; ++r) {
                if (redundant_[r] || alpha[r] < floor || !(alpha[r] > threshold) ||
                    std::max(xb_[r], 0.0) / alpha[r] > bound)
                    continue;
                if (leave == npos || (bland && basis_[r] < basis_[leave]))
                    leave = r;
            }
            return leave;
        }
    }

    Status iterate(std::vector<S> const& cost, bool artificials_may_enter)
    {
        std::size_t degenerate_run = 0;
        bool bland = false;
        std::size_t const limit = artificials_may_enter ? n_ + m_ : n_;
        while (true) {
            if (iterations_ >= max_iter_)
                return Status::IterationLimit;
            std::vector<S> const y = duals(cost);

            std::size_t entering = npos;
            S best(0);
            for (std::size_t j = 0; j < limit; ++j) {
                if (pos_[j] != npos)
                    continue;
                S const d = reduced_cost(cost, y, j);
                if (!A::less(d, opt_tol_))
                    continue;
                if (bland) {
                    entering = j;
                    break;
                }
                if (entering == npos || d < best) {
                    entering = j;
                    best = d;
                }
            }
            if (entering == npos)
                return Status::Optimal;

            std::vector<S> const alpha = ftran(entering);
            std::size_t const leave = choose_leaving(alpha, bland);
            if (leave == npos)
                return Status::Unbounded;

            S theta = xb_[leave] / alpha[leave];
            if constexpr (!A::exact)
                theta = std::max(theta, 0.0);
            bool const degenerate = !A::greater(theta, opt_.feas_tol);
            pivot(leave, entering, alpha, theta);
            ++iterations_;
            if (bland)
                ++bland_pivots_;
            if (degenerate) {
                ++degenerate_pivots_;
                if (++degenerate_run >= opt_.degenerate_limit)
                    bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    void drive_out_artificials()
    {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_)
                continue;
            // Absorb a rounding-level residual into the right-hand side: the
            // basic artificial of row k is e_k, so only this entry changes.
            if constexpr (A::exact)
                if (sgn(xb_[r]) != 0) {
                    b_[basis_[r] - n_] -= xb_[r];
                    xb_[r] = S(0);
                }
            S const* row = &binv_[r * m_];
            std::size_t best = npos;
            S best_abs(0);
            for (std::size_t j = 0; j < n_; ++j) {
                if (pos_[j] != npos)
                    continue;
                S a(0);
                for_column(j, [&](std::size_t i, S const& v) { a += row[i] * v; });
                S const aa = A::abs(a);
                if (A::greater(aa, opt_.pivot_tol) && (best == npos || aa > best_abs)) {
                    best = j;
                    best_abs = aa;
                }
            }
            if (best == npos) {
                redundant_[r] = true;
                continue;
            }
            std::vector<S> const alpha = ftran(best);
            S const theta = xb_[r] / alpha[r];
            pivot(r, best, alpha, theta);
            ++iterations_;
        }
    }

    Solution& finish(Solution& sol, std::vector<S> const& cost)
    {
        if constexpr (!A::exact)
            refactor();
        std::vector<S> const y = duals(cost);
        sol.x.assign(n_, 0.0);
        S obj(0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) {
                sol.x[basis_[r]] = A::to_double(xb_[r]);
                obj += c_[basis_[r]] * xb_[r];
            }
        sol.objective = A::to_double(obj);
        sol.y.resize(m_);
        for (std::size_t r = 0; r < m_; ++r)
            sol.y[r] = A::to_double(y[r]) * sign_[r];
        sol.reduced_costs.resize(n_);
        for (std::size_t j = 0; j < n_; ++j)
            sol.reduced_costs[j] = A::to_double(reduced_cost(cost, y, j));
        sol.basis = basis_;
        sol.redundant_rows = redundant_;
        sol.iterations = iterations_;
        sol.degenerate_pivots = degenerate_pivots_;
        sol.bland_pivots = bland_pivots_;
        return sol;
    }

    Problem const& p_;
    Options opt_;
    std::size_t m_;
    std::size_t n_;
    std::vector<int> sign_;
    std::vector<S> b_;
    std::vector<S> val_;
    std::vector<S> c_;
    double opt_tol_ = 0.0;
    double feas_tol_ = 0.0;
    std::vector<S> binv_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> pos_;
    std::vector<S> xb_;
    std::vector<bool> redundant_;
    std::size_t max_iter_ = 0;
    std::size_t iterations_ = 0;
    std::size_t degenerate_pivots_ = 0;
    std::size_t bland_pivots_ = 0;
    std::size_t since_refactor_ = 0;
};

} // namespace

Solution solve(Problem const& problem, Options const& options)
{
    return Simplex<double>(problem, options).run();
}

Solution solve_exact(Problem const& problem, Options const& options)
{
    return Simplex<mpq_class>(problem, options).run();
}

} // namespace mot::lp
