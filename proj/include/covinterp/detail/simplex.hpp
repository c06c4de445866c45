// SPDX-License-Identifier: Apache-2.0
//
// covinterp - uplink/downlink covariance interpolation for antenna arrays
// Copyright (C) 2026 The covinterp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef COVINTERP_DETAIL_SIMPLEX_HPP
#define COVINTERP_DETAIL_SIMPLEX_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace covinterp::detail
{
    enum class LpStatus
    {
        optimal,
        infeasible,
        unbounded,
        iteration_limit
    };

    struct LpResult
    {
        LpStatus status = LpStatus::infeasible;
        Eigen::VectorXd x;
        double objective = 0.0;
    };

    // Dense two-phase tableau simplex with Bland's rule for
    //   maximize c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
    // The final basic solution is recomputed from the original data with a fresh LU solve.
    inline LpResult simplex_maximize(const Eigen::VectorXd &c, const Eigen::MatrixXd &A_ub, const Eigen::VectorXd &b_ub,
                                     const Eigen::MatrixXd &A_eq, const Eigen::VectorXd &b_eq, double pivot_tol = 1e-11,
                                     int max_pivots = 20000)
    {
        const Eigen::Index n = c.size();
        const Eigen::Index m_ub = A_ub.rows(), m_eq = A_eq.rows();
        const Eigen::Index m = m_ub + m_eq;
        const Eigen::Index n_slack = m_ub;
        const Eigen::Index n_art = m;
        const Eigen::Index n_tot = n + n_slack + n_art;

        // Rows of [A | S | I] x = b with b >= 0
        Eigen::MatrixXd Aeq_full = Eigen::MatrixXd::Zero(m, n + n_slack);
        Eigen::VectorXd b(m);
        if (m_ub > 0)
        {
            Aeq_full.topLeftCorner(m_ub, n) = A_ub;
            Aeq_full.block(0, n, m_ub, m_ub).setIdentity();
            b.head(m_ub) = b_ub;
        }
        if (m_eq > 0)
        {
            Aeq_full.bottomLeftCorner(m_eq, n) = A_eq;
            b.tail(m_eq) = b_eq;
        }
        for (Eigen::Index i = 0; i < m; ++i)
        {
            if (b[i] < 0.0)
            {
                Aeq_full.row(i) *= -1.0;
                b[i] = -b[i];
            }
        }

        // Tableau: m constraint rows plus one objective row, last column is the rhs
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n_tot + 1);
        T.topLeftCorner(m, n + n_slack) = Aeq_full;
        T.block(0, n + n_slack, m, n_art).setIdentity();
        T.topRightCorner(m, 1) = b;
        std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i)
            basis[static_cast<std::size_t>(i)] = n + n_slack + i;

        auto pivot = [&](Eigen::Index r, Eigen::Index col) {
            T.row(r) /= T(r, col);
            for (Eigen::Index i = 0; i <= m; ++i)
                if (i != r && T(i, col) != 0.0)
                    T.row(i) -= T(i, col) * T.row(r);
            basis[static_cast<std::size_t>(r)] = col;
        };

        // Runs Bland pivots on the objective row (reduced costs stored as -c_j, so enter on negative entries)
        auto run = [&](Eigen::Index allowed_cols) -> LpStatus {
            for (int k = 0; k < max_pivots; ++k)
            {
                Eigen::Index enter = -1;
                for (Eigen::Index j = 0; j < allowed_cols; ++j)
                {
                    if (T(m, j) < -pivot_tol)
                    {
                        enter = j;
                        break;
                    }
                }
                if (enter < 0)
                    return LpStatus::optimal;
                Eigen::Index leave = -1;
                double best = std::numeric_limits<double>::infinity();
                for (Eigen::Index i = 0; i < m; ++i)
                {
                    if (T(i, enter) > pivot_tol)
                    {
                        double ratio = T(i, n_tot) / T(i, enter);
                        if (ratio < best - 1e-14 ||
                            (std::abs(ratio - best) <= 1e-14 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]))
                        {
                            best = ratio;
                            leave = i;
                        }
                    }
                }
                if (leave < 0)
                    return LpStatus::unbounded;
                pivot(leave, enter);
            }
            return LpStatus::iteration_limit;
        };

        // Phase 1: minimize the sum of artificials, i.e. maximize its negative
        T.row(m).setZero();
        for (Eigen::Index i = 0; i < m; ++i)
            T.row(m) -= T.row(i);
        T.block(m, n + n_slack, 1, n_art).setZero();
        LpResult res;
        LpStatus st = run(n + n_slack);
        if (st == LpStatus::iteration_limit)
        {
            res.status = st;
            return res;
        }
        double infeas = -T(m, n_tot);
        if (infeas > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff()))
        {
            res.status = LpStatus::infeasible;
            return res;
        }
        // Drive remaining artificials out of the basis where possible
        for (Eigen::Index i = 0; i < m; ++i)
        {
            if (basis[static_cast<std::size_t>(i)] < n + n_slack)
                continue;
            Eigen::Index col = -1;
            double big = pivot_tol;
            for (Eigen::Index j = 0; j < n + n_slack; ++j)
            {
                if (std::abs(T(i, j)) > big)
                {
                    big = std::abs(T(i, j));
                    col = j;
                }
            }
            if (col >= 0)
                pivot(i, col);
        }

        // Phase 2 objective row: -c_j + c_B B^-1 a_j
        T.row(m).setZero();
        T.block(m, 0, 1, n) = -c.transpose();
        for (Eigen::Index i = 0; i < m; ++i)
        {
            Eigen::Index bj = basis[static_cast<std::size_t>(i)];
            if (bj < n && c[bj] != 0.0)
                T.row(m) += c[bj] * T.row(i);
        }
        st = run(n + n_slack);
        res.status = st;
        if (st != LpStatus::optimal)
            return res;

        // Recompute the basic solution from the original columns
        std::vector<Eigen::Index> cols;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            Eigen::Index bj = basis[static_cast<std::size_t>(i)];
            if (bj < n + n_slack)
                cols.push_back(bj);
        }
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n + n_slack);
        if (!cols.empty())
        {
            Eigen::MatrixXd B(m, static_cast<Eigen::Index>(cols.size()));
            for (std::size_t k = 0; k < cols.size(); ++k)
                B.col(static_cast<Eigen::Index>(k)) = Aeq_full.col(cols[k]);
            Eigen::VectorXd zb = B.colPivHouseholderQr().solve(b);
            for (std::size_t k = 0; k < cols.size(); ++k)
                z[cols[k]] = zb[static_cast<Eigen::Index>(k)];
        }
        res.x = z.head(n).cwiseMax(0.0);
        res.objective = c.dot(res.x);
        return res;
    }
} // namespace covinterp::detail

#endif
