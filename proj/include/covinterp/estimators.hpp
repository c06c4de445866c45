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

#ifndef COVINTERP_ESTIMATORS_HPP
#define COVINTERP_ESTIMATORS_HPP

#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace covinterp
{
    // UL steering vectors on a grid of G angles
    struct GridDictionary
    {
        std::vector<double> grid;
        CMatrix A; // M x G
    };

    // Dictionary for an explicit grid of xi values
    inline GridDictionary build_dictionary(const ArrayConfig &cfg, const std::vector<double> &grid)
    {
        if (grid.empty())
            detail::argument_fail("build_dictionary", "grid is empty");
        GridDictionary d;
        d.grid = grid;
        d.A.resize(cfg.num_antennas(), static_cast<Eigen::Index>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i)
            d.A.col(static_cast<Eigen::Index>(i)) = steering_vector(cfg, grid[i], Band::uplink);
        return d;
    }

    // Uniform grid xi_i = -1 + 2i/(G-1); a single point sits at xi = 0
    inline GridDictionary build_dictionary(const ArrayConfig &cfg, int G)
    {
        if (G < cfg.num_antennas())
            detail::argument_fail("build_dictionary", "grid size G must be at least M");
        std::vector<double> grid(static_cast<std::size_t>(G), 0.0);
        for (int i = 0; i < G && G > 1; ++i)
            grid[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (G - 1);
        if (G > 1)
            grid.back() = 1.0;
        return build_dictionary(cfg, grid);
    }

    enum class NnlsMethod
    {
        active_set,
        projected_gradient
    };

    enum class SketchKind
    {
        identity,
        selection,
        gaussian
    };

    struct SketchConfig
    {
        SketchKind kind = SketchKind::identity;
        int m = 0;                   // sketch rows; 0 means M
        double noise_variance = 1.0; // per-entry variance of n(t)
    };

    struct SolverConfig
    {
        double tol = 1e-8;
        int max_iter = 0; // 0 selects a size-dependent default
        double iota_scale = 1.0;
        NnlsMethod method = NnlsMethod::active_set;
        SketchConfig sketch;
    };

    struct SolverReport
    {
        RVector solution;
        double objective = 0.0;
        int iterations = 0;
        bool converged = false;
        double kkt_residual = 0.0;
        std::vector<double> objective_history;
    };

    namespace detail
    {
        inline RMatrix stack_real(const CMatrix &A)
        {
            RMatrix R(2 * A.rows(), A.cols());
            R.topRows(A.rows()) = A.real();
            R.bottomRows(A.rows()) = A.imag();
            return R;
        }

        inline RVector stack_real(const CVector &v)
        {
            RVector r(2 * v.size());
            r.head(v.size()) = v.real();
            r.tail(v.size()) = v.imag();
            return r;
        }

        // Scaled KKT violation of min 0.5|Ax - b|^2 s.t. x >= 0
        inline double nnls_kkt(const RVector &x, const RVector &grad, double scale)
        {
            double worst = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i)
                worst = std::max(worst, x[i] > 0.0 ? std::abs(grad[i]) : std::max(0.0, -grad[i]));
            return worst / scale;
        }

        inline double lipschitz_estimate(const RMatrix &A, int iters = 20)
        {
            RVector v = RVector::Constant(A.cols(), 1.0 / std::sqrt(static_cast<double>(A.cols())));
            double lam = 0.0;
            for (int k = 0; k < iters; ++k)
            {
                RVector w = A.transpose() * (A * v);
                lam = w.norm();
                if (lam == 0.0)
                    return 1.0;
                v = w / lam;
            }
            return lam;
        }

        // Lawson-Hanson active set with QR solves on the passive columns
        inline SolverReport nnls_active_set(const RMatrix &A, const RVector &b, const RVector &x0, double tol,
                                            int max_iter, double scale)
        {
            const Eigen::Index n = A.cols();
            RVector x = x0;
            std::vector<char> passive(static_cast<std::size_t>(n), 0), blocked(static_cast<std::size_t>(n), 0);
            for (Eigen::Index i = 0; i < n; ++i)
                passive[static_cast<std::size_t>(i)] = x[i] > 0.0;

            SolverReport rep;
            auto objective = [&](const RVector &v) { return 0.5 * (A * v - b).squaredNorm(); };

            // Returns the unconstrained LS solution on the passive set, zero elsewhere
            auto passive_solve = [&]() {
                std::vector<Eigen::Index> idx;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (passive[static_cast<std::size_t>(i)])
                        idx.push_back(i);
                RVector z = RVector::Zero(n);
                if (idx.empty())
                    return z;
                RMatrix Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
                for (std::size_t c = 0; c < idx.size(); ++c)
                    Ap.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
                RVector zp = Ap.colPivHouseholderQr().solve(b);
                for (std::size_t c = 0; c < idx.size(); ++c)
                    z[idx[c]] = zp[static_cast<Eigen::Index>(c)];
                return z;
            };

            // Moves x toward the passive LS solution while keeping feasibility
            auto inner = [&](Eigen::Index just_added) {
                bool first = true;
                for (int guard = 0; guard < 4 * n + 10; ++guard)
                {
                    RVector z = passive_solve();
                    bool feasible = true;
                    for (Eigen::Index i = 0; i < n; ++i)
                        if (passive[static_cast<std::size_t>(i)] && z[i] <= 0.0)
                            feasible = false;
                    if (feasible)
                    {
                        x = z;
                        return true;
                    }
                    if (first && just_added >= 0 && z[just_added] <= 0.0)
                    {
                        // Numerically useless column: undo and block it until x changes
                        passive[static_cast<std::size_t>(just_added)] = 0;
                        blocked[static_cast<std::size_t>(just_added)] = 1;
                        return false;
                    }
                    first = false;
                    double alpha = 1.0;
                    for (Eigen::Index i = 0; i < n; ++i)
                        if (passive[static_cast<std::size_t>(i)] && z[i] <= 0.0)
                            alpha = std::min(alpha, x[i] / (x[i] - z[i]));
                    x += alpha * (z - x);
                    for (Eigen::Index i = 0; i < n; ++i)
                    {
                        if (passive[static_cast<std::size_t>(i)] && x[i] <= 1e-15 * std::max(1.0, x.maxCoeff()))
                        {
                            passive[static_cast<std::size_t>(i)] = 0;
                            x[i] = 0.0;
                        }
                    }
                }
                return true;
            };

            if (std::any_of(passive.begin(), passive.end(), [](char c) { return c != 0; }))
                inner(-1);
            rep.objective_history.push_back(objective(x));

            int it = 0;
            for (; it < max_iter; ++it)
            {
                RVector w = A.transpose() * (b - A * x);
                Eigen::Index best = -1;
                double best_w = tol * scale;
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    if (!passive[static_cast<std::size_t>(i)] && !blocked[static_cast<std::size_t>(i)] && w[i] > best_w)
                    {
                        best_w = w[i];
                        best = i;
                    }
                }
                if (best < 0)
                    break;
                passive[static_cast<std::size_t>(best)] = 1;
                if (inner(best))
                    std::fill(blocked.begin(), blocked.end(), 0);
                rep.objective_history.push_back(objective(x));
            }

            rep.solution = x;
            rep.iterations = it;
            rep.objective = objective(x);
            rep.kkt_residual = nnls_kkt(x, A.transpose() * (A * x - b), scale);
            rep.converged = rep.kkt_residual <= tol;
            return rep;
        }

        // Accelerated projected gradient, step 1/L, restart when the objective increases
        inline SolverReport nnls_projected_gradient(const RMatrix &A, const RVector &b, const RVector &x0, double tol,
                                                    int max_iter, double scale)
        {
            const double L = 1.05 * lipschitz_estimate(A);
            const double step = 1.0 / L;
            const RMatrix AtA = A.transpose() * A;
            const RVector Atb = A.transpose() * b;
            const double bb = 0.5 * b.squaredNorm();
            auto objective = [&](const RVector &v) { return 0.5 * v.dot(AtA * v) - v.dot(Atb) + bb; };

            RVector x = x0, y = x0;
            double t = 1.0, f = objective(x);
            SolverReport rep;
            rep.objective_history.push_back(f);
            int it = 0;
            for (; it < max_iter; ++it)
            {
                RVector xn = (y - step * (AtA * y - Atb)).cwiseMax(0.0);
                double fn = objective(xn);
                if (fn > f)
                {
                    // Restart from the last iterate with a plain projected step
                    t = 1.0;
                    xn = (x - step * (AtA * x - Atb)).cwiseMax(0.0);
                    fn = objective(xn);
                    y = xn;
                }
                else
                {
                    double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                    y = xn + ((t - 1.0) / tn) * (xn - x);
                    t = tn;
                }
                x = xn;
                f = std::min(fn, f);
                rep.objective_history.push_back(f);
                if ((it & 15) == 15 && nnls_kkt(x, AtA * x - Atb, scale) <= tol)
                {
                    ++it;
                    break;
                }
            }
            rep.solution = x;
            rep.iterations = it;
            rep.objective = objective(x);
            rep.kkt_residual = nnls_kkt(x, AtA * x - Atb, scale);
            rep.converged = rep.kkt_residual <= tol;
            return rep;
        }
    } // namespace detail

    // min_{s >= 0} |A s - sigma| over real s, solved on the stacked system [Re A; Im A] s = [Re sigma; Im sigma].
    // The KKT residual is scaled by max(1, |A_r^T b|_inf).
    inline SolverReport nnls_solve(const CMatrix &A, const CVector &target, const SolverConfig &cfg = {},
                                   const std::optional<RVector> &initial = std::nullopt)
    {
        if (A.rows() != target.size())
            detail::argument_fail("nnls_solve", "dictionary rows do not match target length");
        const RMatrix Ar = detail::stack_real(A);
        const RVector br = detail::stack_real(target);
        const Eigen::Index n = A.cols();
        RVector x0 = RVector::Zero(n);
        if (initial)
        {
            if (initial->size() != n)
                detail::argument_fail("nnls_solve", "initial guess has wrong length");
            x0 = initial->cwiseMax(0.0);
        }
        const double scale = std::max(1.0, (Ar.transpose() * br).cwiseAbs().maxCoeff());
        const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : static_cast<int>(50 * n);
        if (cfg.method == NnlsMethod::active_set)
            return detail::nnls_active_set(Ar, br, x0, cfg.tol, max_iter, scale);
        return detail::nnls_projected_gradient(Ar, br, x0, cfg.tol, max_iter, scale);
    }

    inline SolverReport nnls_solve(const GridDictionary &dict, const CVector &target, const SolverConfig &cfg = {},
                                   const std::optional<RVector> &initial = std::nullopt)
    {
        return nnls_solve(dict.A, target, cfg, initial);
    }

    struct GroupL21Result
    {
        CMatrix W; // G x T
        SolverReport report;
    };

    namespace detail
    {
        // Row-wise group soft-threshold
        inline CMatrix group_shrink(const CMatrix &V, double thr)
        {
            CMatrix out = V;
            for (Eigen::Index i = 0; i < V.rows(); ++i)
            {
                double nrm = V.row(i).norm();
                out.row(i) *= nrm > thr ? (1.0 - thr / nrm) : 0.0;
            }
            return out;
        }

        inline double l21_norm(const CMatrix &W)
        {
            return W.rowwise().norm().sum();
        }

        // FISTA with monotone restart. Ops provides loss(W), grad(W) and lipschitz().
        template <typename Ops>
        GroupL21Result group_l21_fista(const Ops &ops, Eigen::Index G, Eigen::Index T, double iota, double tol,
                                       int max_iter)
        {
            const double step = 1.0 / (1.05 * ops.lipschitz());
            const double thr = iota * step;
            auto F = [&](const CMatrix &W) { return ops.loss(W) + iota * l21_norm(W); };

            CMatrix W = CMatrix::Zero(G, T), Y = W;
            double t = 1.0, f = F(W);
            GroupL21Result res;
            res.report.objective_history.push_back(f);
            double fp_res = std::numeric_limits<double>::infinity();
            int it = 0;
            for (; it < max_iter; ++it)
            {
                CMatrix Wn = group_shrink(Y - step * ops.grad(Y), thr);
                double fn = F(Wn);
                if (fn > f)
                {
                    t = 1.0;
                    Wn = group_shrink(W - step * ops.grad(W), thr);
                    fn = F(Wn);
                    Y = Wn;
                }
                else
                {
                    double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                    Y = Wn + ((t - 1.0) / tn) * (Wn - W);
                    t = tn;
                }
                W = std::move(Wn);
                f = std::min(f, fn);
                res.report.objective_history.push_back(f);
                if ((it & 7) == 7)
                {
                    fp_res = (W - group_shrink(W - step * ops.grad(W), thr)).cwiseAbs().maxCoeff();
                    if (fp_res <= tol)
                    {
                        ++it;
                        break;
                    }
                }
            }
            fp_res = (W - group_shrink(W - step * ops.grad(W), thr)).cwiseAbs().maxCoeff();
            res.W = std::move(W);
            res.report.iterations = it;
            res.report.objective = F(res.W);
            res.report.kkt_residual = fp_res;
            res.report.converged = fp_res <= tol;
            res.report.solution = res.W.rowwise().norm();
            return res;
        }

        inline double spectral_norm_sq(const CMatrix &A, int iters = 50)
        {
            CVector v = CVector::Constant(A.cols(), 1.0 / std::sqrt(static_cast<double>(A.cols())));
            double lam = 0.0;
            for (int k = 0; k < iters; ++k)
            {
                CVector w = A.adjoint() * (A * v);
                lam = w.norm();
                if (lam == 0.0)
                    return 1.0;
                v = w / lam;
            }
            return lam;
        }
    } // namespace detail

    // min_W 0.5 sum_t |A_t w_t - x_t|^2 + iota |W|_{2,1} for per-snapshot sketched dictionaries
    inline GroupL21Result group_l21_solve(const std::vector<CMatrix> &dicts, const std::vector<CVector> &obs, double iota,
                                          double tol = 1e-6, int max_iter = 20000)
    {
        if (dicts.empty() || dicts.size() != obs.size())
            detail::argument_fail("group_l21_solve", "need T >= 1 dictionaries matching the observations");
        const Eigen::Index G = dicts[0].cols();
        for (std::size_t t = 0; t < dicts.size(); ++t)
            if (dicts[t].cols() != G || dicts[t].rows() != obs[t].size())
                detail::argument_fail("group_l21_solve", "inconsistent dimensions at a snapshot");
        const Eigen::Index T = static_cast<Eigen::Index>(dicts.size());

        struct Ops
        {
            const std::vector<CMatrix> &A;
            const std::vector<CVector> &x;
            double loss(const CMatrix &W) const
            {
                double acc = 0.0;
                for (std::size_t t = 0; t < A.size(); ++t)
                    acc += (A[t] * W.col(static_cast<Eigen::Index>(t)) - x[t]).squaredNorm();
                return 0.5 * acc;
            }
            CMatrix grad(const CMatrix &W) const
            {
                CMatrix g(W.rows(), W.cols());
                for (std::size_t t = 0; t < A.size(); ++t)
                    g.col(static_cast<Eigen::Index>(t)) =
                        A[t].adjoint() * (A[t] * W.col(static_cast<Eigen::Index>(t)) - x[t]);
                return g;
            }
            double lipschitz() const
            {
                double L = 0.0;
                for (const auto &a : A)
                    L = std::max(L, detail::spectral_norm_sq(a));
                return L;
            }
        } ops{dicts, obs};
        return detail::group_l21_fista(ops, G, T, iota, tol, max_iter);
    }

    // Shared-dictionary variant: X holds the observations as columns
    inline GroupL21Result group_l21_solve(const CMatrix &A, const CMatrix &X, double iota, double tol = 1e-6,
                                          int max_iter = 20000)
    {
        if (A.rows() != X.rows() || X.cols() < 1)
            detail::argument_fail("group_l21_solve", "dictionary rows must match observation length");
        struct Ops
        {
            const CMatrix &A;
            const CMatrix &X;
            CMatrix AhA, AhX;
            double loss(const CMatrix &W) const { return 0.5 * (A * W - X).squaredNorm(); }
            CMatrix grad(const CMatrix &W) const { return AhA * W - AhX; }
            double lipschitz() const { return detail::spectral_norm_sq(A); }
        } ops{A, X, A.adjoint() * A, A.adjoint() * X};
        return detail::group_l21_fista(ops, A.cols(), X.cols(), iota, tol, max_iter);
    }

    // Atoms at grid points with masses proportional to the row norms of W
    inline AngularPSF measure_from_weights(const CMatrix &W, const std::vector<double> &grid)
    {
        if (W.rows() != static_cast<Eigen::Index>(grid.size()))
            detail::argument_fail("measure_from_weights", "row count differs from grid size");
        if (!W.allFinite())
            detail::argument_fail("measure_from_weights", "weights are not finite");
        std::vector<Atom> atoms;
        for (Eigen::Index i = 0; i < W.rows(); ++i)
        {
            double nrm = W.row(i).norm();
            if (nrm > 0.0)
                atoms.push_back({grid[static_cast<std::size_t>(i)], nrm});
        }
        if (atoms.empty())
            detail::argument_fail("measure_from_weights", "all-zero weights define no measure");
        return AngularPSF(std::move(atoms), {});
    }

    inline AngularPSF measure_from_nnls(const RVector &s, const std::vector<double> &grid)
    {
        if (s.size() != static_cast<Eigen::Index>(grid.size()))
            detail::argument_fail("measure_from_nnls", "solution length differs from grid size");
        if (s.size() > 0 && s.minCoeff() < 0.0)
            detail::argument_fail("measure_from_nnls", "negative weight");
        std::vector<Atom> atoms;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s[i] > 0.0)
                atoms.push_back({grid[static_cast<std::size_t>(i)], s[i]});
        if (atoms.empty())
            detail::argument_fail("measure_from_nnls", "all-zero solution defines no measure");
        return AngularPSF(std::move(atoms), {});
    }

    inline std::string to_string(SketchKind k)
    {
        switch (k)
        {
        case SketchKind::selection:
            return "selection";
        case SketchKind::gaussian:
            return "gaussian";
        default:
            return "identity";
        }
    }

    inline SolverConfig solver_config_from_json(const nlohmann::json &j)
    {
        SolverConfig c;
        c.tol = j.value("tol", c.tol);
        c.max_iter = j.value("max_iter", c.max_iter);
        c.iota_scale = j.value("iota_scale", c.iota_scale);
        std::string method = j.value("method", std::string("active_set"));
        if (method == "active_set")
            c.method = NnlsMethod::active_set;
        else if (method == "projected_gradient")
            c.method = NnlsMethod::projected_gradient;
        else
            detail::argument_fail("solver_config_from_json", "unknown method '" + method + "'");
        if (j.contains("sketch"))
        {
            const auto &s = j.at("sketch");
            std::string kind = s.value("kind", std::string("identity"));
            if (kind == "identity")
                c.sketch.kind = SketchKind::identity;
            else if (kind == "selection")
                c.sketch.kind = SketchKind::selection;
            else if (kind == "gaussian")
                c.sketch.kind = SketchKind::gaussian;
            else
                detail::argument_fail("solver_config_from_json", "unknown sketch kind '" + kind + "'");
            c.sketch.m = s.value("m", 0);
            c.sketch.noise_variance = s.value("noise_variance", 1.0);
        }
        if (!(c.tol > 0.0) || c.max_iter < 0 || !(c.iota_scale > 0.0) || c.sketch.m < 0 || c.sketch.noise_variance < 0.0)
            detail::argument_fail("solver_config_from_json", "invalid solver parameters");
        return c;
    }

    inline nlohmann::json solver_config_to_json(const SolverConfig &c)
    {
        return {{"tol", c.tol},
                {"max_iter", c.max_iter},
                {"iota_scale", c.iota_scale},
                {"method", c.method == NnlsMethod::active_set ? "active_set" : "projected_gradient"},
                {"sketch", {{"kind", to_string(c.sketch.kind)}, {"m", c.sketch.m}, {"noise_variance", c.sketch.noise_variance}}}};
    }

} // namespace covinterp

#endif
