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

#ifndef COVINTERP_INTERPOLATE_HPP
#define COVINTERP_INTERPOLATE_HPP

#include "covinterp/chebyshev.hpp"
#include "covinterp/covariance.hpp"
#include "covinterp/detail/simplex.hpp"
#include "covinterp/estimators.hpp"
#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/types.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace covinterp
{
    // DL first-column indices that can be interpolated stably
    struct IndexSet
    {
        std::vector<int> indices;
        bool aliasing_warning = false; // set for rho >= 1, where only k = 0 is returned

        bool contains(int k) const { return std::binary_search(indices.begin(), indices.end(), k); }
        std::size_t size() const { return indices.size(); }
    };

    // {k in [M] : k <= M nu, sin(pi rho / 2) g(k / (M nu)) < 1}
    inline IndexSet feasible_index_set(const ArrayConfig &cfg)
    {
        IndexSet out;
        if (cfg.aliased())
        {
            out.indices = {0};
            out.aliasing_warning = true;
            return out;
        }
        const int M = cfg.num_antennas();
        const double Mnu = M * cfg.carrier_ratio();
        const double eta = std::sin(0.5 * pi * cfg.oversampling());
        for (int k = 0; k < M; ++k)
        {
            if (k > Mnu)
                break;
            if (eta * g_alpha(std::min(1.0, k / Mnu)) < 1.0)
                out.indices.push_back(k);
        }
        return out;
    }

    struct DofTradeoff
    {
        double alpha; // fraction of the DL window that is stably recoverable
        double N;     // M nu alpha
        double D;     // rho alpha
    };

    inline DofTradeoff dof_tradeoff(int M, double nu, double rho)
    {
        if (M < 1 || !(nu > 0.0) || !(rho > 0.0 && rho < 1.0))
            detail::domain_fail("dof_tradeoff", "need M >= 1, nu > 0 and rho in (0, 1)");
        double alpha = g_inverse(1.0 / std::sin(0.5 * pi * rho));
        return {alpha, M * nu * alpha, rho * alpha};
    }

    struct TruncationMode
    {
        enum class Kind
        {
            theory_index_set,
            fraction
        };
        Kind kind = Kind::theory_index_set;
        double fraction = 0.0;

        static TruncationMode theory() { return {}; }
        static TruncationMode keep_fraction(double dropped)
        {
            if (!(dropped >= 0.0 && dropped < 1.0))
                detail::argument_fail("TruncationMode", "dropped fraction must lie in [0, 1)");
            return {Kind::fraction, dropped};
        }

        // "theory" or "fraction=<value>"
        static TruncationMode parse(const std::string &text)
        {
            if (text == "theory")
                return theory();
            const std::string prefix = "fraction=";
            if (text.rfind(prefix, 0) == 0)
            {
                std::size_t used = 0;
                double f = std::stod(text.substr(prefix.size()), &used);
                if (used != text.size() - prefix.size())
                    detail::argument_fail("TruncationMode", "malformed fraction '" + text + "'");
                return keep_fraction(f);
            }
            detail::argument_fail("TruncationMode", "expected 'theory' or 'fraction=<f>', got '" + text + "'");
        }

        std::string to_string() const
        {
            if (kind == Kind::theory_index_set)
                return "theory";
            std::ostringstream os;
            os << "fraction=" << fraction;
            return os.str();
        }
    };

    // Indices kept by a truncation mode, ascending
    inline IndexSet kept_indices(const ArrayConfig &cfg, const TruncationMode &mode)
    {
        if (mode.kind == TruncationMode::Kind::theory_index_set)
            return feasible_index_set(cfg);
        IndexSet out;
        const int M = cfg.num_antennas();
        int keep = static_cast<int>(std::ceil((1.0 - mode.fraction) * M - 1e-9));
        keep = std::clamp(keep, 1, M);
        for (int k = 0; k < keep; ++k)
            out.indices.push_back(k);
        return out;
    }

    struct InterpolationResult
    {
        CVector sigma_dl_full;
        CVector sigma_dl_truncated;
        IndexSet kept;
        TruncationMode mode;
    };

    // DL column mu_check(k rho / nu) for all k, then zeroed outside the kept set
    inline InterpolationResult interpolate_dl(const AngularPSF &mu, const ArrayConfig &cfg, const TruncationMode &mode)
    {
        InterpolationResult r;
        r.mode = mode;
        r.sigma_dl_full = sample_on_lattice(mu, ula_lattice(cfg, Band::downlink)).values;
        r.kept = kept_indices(cfg, mode);
        r.sigma_dl_truncated = CVector::Zero(r.sigma_dl_full.size());
        for (int k : r.kept.indices)
            r.sigma_dl_truncated[k] = r.sigma_dl_full[k];
        return r;
    }

    struct Algorithm1Result
    {
        InterpolationResult interpolation;
        ToeplitzCovariance covariance_dl;
        SolverReport report;
        std::optional<AngularPSF> measure;
    };

    // UL column -> NNLS on a G-point grid (default 4M) -> discrete measure -> DL column -> truncation.
    // A column with sigma[0] != 1 is normalized before the solve and rescaled afterwards.
    inline Algorithm1Result run_algorithm1(const CVector &sigma_ul, const ArrayConfig &cfg, const SolverConfig &solver,
                                           const TruncationMode &mode, int G = 0,
                                           const std::optional<RVector> &initial = std::nullopt)
    {
        const int M = cfg.num_antennas();
        if (sigma_ul.size() != M)
            detail::argument_fail("run_algorithm1", "sigma_ul length must equal M");
        double s0 = sigma_ul[0].real();
        if (!(s0 > 0.0))
            detail::argument_fail("run_algorithm1", "sigma_ul[0] must be positive");
        if (G == 0)
            G = 4 * M;
        const GridDictionary dict = build_dictionary(cfg, G);
        CVector target = sigma_ul / s0;
        target[0] = 1.0;
        SolverReport rep = nnls_solve(dict, target, solver, initial);
        AngularPSF mu = measure_from_nnls(rep.solution, dict.grid);
        InterpolationResult interp = interpolate_dl(mu, cfg, mode);
        interp.sigma_dl_full *= s0;
        interp.sigma_dl_truncated *= s0;
        ToeplitzCovariance cov(interp.sigma_dl_truncated);
        return {std::move(interp), std::move(cov), std::move(rep), std::move(mu)};
    }

    struct WidthEstimate
    {
        double width = 0.0;                 // largest |mu1(s) - mu2(s)| found
        double feasibility_residual = 0.0;  // max stacked residual of the NNLS feasibility check
        double slack = 0.0;                 // box half-width used in the LP
    };

    // Lower estimate of the width at probe s: over nonnegative unit-mass weights on a G-point grid whose UL
    // samples match gamma within a small box, maximize and minimize Re(exp(-j phi) mu_check(s)) for 8 directions
    // phi in [0, pi) and report the largest disagreement between the two optimizers.
    inline WidthEstimate empirical_width_lower_bound(const AngularPSF &gamma, const ArrayConfig &cfg, double s, int G,
                                                     double feasibility_tol = 1e-6)
    {
        if (!(s >= 0.0) || !std::isfinite(s))
            detail::domain_fail("empirical_width_lower_bound", "probe must be finite and nonnegative");
        const GridDictionary dict = build_dictionary(cfg, G);
        const CVector sigma = sample_on_lattice(gamma, ula_lattice(cfg, Band::uplink)).values;

        SolverConfig sc;
        sc.tol = 1e-12;
        SolverReport rep = nnls_solve(dict, sigma, sc);
        const RMatrix Ar = detail::stack_real(dict.A);
        const RVector br = detail::stack_real(sigma);
        WidthEstimate out;
        out.feasibility_residual = (Ar * rep.solution - br).cwiseAbs().maxCoeff();
        if (out.feasibility_residual > feasibility_tol)
            detail::domain_fail("empirical_width_lower_bound", "UL samples are not reproducible on the grid");
        out.slack = std::max(1e-9, 2.0 * out.feasibility_residual);

        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < Ar.rows(); ++i)
            if (Ar.row(i).cwiseAbs().maxCoeff() > 0.0)
                rows.push_back(i);
        const auto nr = static_cast<Eigen::Index>(rows.size());
        RMatrix A_ub(2 * nr, G);
        RVector b_ub(2 * nr);
        for (Eigen::Index r = 0; r < nr; ++r)
        {
            A_ub.row(r) = Ar.row(rows[static_cast<std::size_t>(r)]);
            b_ub[r] = br[rows[static_cast<std::size_t>(r)]] + out.slack;
            A_ub.row(nr + r) = -Ar.row(rows[static_cast<std::size_t>(r)]);
            b_ub[nr + r] = -br[rows[static_cast<std::size_t>(r)]] + out.slack;
        }
        const RMatrix A_eq = RMatrix::Ones(1, G);
        const RVector b_eq = RVector::Ones(1);

        CVector probe(G);
        for (int i = 0; i < G; ++i)
            probe[i] = detail::expj_pi(dict.grid[static_cast<std::size_t>(i)] * s);

        constexpr int directions = 8;
        for (int d = 0; d < directions; ++d)
        {
            const cplx rot = std::polar(1.0, -pi * d / directions);
            const RVector c = (rot * probe).real();
            auto hi = detail::simplex_maximize(c, A_ub, b_ub, A_eq, b_eq);
            auto lo = detail::simplex_maximize(-c, A_ub, b_ub, A_eq, b_eq);
            if (hi.status != detail::LpStatus::optimal || lo.status != detail::LpStatus::optimal)
                continue;
            cplx diff = probe.transpose() * (hi.x - lo.x).cast<cplx>();
            out.width = std::max(out.width, std::abs(diff));
        }
        return out;
    }

    // CSV rows (k, re_full, im_full, re_trunc, im_trunc, kept_flag, abs_error); abs_error is empty without truth
    inline void write_interpolation_csv(std::ostream &os, const InterpolationResult &r,
                                        const std::optional<CVector> &truth = std::nullopt)
    {
        os << "k,re_full,im_full,re_trunc,im_trunc,kept_flag,abs_error\n" << std::setprecision(17);
        for (Eigen::Index k = 0; k < r.sigma_dl_full.size(); ++k)
        {
            bool kept = r.kept.contains(static_cast<int>(k));
            os << k << ',' << r.sigma_dl_full[k].real() << ',' << r.sigma_dl_full[k].imag() << ','
               << r.sigma_dl_truncated[k].real() << ',' << r.sigma_dl_truncated[k].imag() << ',' << (kept ? 1 : 0) << ',';
            if (truth)
                os << std::abs(r.sigma_dl_full[k] - (*truth)[k]);
            os << '\n';
        }
    }

} // namespace covinterp

#endif
