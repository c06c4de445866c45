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

#ifndef COVINTERP_COVARIANCE_HPP
#define COVINTERP_COVARIANCE_HPP

#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/types.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace covinterp
{
    // Hermitian Toeplitz matrix stored as its first column
    class ToeplitzCovariance
    {
    public:
        explicit ToeplitzCovariance(CVector first_column) : sigma_(std::move(first_column))
        {
            if (sigma_.size() < 1)
                detail::argument_fail("ToeplitzCovariance", "first column is empty");
            if (!sigma_.allFinite())
                detail::argument_fail("ToeplitzCovariance", "first column has non-finite entries");
            double s0 = sigma_[0].real();
            if (!(s0 > 0.0) || std::abs(sigma_[0].imag()) > 1e-10 * s0)
                detail::argument_fail("ToeplitzCovariance", "sigma[0] must be real and positive");
            sigma_[0] = s0;
        }

        Eigen::Index size() const { return sigma_.size(); }
        const CVector &first_column() const { return sigma_; }
        double trace() const { return static_cast<double>(sigma_.size()) * sigma_[0].real(); }

        // T(k, l) = sigma[k - l], sigma[-m] = conj(sigma[m])
        CMatrix matrix() const
        {
            const Eigen::Index M = sigma_.size();
            CMatrix T(M, M);
            for (Eigen::Index l = 0; l < M; ++l)
                for (Eigen::Index k = 0; k < M; ++k)
                    T(k, l) = k >= l ? sigma_[k - l] : std::conj(sigma_[l - k]);
            return T;
        }

    private:
        CVector sigma_;
    };

    inline ToeplitzCovariance covariance_from_psf(const AngularPSF &psf, const ArrayConfig &cfg, Band band)
    {
        return ToeplitzCovariance(sample_on_lattice(psf, ula_lattice(cfg, band)).values);
    }

    namespace detail
    {
        inline void check_hermitian(const char *where, const CMatrix &C, double tol = 1e-8)
        {
            if (C.rows() != C.cols() || C.rows() == 0)
                argument_fail(where, "matrix must be square and non-empty");
            double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
            if ((C - C.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
                argument_fail(where, "matrix is not Hermitian");
        }
    } // namespace detail

    // Projection onto Toeplitz structure: sigma[m] is the mean of the m-th subdiagonal
    inline ToeplitzCovariance toeplitzify(const CMatrix &C)
    {
        detail::check_hermitian("toeplitzify", C);
        const Eigen::Index M = C.rows();
        CVector sigma(M);
        for (Eigen::Index m = 0; m < M; ++m)
            sigma[m] = C.diagonal(-m).mean();
        sigma[0] = sigma[0].real();
        return ToeplitzCovariance(sigma);
    }

    // Nonnegative weights summing to one. The ordering is the caller's (eigen-order or basis order).
    class PowerDistribution
    {
    public:
        PowerDistribution() = default;

        // Normalizes raw nonnegative powers; entries above -1e-12 * total are clamped to zero
        static PowerDistribution from_powers(const RVector &raw)
        {
            if (raw.size() == 0)
                detail::argument_fail("PowerDistribution", "empty vector");
            double total = raw.sum();
            if (!(total > 0.0) || !std::isfinite(total))
                detail::argument_fail("PowerDistribution", "total power must be positive");
            if (raw.minCoeff() < -1e-12 * total)
                detail::argument_fail("PowerDistribution", "negative power entry");
            RVector v = raw.cwiseMax(0.0);
            PowerDistribution p;
            p.values_ = v / v.sum();
            return p;
        }

        const RVector &values() const { return values_; }
        Eigen::Index size() const { return values_.size(); }
        double operator[](Eigen::Index i) const { return values_[i]; }

        // eta(k) = sum of the first k entries, k = 1..M
        RVector cumulative() const
        {
            RVector c(values_.size());
            double acc = 0.0;
            for (Eigen::Index i = 0; i < values_.size(); ++i)
                c[i] = (acc += values_[i]);
            return c;
        }

        bool is_sorted() const
        {
            for (Eigen::Index i = 1; i < values_.size(); ++i)
                if (values_[i] > values_[i - 1])
                    return false;
            return true;
        }

    private:
        RVector values_;
    };

    struct EigenDecomposition
    {
        CMatrix basis;      // columns are eigenvectors
        RVector eigenvalues; // non-increasing
    };

    // Hermitian eigendecomposition sorted by eigenvalue (descending). Each eigenvector is scaled so that
    // its first component with modulus above 1e-12 is real and positive.
    inline EigenDecomposition eigen_basis(const CMatrix &H)
    {
        detail::check_hermitian("eigen_basis", H);
        CMatrix Hs = 0.5 * (H + H.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigen_basis: eigensolver failed");
        const Eigen::Index M = H.rows();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        const RVector &ev = es.eigenvalues();
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ev[a] > ev[b]; });

        EigenDecomposition out;
        out.basis.resize(M, M);
        out.eigenvalues.resize(M);
        for (Eigen::Index j = 0; j < M; ++j)
        {
            CVector u = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
            for (Eigen::Index i = 0; i < M; ++i)
            {
                if (std::abs(u[i]) > 1e-12)
                {
                    u *= std::conj(u[i]) / std::abs(u[i]);
                    break;
                }
            }
            out.basis.col(j) = u;
            out.eigenvalues[j] = ev[order[static_cast<std::size_t>(j)]];
        }
        return out;
    }

    struct EigenPower
    {
        CMatrix basis;
        PowerDistribution p;
    };

    // Eigen-basis and normalized eigen-power of a PSD Toeplitz covariance
    inline EigenPower eigen_power(const ToeplitzCovariance &cov)
    {
        EigenDecomposition ed = eigen_basis(cov.matrix());
        double lmin = ed.eigenvalues.minCoeff();
        if (lmin < -1e-8 * cov.trace())
            detail::argument_fail("eigen_power", "covariance is indefinite beyond tolerance");
        RVector lam = ed.eigenvalues.cwiseMax(0.0);
        return {std::move(ed.basis), PowerDistribution::from_powers(lam)};
    }

    // Power of the true covariance captured by each column of a unitary basis, normalized, in basis order
    inline PowerDistribution captured_power(const ToeplitzCovariance &true_cov, const CMatrix &basis)
    {
        const Eigen::Index M = true_cov.size();
        if (basis.rows() != M || basis.cols() != M)
            detail::argument_fail("captured_power", "basis dimension mismatch");
        CMatrix gram = basis.adjoint() * basis;
        if ((gram - CMatrix::Identity(M, M)).cwiseAbs().maxCoeff() > 1e-8)
            detail::argument_fail("captured_power", "basis is not unitary");
        CMatrix S = true_cov.matrix();
        RVector q = (basis.adjoint() * S * basis).diagonal().real();
        return PowerDistribution::from_powers(q.cwiseMax(0.0));
    }

    // max_k (eta_p(k) - eta_phat(k)) / eta_p(k), clamped at zero
    inline double distortion(const PowerDistribution &p, const PowerDistribution &p_hat)
    {
        if (p.size() != p_hat.size() || p.size() == 0)
            detail::argument_fail("distortion", "power distributions differ in length");
        RVector cp = p.cumulative(), cq = p_hat.cumulative();
        double worst = 0.0;
        for (Eigen::Index k = 0; k < cp.size(); ++k)
            if (cp[k] > 0.0)
                worst = std::max(worst, (cp[k] - cq[k]) / cp[k]);
        return std::min(worst, 1.0);
    }

    namespace detail
    {
        // |sin(M x)| / (M |sin x|) with the x = 0 limit
        inline double dirichlet_ratio(int M, double x)
        {
            double den = M * std::sin(x);
            if (den == 0.0)
                return 1.0;
            return std::min(1.0, std::abs(std::sin(M * x) / den));
        }
    } // namespace detail

    // LoS attenuation |sin(M pi (1-nu) r)| / (M |sin(pi (1-nu) r)|) with r = sin(theta0) / sin(theta_max)
    inline double los_attenuation(double nu, int M, double theta0, double theta_max)
    {
        if (M < 1)
            detail::argument_fail("los_attenuation", "M must be positive");
        if (!(nu > 0.0 && nu < 2.0))
            detail::argument_fail("los_attenuation", "nu must lie in (0, 2)");
        if (!(theta_max > 0.0 && theta_max <= pi / 2.0) || !(std::abs(theta0) <= theta_max))
            detail::domain_fail("los_attenuation", "need |theta0| <= theta_max <= pi/2");
        double r = std::sin(theta0) / std::sin(theta_max);
        return detail::dirichlet_ratio(M, pi * (1.0 - nu) * r);
    }

    // |a_ul(xi)^H a_dl(xi)| / M for a given array; coincides with los_attenuation when rho = 2 nu
    inline double los_attenuation_exact(const ArrayConfig &cfg, double theta0)
    {
        if (!(std::abs(theta0) <= cfg.theta_max()))
            detail::domain_fail("los_attenuation_exact", "need |theta0| <= theta_max");
        double r = xi_from_theta(theta0, cfg.theta_max());
        double psi = pi * cfg.oversampling() * r * (1.0 / cfg.carrier_ratio() - 1.0);
        return detail::dirichlet_ratio(cfg.num_antennas(), 0.5 * psi);
    }

    // CSV "index,re,im" with a header line
    inline void write_column_csv(std::ostream &os, const CVector &sigma)
    {
        os << "index,re,im\n" << std::setprecision(17);
        for (Eigen::Index k = 0; k < sigma.size(); ++k)
            os << k << ',' << sigma[k].real() << ',' << sigma[k].imag() << '\n';
    }

    // Reads "index,re,im" rows; a non-numeric first line is treated as a header. Indices must be 0..M-1.
    inline CVector read_column_csv(std::istream &is)
    {
        std::vector<std::pair<long, cplx>> rows;
        std::string line;
        bool first = true;
        while (std::getline(is, line))
        {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos)
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            long idx;
            double re, im;
            if (!(ls >> idx >> re >> im))
            {
                if (first)
                {
                    first = false;
                    continue;
                }
                throw std::runtime_error("read_column_csv: malformed row '" + line + "'");
            }
            first = false;
            rows.emplace_back(idx, cplx(re, im));
        }
        CVector out(static_cast<Eigen::Index>(rows.size()));
        std::vector<bool> seen(rows.size(), false);
        for (const auto &[idx, v] : rows)
        {
            if (idx < 0 || idx >= static_cast<long>(rows.size()) || seen[static_cast<std::size_t>(idx)])
                throw std::runtime_error("read_column_csv: indices must be a permutation of 0..M-1");
            seen[static_cast<std::size_t>(idx)] = true;
            out[idx] = v;
        }
        return out;
    }

    // Full matrix as CSV grid, each cell "re+imj"
    inline void write_matrix_csv(std::ostream &os, const CMatrix &A)
    {
        os << std::setprecision(17);
        for (Eigen::Index i = 0; i < A.rows(); ++i)
        {
            for (Eigen::Index j = 0; j < A.cols(); ++j)
            {
                if (j)
                    os << ',';
                os << A(i, j).real() << (A(i, j).imag() < 0 ? "" : "+") << A(i, j).imag() << 'j';
            }
            os << '\n';
        }
    }

} // namespace covinterp

#endif
