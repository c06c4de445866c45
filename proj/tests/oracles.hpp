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

// Independent reference computations used only by the tests. None of these call into the
// library's numerical kernels.

#ifndef COVINTERP_TESTS_ORACLES_HPP
#define COVINTERP_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle
{
    using cplx = std::complex<double>;
    inline constexpr double pi = std::numbers::pi;

    // ----- adaptive Gauss-Kronrod (7/15) quadrature ------------------------------------------

    namespace gk
    {
        inline constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                         0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                         0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                         0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
        inline constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                         0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                         0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                         0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                         0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    } // namespace gk

    // One G7/K15 panel; returns the Kronrod estimate and sets err to |K15 - G7|
    inline double gk15(const std::function<double(double)> &f, double a, double b, double &err)
    {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        const double fc = f(c);
        double k = fc * gk::wk[7], g = fc * gk::wg[3];
        for (int j = 0; j < 7; ++j)
        {
            double v = f(c - h * gk::xk[j]) + f(c + h * gk::xk[j]);
            k += gk::wk[j] * v;
            if (j % 2 == 1)
                g += gk::wg[j / 2] * v;
        }
        err = std::abs((k - g) * h);
        return k * h;
    }

    inline double integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-12, int depth = 0)
    {
        double err = 0.0;
        double v = gk15(f, a, b, err);
        if (err <= tol || depth > 40)
            return v;
        double m = 0.5 * (a + b);
        return integrate(f, a, m, 0.5 * tol, depth + 1) + integrate(f, m, b, 0.5 * tol, depth + 1);
    }

    // int_a^b density exp(j pi xi x) dxi by quadrature
    inline cplx rect_transform(double a, double b, double density, double x)
    {
        double re = integrate([&](double xi) { return density * std::cos(pi * xi * x); }, a, b);
        double im = integrate([&](double xi) { return density * std::sin(pi * xi * x); }, a, b);
        return {re, im};
    }

    // ----- cyclic Jacobi eigenvalues of a Hermitian matrix via its real-symmetric embedding ---

    // Eigenvalues of real symmetric S, ascending
    inline std::vector<double> jacobi_symmetric(Eigen::MatrixXd S, double tol = 1e-15, int max_sweeps = 100)
    {
        const Eigen::Index n = S.rows();
        for (int sweep = 0; sweep < max_sweeps; ++sweep)
        {
            double off = 0.0;
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q)
                    off += S(p, q) * S(p, q);
            if (std::sqrt(off) <= tol * S.norm())
                break;
            for (Eigen::Index p = 0; p < n; ++p)
            {
                for (Eigen::Index q = p + 1; q < n; ++q)
                {
                    if (S(p, q) == 0.0)
                        continue;
                    double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                    double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        double skp = S(k, p), skq = S(k, q);
                        S(k, p) = c * skp - s * skq;
                        S(k, q) = s * skp + c * skq;
                    }
                    for (Eigen::Index k = 0; k < n; ++k)
                    {
                        double spk = S(p, k), sqk = S(q, k);
                        S(p, k) = c * spk - s * sqk;
                        S(q, k) = s * spk + c * sqk;
                    }
                }
            }
        }
        std::vector<double> ev(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            ev[static_cast<std::size_t>(i)] = S(i, i);
        std::sort(ev.begin(), ev.end());
        return ev;
    }

    // Eigenvalues of Hermitian H, descending. The embedding [[Re, -Im], [Im, Re]] doubles every eigenvalue.
    inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd &H)
    {
        const Eigen::Index n = H.rows();
        Eigen::MatrixXd S(2 * n, 2 * n);
        S << H.real(), -H.imag(), H.imag(), H.real();
        std::vector<double> all = jacobi_symmetric(S);
        std::vector<double> ev;
        for (std::size_t i = 0; i < all.size(); i += 2)
            ev.push_back(0.5 * (all[i] + all[i + 1]));
        std::reverse(ev.begin(), ev.end());
        return ev;
    }

    // ----- Lawson IRLS for discrete minimax approximation --------------------------------------

    // Approximates min_c max_i |f_i - (B c)_i| by Lawson's reweighting; returns the max residual of
    // the final iterate, which upper-bounds the discrete minimax value.
    inline double lawson_minimax(const Eigen::MatrixXd &B, const Eigen::VectorXd &f, int iters = 3000)
    {
        const Eigen::Index n = B.rows();
        Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        double best = std::numeric_limits<double>::infinity();
        for (int it = 0; it < iters; ++it)
        {
            Eigen::VectorXd sw = w.cwiseSqrt();
            Eigen::VectorXd c = (sw.asDiagonal() * B).colPivHouseholderQr().solve(sw.cwiseProduct(f));
            Eigen::VectorXd r = (f - B * c).cwiseAbs();
            best = std::min(best, r.maxCoeff());
            w = w.cwiseProduct(r);
            double s = w.sum();
            if (!(s > 0.0))
                break;
            w /= s;
        }
        return best;
    }

    // ----- misc ---------------------------------------------------------------------------------

    // cos(2 s asin t)
    inline double even_solution(double s, double t)
    {
        return std::cos(2.0 * s * std::asin(t));
    }

    // Plain product form of a_{2k}(s), no compensation
    inline double coeff(double s, int k)
    {
        double a = 1.0;
        for (int n = 0; n < k; ++n)
            a *= ((2.0 * n) * (2.0 * n) - 4.0 * s * s) / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
        return a;
    }

    // Tail E_M(t) = sum_{k >= M} a_{2k}(s) t^{2k}, summed term by term in extended precision. All terms share
    // one sign when M > s, so the sum is free of cancellation.
    inline double even_tail(double s, int M, double t)
    {
        long double a = 1.0L, t2 = static_cast<long double>(t) * t, p = 1.0L;
        for (int n = 0; n < M; ++n)
        {
            a *= (4.0L * n * n - 4.0L * s * s) / ((2.0L * n + 1.0L) * (2.0L * n + 2.0L));
            p *= t2;
        }
        long double sum = 0.0L;
        for (int k = M; k < 200000; ++k)
        {
            long double term = a * p;
            sum += term;
            if (std::abs(term) <= 1e-30L * std::abs(sum) || term == 0.0L)
                break;
            a *= (4.0L * k * k - 4.0L * s * s) / ((2.0L * k + 1.0L) * (2.0L * k + 2.0L));
            p *= t2;
        }
        return static_cast<double>(sum);
    }

    // a_{2k}(s) for non-integer s through the Gamma-function closed form
    //   a_{2k}(s) = 4^k Gamma(k-s) Gamma(k+s) / (Gamma(-s) Gamma(s) (2k)!)
    inline double coeff_gamma(double s, int k)
    {
        int sign = 1;
        auto lg = [&](double x) {
            if (x < 0.0 && static_cast<long>(std::ceil(-x)) % 2 == 1)
                sign = -sign;
            return std::lgamma(x);
        };
        double num = k * std::log(4.0) + lg(k - s) + lg(k + s);
        double den = lg(-s) + lg(s) + std::lgamma(2.0 * k + 1.0);
        return sign * std::exp(num - den);
    }
} // namespace oracle

#endif
