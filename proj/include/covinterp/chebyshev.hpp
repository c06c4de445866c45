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

#ifndef COVINTERP_CHEBYSHEV_HPP
#define COVINTERP_CHEBYSHEV_HPP

#include "covinterp/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace covinterp
{
    namespace detail
    {
        inline void check_order(const char *where, double s, int M)
        {
            if (M < 1)
                argument_fail(where, "order M must be positive");
            if (!(s >= 0.0) || !std::isfinite(s))
                domain_fail(where, "parameter s must be finite and nonnegative");
            if (s > static_cast<double>(M))
                domain_fail(where, "parameter s must not exceed M");
        }

        inline void check_eta(const char *where, double eta)
        {
            if (!(eta > 0.0 && eta < 1.0))
                domain_fail(where, "eta must lie in (0, 1)");
        }

        // a_{2M}(s) via the product recursion in extended precision
        inline double a2m(double s, int M)
        {
            long double a = 1.0L;
            const long double two_s = 2.0L * static_cast<long double>(s);
            for (int n = 0; n < M; ++n)
            {
                long double two_n = 2.0L * n;
                a *= (two_n - two_s) * (two_n + two_s) / ((two_n + 1.0L) * (two_n + 2.0L));
            }
            return static_cast<double>(a);
        }

        // Error-free transformations for compensated Horner evaluation
        inline void two_sum(double a, double b, double &s, double &e)
        {
            s = a + b;
            double z = s - a;
            e = (a - (s - z)) + (b - z);
        }

        inline void two_prod(double a, double b, double &p, double &e)
        {
            p = a * b;
            e = std::fma(a, b, -p);
        }

        // Clamps s / rho to M when the quotient overshoots by rounding only
        inline double lattice_ratio(double s, double rho, int M)
        {
            double r = s / rho;
            if (r > M && r <= M * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
                r = static_cast<double>(M);
            return r;
        }

        inline void check_probe(const char *where, double s, int M, double rho)
        {
            if (M < 1)
                argument_fail(where, "order M must be positive");
            if (!(rho > 0.0 && rho < 1.0))
                domain_fail(where, "rho must lie in (0, 1)");
            if (!(s >= 0.0) || detail::lattice_ratio(s, rho, M) > M)
                domain_fail(where, "probe s must lie in [0, M rho]");
        }
    } // namespace detail

    // Even solution of the Chebyshev equation (1-t^2)y'' - t y' + (2s)^2 y = 0 with y(0) = 1,
    // i.e. cos(2s asin t), expanded as sum_k a_{2k}(s) t^{2k}.
    class ChebyshevSeries
    {
    public:
        ChebyshevSeries(double s, int M) : s_(s), M_(M)
        {
            detail::check_order("cheb_coeffs", s, M);
            coeffs_.resize(static_cast<std::size_t>(M) + 1);
            long double a = 1.0L;
            const long double two_s = 2.0L * static_cast<long double>(s);
            coeffs_[0] = 1.0;
            for (int k = 0; k < M; ++k)
            {
                long double two_k = 2.0L * k;
                a *= (two_k - two_s) * (two_k + two_s) / ((two_k + 1.0L) * (two_k + 2.0L));
                coeffs_[static_cast<std::size_t>(k) + 1] = static_cast<double>(a);
            }
        }

        double parameter() const { return s_; }
        int order() const { return M_; }

        // a_{2k}(s) for k = 0..M
        double coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
        const std::vector<double> &coeffs() const { return coeffs_; }

        // First omitted coefficient a_{2M}(s)
        double tail_coeff() const { return coeffs_.back(); }

    private:
        double s_;
        int M_;
        std::vector<double> coeffs_;
    };

    inline ChebyshevSeries cheb_coeffs(double s, int M)
    {
        return ChebyshevSeries(s, M);
    }

    // Partial sum y_{e,M}(t) = sum_{k<M} a_{2k} t^{2k}, compensated Horner in t
    inline double even_solution_eval(const ChebyshevSeries &series, double t)
    {
        if (!(std::abs(t) < 1.0))
            detail::domain_fail("even_solution_eval", "|t| must be below 1");
        const int M = series.order();
        const int degree = 2 * (M - 1);
        auto c = [&](int i) { return (i % 2 == 0) ? series.coeff(i / 2) : 0.0; };
        double p = c(degree);
        double err = 0.0;
        for (int i = degree - 1; i >= 0; --i)
        {
            double prod, pi_err, sum, sigma;
            detail::two_prod(p, t, prod, pi_err);
            detail::two_sum(prod, c(i), sum, sigma);
            p = sum;
            err = err * t + (pi_err + sigma);
        }
        return p + err;
    }

    // |a_{2M}(s)| eta^{2M} / (1 - eta^2)
    inline double truncation_bound(double s, int M, double eta)
    {
        detail::check_order("truncation_bound", s, M);
        detail::check_eta("truncation_bound", eta);
        return std::abs(detail::a2m(s, M)) * std::pow(eta, 2.0 * M) / (1.0 - eta * eta);
    }

    // 2 |a_{2M}(s)| eta^{2M-1} (M - (M-1) eta^2) / (1 - eta^2)^2
    inline double derivative_bound(double s, int M, double eta)
    {
        detail::check_order("derivative_bound", s, M);
        detail::check_eta("derivative_bound", eta);
        double q = 1.0 - eta * eta;
        return 2.0 * std::abs(detail::a2m(s, M)) * std::pow(eta, 2.0 * M - 1.0) * (M - (M - 1) * eta * eta) / (q * q);
    }

    // f(alpha) = ((1+alpha) log(1+alpha) + (1-alpha) log(1-alpha)) / 2, natural log
    inline double f_alpha(double alpha)
    {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            detail::domain_fail("f_alpha", "alpha must lie in [0, 1]");
        auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
        return 0.5 * (xlogx(1.0 + alpha) + xlogx(1.0 - alpha));
    }

    inline double g_alpha(double alpha)
    {
        return std::exp(f_alpha(alpha));
    }

    // Inverse of g on [1, 2] by bisection; y > 2 maps to 1 and y < 1 maps to 0
    inline double g_inverse(double y)
    {
        if (std::isnan(y))
            detail::domain_fail("g_inverse", "argument is NaN");
        if (y >= 2.0)
            return 1.0;
        if (y <= 1.0)
            return 0.0;
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-14)
        {
            double mid = 0.5 * (lo + hi);
            (g_alpha(mid) < y ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // h(s) = log|a_{2M}(s)| / (2M) from the product form
    inline double finite_m_exponent(double s, int M)
    {
        detail::check_order("finite_m_exponent", s, M);
        if (s == std::round(s))
            detail::domain_fail("finite_m_exponent", "s must not be an integer");
        double acc = 0.0;
        for (int n = 0; n < M; ++n)
        {
            double two_n = 2.0 * n;
            acc += std::log(std::abs((two_n - 2.0 * s) * (two_n + 2.0 * s))) - std::log((two_n + 1.0) * (two_n + 2.0));
        }
        return acc / (2.0 * M);
    }

    // f_sum(s) = 1 + (1/2M) sum_{n<M} log|(n/M)^2 - (s/M)^2|
    inline double exponent_riemann_sum(double s, int M)
    {
        detail::check_order("exponent_riemann_sum", s, M);
        if (s == std::round(s) && s < M)
            detail::domain_fail("exponent_riemann_sum", "s must not be an integer below M");
        double acc = 0.0;
        for (int n = 0; n < M; ++n)
        {
            double u = static_cast<double>(n) / M, v = s / M;
            acc += std::log(std::abs((u - v) * (u + v)));
        }
        return 1.0 + acc / (2.0 * M);
    }

    // Lower and upper Stirling brackets for finite_m_exponent
    struct ExponentBracket
    {
        double lower;
        double upper;
    };

    // From sqrt(2 pi l)(l/e)^l <= l! <= e sqrt(l)(l/e)^l with l = 2M:
    //   f_sum(s) - log(2 e^2 M) / (4M) <= h(s) <= f_sum(s) - log(4 pi M) / (4M)
    inline ExponentBracket stirling_bracket(double s, int M)
    {
        double fs = exponent_riemann_sum(s, M);
        return {fs - std::log(2.0 * std::exp(2.0) * M) / (4.0 * M), fs - std::log(4.0 * pi * M) / (4.0 * M)};
    }

    // Real-part minimax error bound at probe s with eta = sin(pi rho / 2)
    inline double minimax_real_bound(double s, int M, double rho)
    {
        detail::check_probe("minimax_real_bound", s, M, rho);
        double eta = std::sin(0.5 * pi * rho);
        return std::abs(detail::a2m(detail::lattice_ratio(s, rho, M), M)) * std::pow(eta, 2.0 * M) / (1.0 - eta * eta);
    }

    // Imaginary-part minimax error bound; zero at s = 0 where the odd part vanishes
    inline double minimax_imag_bound(double s, int M, double rho)
    {
        detail::check_probe("minimax_imag_bound", s, M, rho);
        if (s == 0.0)
            return 0.0;
        double eta = std::sin(0.5 * pi * rho);
        double q = 1.0 - eta * eta;
        return std::abs(detail::a2m(detail::lattice_ratio(s, rho, M), M)) * std::pow(eta, 2.0 * M - 1.0) *
               (M - (M - 1) * eta * eta) / (s * q * q);
    }

    struct WidthBound
    {
        double probe = 0.0;
        double bound = 0.0;
        double real_part_bound = 0.0;
        double imag_part_bound = 0.0;
        double asymptotic = 0.0; // (sin(pi rho/2) g(s/(M rho)))^{2M}, constant set to 1
    };

    inline WidthBound width_bound(double s, int M, double rho)
    {
        WidthBound w;
        w.probe = s;
        w.real_part_bound = minimax_real_bound(s, M, rho);
        w.imag_part_bound = minimax_imag_bound(s, M, rho);
        w.bound = std::min(2.0 * (w.real_part_bound + w.imag_part_bound), 2.0);
        double alpha = std::min(detail::lattice_ratio(s, rho, M) / M, 1.0);
        w.asymptotic = std::min(std::pow(std::sin(0.5 * pi * rho) * g_alpha(alpha), 2.0 * M), 2.0);
        return w;
    }

} // namespace covinterp

#endif
