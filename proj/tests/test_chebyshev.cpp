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

#include "covinterp/chebyshev.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace covinterp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    double grid_sup_error(double s, int M, double eta, int points = 2001)
    {
        double worst = 0.0;
        for (int i = 0; i < points; ++i)
        {
            double t = -eta + 2.0 * eta * i / (points - 1);
            worst = std::max(worst, std::abs(oracle::even_tail(s, M, t)));
        }
        return worst;
    }

    double grid_sup_derivative(double s, int M, double eta, int points = 2001)
    {
        const double h = 1e-6;
        double worst = 0.0;
        for (int i = 0; i < points; ++i)
        {
            double t = -eta + h + 2.0 * (eta - h) * i / (points - 1);
            double d = (oracle::even_tail(s, M, t + h) - oracle::even_tail(s, M, t - h)) / (2.0 * h);
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    }

    // Best approximation of cos(pi s xi) (or sin) from the UL lattice harmonics on a fine xi grid
    double discrete_minimax(double s, int M, double rho, bool imaginary)
    {
        const int n = 1201;
        const int first = imaginary ? 1 : 0;
        Eigen::MatrixXd B(n, M - first);
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i)
        {
            double xi = static_cast<double>(i) / (n - 1);
            for (int k = first; k < M; ++k)
                B(i, k - first) = imaginary ? std::sin(pi * k * rho * xi) : std::cos(pi * k * rho * xi);
            f[i] = imaginary ? std::sin(pi * s * xi) : std::cos(pi * s * xi);
        }
        return oracle::lawson_minimax(B, f);
    }
} // namespace

TEST_CASE("cheb_coeffs examples", "[chebyshev]")
{
    ChebyshevSeries z = cheb_coeffs(0.0, 6);
    CHECK(z.coeff(0) == 1.0);
    for (int k = 1; k <= 6; ++k)
        CHECK(z.coeff(k) == 0.0);

    ChebyshevSeries one = cheb_coeffs(1.0, 4);
    CHECK(one.coeff(1) == -2.0);
    CHECK(one.coeff(2) == 0.0);

    for (int M = 1; M <= 20; ++M)
        for (int s = 0; s < M; ++s)
        {
            CHECK(cheb_coeffs(s, M).tail_coeff() == 0.0);
            CHECK(truncation_bound(s, M, 0.7) == 0.0);
        }

    CHECK_THROWS_AS(cheb_coeffs(5.5, 5), std::domain_error);
    CHECK_THROWS_AS(cheb_coeffs(-0.1, 5), std::domain_error);
    CHECK_THROWS_AS(cheb_coeffs(1.0, 0), std::invalid_argument);
}

TEST_CASE("coefficients satisfy the recursion and the Gamma closed form", "[chebyshev]")
{
    std::mt19937_64 rng(3);
    for (int M : {8, 32, 128, 256})
    {
        std::uniform_real_distribution<double> S(0.0, M);
        for (int trial = 0; trial < 10; ++trial)
        {
            double s = S(rng);
            ChebyshevSeries c = cheb_coeffs(s, M);
            for (int k = 0; k < M; ++k)
            {
                double ratio = (2.0 * k - 2.0 * s) * (2.0 * k + 2.0 * s) / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
                CHECK(std::abs(c.coeff(k + 1) - c.coeff(k) * ratio) <= 1e-15 * std::abs(c.coeff(k) * ratio) + 1e-300);
            }
            for (int k : {1, M / 2, M})
                CHECK_THAT(c.coeff(k), WithinRel(oracle::coeff_gamma(s, k), 1e-9));
        }
    }
}

TEST_CASE("coefficient sign and magnitude pattern beyond s", "[chebyshev]")
{
    // For non-integer s every a_{2k} with k > s carries the sign of the ceil(s) negative factors
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> S(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        double s = S(rng);
        const int M = 32;
        ChebyshevSeries c = cheb_coeffs(s, M);
        const double expected = (static_cast<long>(std::ceil(s)) % 2 == 0) ? 1.0 : -1.0;
        for (int k = static_cast<int>(std::ceil(s)); k <= M; ++k)
            CHECK(c.coeff(k) * expected > 0.0);
        // |a_{2k}| non-increasing from k = M on, checked with the extended series
        double prev = std::abs(c.tail_coeff());
        for (int k = M + 1; k <= M + 40; ++k)
        {
            double cur = std::abs(oracle::coeff(s, k));
            CHECK(cur <= prev * (1.0 + 1e-12));
            prev = cur;
        }
    }
}

TEST_CASE("even_solution_eval examples", "[chebyshev]")
{
    CHECK(even_solution_eval(cheb_coeffs(0.0, 5), 0.5) == 1.0);
    CHECK_THAT(even_solution_eval(cheb_coeffs(1.0, 3), 0.3), WithinAbs(0.82, 1e-15));
    CHECK_THAT(even_solution_eval(cheb_coeffs(1.0, 3), 0.3), WithinAbs(oracle::even_solution(1.0, 0.3), 1e-15));

    const double partial = even_solution_eval(cheb_coeffs(3.7, 20), 0.6);
    CHECK(std::abs(partial - oracle::even_solution(3.7, 0.6)) <= truncation_bound(3.7, 20, 0.6) + 1e-15);

    CHECK_THROWS_AS(even_solution_eval(cheb_coeffs(1.0, 3), 1.0), std::domain_error);
    CHECK_THROWS_AS(even_solution_eval(cheb_coeffs(1.0, 3), -1.2), std::domain_error);
}

TEST_CASE("integer s reproduces cos(2 s asin t) exactly", "[chebyshev]")
{
    double worst = 0.0;
    for (int M = 1; M <= 16; ++M)
        for (int s = 0; s <= M; ++s)
        {
            ChebyshevSeries c = cheb_coeffs(s, M + 1);
            for (int i = 0; i <= 400; ++i)
            {
                double t = -0.95 + 1.9 * i / 400.0;
                worst = std::max(worst, std::abs(even_solution_eval(c, t) - oracle::even_solution(s, t)));
            }
        }
    CHECK(worst <= 1e-10);
}

TEST_CASE("truncation_bound and derivative_bound examples", "[chebyshev]")
{
    CHECK(truncation_bound(0.0, 8, 0.9) == 0.0);
    CHECK(derivative_bound(0.0, 8, 0.9) == 0.0);
    CHECK(derivative_bound(3.0, 8, 0.9) == 0.0);

    const double tb = truncation_bound(2.5, 8, 0.9);
    CHECK(tb > 0.0);
    CHECK(tb >= grid_sup_error(2.5, 8, 0.9));
    const double db = derivative_bound(2.5, 8, 0.9);
    CHECK(db > 0.0);
    CHECK(db >= grid_sup_derivative(2.5, 8, 0.9));

    // The tail oracle agrees with the direct transcendental difference where cancellation is mild
    for (double t : {0.5, 0.8, 0.9})
    {
        double direct = oracle::even_solution(2.5, t) - even_solution_eval(cheb_coeffs(2.5, 8), t);
        CHECK_THAT(direct, WithinAbs(oracle::even_tail(2.5, 8, t), 1e-13));
    }

    CHECK_THROWS_AS(truncation_bound(1.5, 4, 1.0), std::domain_error);
    CHECK_THROWS_AS(derivative_bound(1.5, 4, 0.0), std::domain_error);
    CHECK_THROWS_AS(truncation_bound(4.5, 4, 0.5), std::domain_error);
}

TEST_CASE("bounds dominate the actual truncation error", "[chebyshev]")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> Mdist(1, 32);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        int M = Mdist(rng);
        double s = U(rng) * M;
        double eta = 0.01 + 0.94 * U(rng);
        if (grid_sup_error(s, M, eta, 401) > truncation_bound(s, M, eta) * (1.0 + 1e-12))
            ++violations;
        if (grid_sup_derivative(s, M, eta, 401) > derivative_bound(s, M, eta) * (1.0 + 1e-6))
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("truncation error has one sign and peaks at the window edge", "[chebyshev]")
{
    for (double s : {0.4, 1.3, 2.5, 5.8})
    {
        const int M = 10;
        const double eta = 0.9;
        const double expected = (static_cast<long>(std::ceil(s)) % 2 == 0) ? 1.0 : -1.0;
        const int n = 1001;
        double best = 0.0;
        int best_i = -1;
        for (int i = 1; i < n - 1; ++i)
        {
            double t = -eta + 2.0 * eta * i / (n - 1);
            double e = oracle::even_tail(s, M, t);
            if (t != 0.0)
                CHECK(e * expected > 0.0);
            if (std::abs(t) >= 0.5)
            {
                double direct = oracle::even_solution(s, t) - even_solution_eval(cheb_coeffs(s, M), t);
                CHECK(direct * expected > 0.0);
            }
        }
        for (int i = 0; i < n; ++i)
        {
            double t = -eta + 2.0 * eta * i / (n - 1);
            double e = std::abs(oracle::even_tail(s, M, t));
            if (e > best)
            {
                best = e;
                best_i = i;
            }
        }
        CHECK((best_i <= 1 || best_i >= n - 2));
    }
}

TEST_CASE("exponent functions f, g and g inverse", "[chebyshev]")
{
    CHECK(f_alpha(0.0) == 0.0);
    CHECK_THAT(f_alpha(1.0), WithinAbs(std::log(2.0), 1e-15));
    CHECK_THAT(g_alpha(0.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(g_alpha(1.0), WithinAbs(2.0, 1e-15));
    CHECK_THROWS_AS(f_alpha(-0.01), std::domain_error);
    CHECK_THROWS_AS(f_alpha(1.01), std::domain_error);

    auto integrand = [](double t) { return std::log(std::abs(t * t - 0.25)); };
    double integral = oracle::integrate(integrand, 0.0, 0.5, 1e-13) + oracle::integrate(integrand, 0.5, 1.0, 1e-13);
    CHECK_THAT(f_alpha(0.5), WithinAbs(1.0 + 0.5 * integral, 1e-9));

    CHECK(g_inverse(2.0) == 1.0);
    CHECK(g_inverse(2.5) == 1.0);
    CHECK(g_inverse(1.0) == 0.0);
    CHECK(g_inverse(0.3) == 0.0);
    const double y = 1.0 / std::sin(0.45 * pi);
    const double a09 = g_inverse(y);
    CHECK(a09 > 0.0);
    CHECK(a09 < 1.0);
    CHECK_THAT(g_alpha(a09), WithinAbs(y, 1e-10));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> Y(1.0, 2.0);
    for (int i = 0; i < 200; ++i)
    {
        double yy = Y(rng);
        CHECK_THAT(g_alpha(g_inverse(yy)), WithinAbs(yy, 1e-10));
    }
}

TEST_CASE("f is increasing and convex on a fine grid", "[chebyshev]")
{
    const double h = 1e-3;
    double prev_diff = -1.0;
    for (int i = 0; i < 1000; ++i)
    {
        double d = f_alpha((i + 1) * h) - f_alpha(i * h);
        CHECK(d >= 0.0);
        CHECK(d >= prev_diff - 1e-15);
        prev_diff = d;
    }
}

TEST_CASE("finite-M exponent is bracketed and approaches f", "[chebyshev]")
{
    std::mt19937_64 rng(17);
    int violations = 0;
    for (int M : {50, 100, 200})
    {
        std::uniform_real_distribution<double> S(0.0, M);
        for (int i = 0; i < 200; ++i)
        {
            double s = S(rng);
            if (s == std::round(s))
                continue;
            double h = finite_m_exponent(s, M);
            ExponentBracket b = stirling_bracket(s, M);
            violations += (h < b.lower || h > b.upper) ? 1 : 0;
            // Independent evaluation of h from the Gamma closed form
            CHECK_THAT(h, WithinAbs(std::log(std::abs(oracle::coeff_gamma(s, M))) / (2.0 * M), 1e-10));
        }
    }
    CHECK(violations == 0);

    CHECK(std::abs(finite_m_exponent(100.5, 200) - f_alpha(100.5 / 200.0)) <= 0.05);

    // Near s = 0 the bracket still holds and h is far below f(0) = 0
    ExponentBracket b0 = stirling_bracket(1e-3, 50);
    double h0 = finite_m_exponent(1e-3, 50);
    CHECK(h0 >= b0.lower);
    CHECK(h0 <= b0.upper);
    CHECK(h0 < 0.0);

    CHECK_THROWS_AS(finite_m_exponent(3.0, 10), std::domain_error);
    CHECK_THROWS_AS(finite_m_exponent(10.5, 10), std::domain_error);
}

TEST_CASE("minimax bounds vanish on the lattice and dominate the discrete minimax", "[chebyshev]")
{
    const int M = 8;
    const double rho = 0.5;
    for (int k = 0; k < M; ++k)
    {
        CHECK(minimax_real_bound(k * rho, M, rho) == 0.0);
        CHECK(minimax_imag_bound(k * rho, M, rho) == 0.0);
        CHECK(width_bound(k * rho, M, rho).bound == 0.0);
    }
    CHECK(minimax_imag_bound(0.0, M, rho) == 0.0);

    const double s = 3.25;
    const double er = minimax_real_bound(s, M, rho), ei = minimax_imag_bound(s, M, rho);
    CHECK(er > 0.0);
    CHECK(ei > 0.0);
    const double oracle_r = discrete_minimax(s, M, rho, false);
    const double oracle_i = discrete_minimax(s, M, rho, true);
    CHECK(oracle_r > 0.0);
    CHECK(oracle_i > 0.0);
    CHECK(er >= oracle_r);
    CHECK(ei >= oracle_i);

    CHECK_THROWS_AS(minimax_real_bound(4.01, M, rho), std::domain_error);
    CHECK_THROWS_AS(minimax_imag_bound(-0.1, M, rho), std::domain_error);
    CHECK_THROWS_AS(minimax_real_bound(1.0, M, 1.0), std::domain_error);
}

TEST_CASE("width_bound assembly", "[chebyshev]")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i)
    {
        int M = 1 + static_cast<int>(rng() % 64);
        double rho = 0.05 + 0.9 * U(rng);
        double s = U(rng) * M * rho;
        WidthBound w = width_bound(s, M, rho);
        CHECK(w.bound <= 2.0);
        CHECK(w.bound >= 0.0);
        CHECK(w.real_part_bound >= 0.0);
        CHECK(w.imag_part_bound >= 0.0);
        CHECK(w.bound == std::min(2.0 * (w.real_part_bound + w.imag_part_bound), 2.0));
    }
    // Fixed s / (M rho) = 0.3 with eta g(0.3) < 1: the bound decays with M
    const double rho = 0.5;
    REQUIRE(std::sin(0.25 * pi) * g_alpha(0.3) < 1.0);
    double prev = 3.0;
    for (int M : {8, 16, 32, 64})
    {
        double b = width_bound(0.3 * M * rho, M, rho).bound;
        CHECK(b < prev);
        prev = b;
    }
    CHECK(width_bound(2.0, 8, 0.5).asymptotic > 0.0);
}
