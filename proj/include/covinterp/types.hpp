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

#ifndef COVINTERP_TYPES_HPP
#define COVINTERP_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace covinterp
{
    using cplx = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;
    using RMatrix = Eigen::MatrixXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr cplx j_unit{0.0, 1.0};

    // Frequency band of an array response or covariance
    enum class Band
    {
        uplink,
        downlink
    };

    inline std::string to_string(Band band)
    {
        return band == Band::uplink ? "UL" : "DL";
    }

    namespace detail
    {
        [[noreturn]] inline void domain_fail(const std::string &where, const std::string &what)
        {
            throw std::domain_error(where + ": " + what);
        }

        [[noreturn]] inline void argument_fail(const std::string &where, const std::string &what)
        {
            throw std::invalid_argument(where + ": " + what);
        }

        // exp(j*pi*x) with the argument reduced modulo 2 before scaling, so large
        // lattice coordinates keep full relative accuracy
        inline cplx expj_pi(double x)
        {
            double r = std::remainder(x, 2.0);
            return {std::cos(pi * r), std::sin(pi * r)};
        }
    } // namespace detail

} // namespace covinterp

#endif
