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

#ifndef COVINTERP_PSF_HPP
#define COVINTERP_PSF_HPP

#include "covinterp/manifold.hpp"
#include "covinterp/types.hpp"

#include <json.hpp>

#include <cmath>
#include <vector>

namespace covinterp
{
    // Point mass at xi with positive mass
    struct Atom
    {
        double xi;
        double mass;
    };

    // Constant density on [a, b]
    struct Rect
    {
        double a;
        double b;
        double density;
    };

    // Positive measure on [-1, 1] made of point masses and piecewise-constant densities.
    // The constructor divides by the total mass, so every instance has unit mass.
    class AngularPSF
    {
    public:
        AngularPSF(std::vector<Atom> atoms, std::vector<Rect> rects)
            : atoms_(std::move(atoms)), rects_(std::move(rects))
        {
            double total = 0.0;
            for (const auto &at : atoms_)
            {
                if (!(std::abs(at.xi) <= 1.0))
                    detail::argument_fail("AngularPSF", "atom location outside [-1, 1]");
                if (!(at.mass > 0.0) || !std::isfinite(at.mass))
                    detail::argument_fail("AngularPSF", "atom mass must be positive and finite");
                total += at.mass;
            }
            for (const auto &r : rects_)
            {
                if (!(r.a >= -1.0 && r.b <= 1.0 && r.b > r.a))
                    detail::argument_fail("AngularPSF", "rect interval must satisfy -1 <= a < b <= 1");
                if (!(r.density > 0.0) || !std::isfinite(r.density))
                    detail::argument_fail("AngularPSF", "rect density must be positive and finite");
                total += r.density * (r.b - r.a);
            }
            if (!(total > 0.0))
                detail::argument_fail("AngularPSF", "measure has zero total mass");
            for (auto &at : atoms_)
                at.mass /= total;
            for (auto &r : rects_)
                r.density /= total;
        }

        static AngularPSF single_atom(double xi) { return AngularPSF({{xi, 1.0}}, {}); }

        const std::vector<Atom> &atoms() const { return atoms_; }
        const std::vector<Rect> &rects() const { return rects_; }

        double total_mass() const
        {
            double total = 0.0;
            for (const auto &at : atoms_)
                total += at.mass;
            for (const auto &r : rects_)
                total += r.density * (r.b - r.a);
            return total;
        }

    private:
        std::vector<Atom> atoms_;
        std::vector<Rect> rects_;
    };

    // Probing points together with the transform values at those points
    struct FourierSamples
    {
        std::vector<double> points;
        CVector values;
    };

    // Continuous Fourier transform int gamma(dxi) exp(j pi xi x).
    // Each rect is evaluated as c (b-a) exp(j pi (a+b) x / 2) sinc(pi (b-a) x / 2), which is the closed
    // form c (exp(j pi b x) - exp(j pi a x)) / (j pi x) without the cancellation near x = 0.
    inline cplx psf_fourier(const AngularPSF &psf, double x)
    {
        if (!std::isfinite(x))
            detail::argument_fail("psf_fourier", "probe point must be finite");
        cplx acc = 0.0;
        for (const auto &at : psf.atoms())
            acc += at.mass * detail::expj_pi(at.xi * x);
        for (const auto &r : psf.rects())
        {
            double width = r.b - r.a;
            double u = 0.5 * pi * width * x;
            double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
            acc += r.density * width * sinc * detail::expj_pi(0.5 * (r.a + r.b) * x);
        }
        return acc;
    }

    inline FourierSamples sample_on_lattice(const AngularPSF &psf, const SamplingSet &lattice)
    {
        if (!lattice.one_dimensional())
            detail::argument_fail("sample_on_lattice", "lattice must be one-dimensional");
        FourierSamples out;
        out.points = lattice.scalars();
        out.values.resize(static_cast<Eigen::Index>(out.points.size()));
        for (std::size_t k = 0; k < out.points.size(); ++k)
            out.values[static_cast<Eigen::Index>(k)] = psf_fourier(psf, out.points[k]);
        return out;
    }

    // rect_[0.6, 0.8] + 4 rect_[0.8, 1]
    inline AngularPSF standard_rect_psf()
    {
        return AngularPSF({}, {{0.6, 0.8, 1.0}, {0.8, 1.0, 4.0}});
    }

    inline nlohmann::json psf_to_json(const AngularPSF &psf)
    {
        nlohmann::json j;
        j["atoms"] = nlohmann::json::array();
        j["rects"] = nlohmann::json::array();
        for (const auto &at : psf.atoms())
            j["atoms"].push_back({{"xi", at.xi}, {"mass", at.mass}});
        for (const auto &r : psf.rects())
            j["rects"].push_back({{"a", r.a}, {"b", r.b}, {"density", r.density}});
        return j;
    }

    inline AngularPSF psf_from_json(const nlohmann::json &j)
    {
        std::vector<Atom> atoms;
        std::vector<Rect> rects;
        if (j.contains("atoms"))
            for (const auto &e : j.at("atoms"))
                atoms.push_back({e.at("xi").get<double>(), e.at("mass").get<double>()});
        if (j.contains("rects"))
            for (const auto &e : j.at("rects"))
                rects.push_back({e.at("a").get<double>(), e.at("b").get<double>(), e.at("density").get<double>()});
        return AngularPSF(std::move(atoms), std::move(rects));
    }

} // namespace covinterp

#endif
