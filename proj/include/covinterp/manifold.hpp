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

#ifndef COVINTERP_MANIFOLD_HPP
#define COVINTERP_MANIFOLD_HPP

#include "covinterp/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace covinterp
{
    // Uniform linear array parameters.
    //
    // All angles are handled in the normalized coordinate xi = sin(theta) / sin(theta_max) in [-1, 1].
    // Element spacing is d = rho * lambda_ul / (2 sin(theta_max)), so rho < 1 means the array is denser
    // than the no-aliasing spacing. Values of rho in [1, 2) are accepted for aliasing studies and are
    // reported by aliased().
    class ArrayConfig
    {
    public:
        ArrayConfig(int num_antennas, double oversampling, double carrier_ratio, double theta_max = pi / 3.0)
            : num_antennas_(num_antennas), oversampling_(oversampling), carrier_ratio_(carrier_ratio), theta_max_(theta_max)
        {
            if (num_antennas < 1)
                detail::argument_fail("ArrayConfig", "num_antennas must be positive");
            if (!(oversampling > 0.0 && oversampling < 2.0))
                detail::argument_fail("ArrayConfig", "oversampling must lie in (0, 2)");
            if (!(carrier_ratio > 0.0 && carrier_ratio < 2.0))
                detail::argument_fail("ArrayConfig", "carrier_ratio must lie in (0, 2)");
            if (!(theta_max > 0.0 && theta_max <= pi / 2.0))
                detail::argument_fail("ArrayConfig", "theta_max must lie in (0, pi/2]");
        }

        int num_antennas() const { return num_antennas_; }
        double oversampling() const { return oversampling_; }
        double carrier_ratio() const { return carrier_ratio_; }
        double theta_max() const { return theta_max_; }

        // Element spacing in units of the UL wavelength
        double spacing_over_wavelength() const { return oversampling_ / (2.0 * std::sin(theta_max_)); }

        // True when the spacing violates the spatial sampling condition (rho >= 1)
        bool aliased() const { return oversampling_ >= 1.0; }

        // Lattice step of the given band in the Fourier domain: rho (UL) or rho/nu (DL)
        double lattice_step(Band band) const
        {
            return band == Band::uplink ? oversampling_ : oversampling_ / carrier_ratio_;
        }

        ArrayConfig with_antennas(int M) const { return {M, oversampling_, carrier_ratio_, theta_max_}; }
        ArrayConfig with_oversampling(double rho) const { return {num_antennas_, rho, carrier_ratio_, theta_max_}; }

        bool operator==(const ArrayConfig &) const = default;

    private:
        int num_antennas_;
        double oversampling_;
        double carrier_ratio_;
        double theta_max_;
    };

    // Normalized angle coordinate of a physical angle
    inline double xi_from_theta(double theta, double theta_max)
    {
        return std::sin(theta) / std::sin(theta_max);
    }

    // Element k of the response is exp(j k pi step xi) with step = rho (UL) or rho/nu (DL)
    inline CVector steering_vector(const ArrayConfig &cfg, double xi, Band band)
    {
        if (!(std::abs(xi) <= 1.0))
            detail::domain_fail("steering_vector", "|xi| must not exceed 1");
        const int M = cfg.num_antennas();
        const double step = cfg.lattice_step(band);
        CVector a(M);
        for (int k = 0; k < M; ++k)
            a[k] = detail::expj_pi(k * step * xi);
        return a;
    }

    // Positions of array elements (3-vectors, units of lambda_ul / 2)
    struct ArrayGeometry
    {
        std::vector<Eigen::Vector3d> positions;
    };

    // ULA positions {k * rho * axis}; with this scaling the difference set coincides with the UL lattice
    inline ArrayGeometry ula_geometry(const ArrayConfig &cfg, const Eigen::Vector3d &axis = Eigen::Vector3d::UnitX())
    {
        ArrayGeometry g;
        const Eigen::Vector3d unit = axis.normalized();
        for (int k = 0; k < cfg.num_antennas(); ++k)
            g.positions.push_back(static_cast<double>(k) * cfg.oversampling() * unit);
        return g;
    }

    // M elements equally spaced on a circle in the xy-plane
    inline ArrayGeometry circular_geometry(int num_antennas, double radius)
    {
        if (num_antennas < 1 || !(radius > 0.0))
            detail::argument_fail("circular_geometry", "need num_antennas >= 1 and radius > 0");
        ArrayGeometry g;
        for (int k = 0; k < num_antennas; ++k)
        {
            double phi = 2.0 * pi * k / num_antennas;
            g.positions.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
        }
        return g;
    }

    // A deduplicated set of Fourier-domain sampling points. One-dimensional sets keep their
    // coordinate in the x component.
    class SamplingSet
    {
    public:
        static constexpr double dedup_tolerance = 1e-9;

        SamplingSet() = default;

        static SamplingSet from_scalars(const std::vector<double> &values)
        {
            SamplingSet s;
            s.one_dimensional_ = true;
            for (double v : values)
                s.points_.emplace_back(v, 0.0, 0.0);
            return s;
        }

        static SamplingSet from_points(std::vector<Eigen::Vector3d> points)
        {
            SamplingSet s;
            s.one_dimensional_ = false;
            s.points_ = std::move(points);
            return s;
        }

        std::size_t size() const { return points_.size(); }
        bool empty() const { return points_.empty(); }
        bool one_dimensional() const { return one_dimensional_; }
        const std::vector<Eigen::Vector3d> &points() const { return points_; }
        const Eigen::Vector3d &point(std::size_t i) const { return points_[i]; }

        double scalar(std::size_t i) const { return points_[i].x(); }

        std::vector<double> scalars() const
        {
            std::vector<double> out;
            out.reserve(points_.size());
            for (const auto &p : points_)
                out.push_back(p.x());
            return out;
        }

        // True if some point lies within the dedup tolerance of p
        bool contains(const Eigen::Vector3d &p, double tol = dedup_tolerance) const
        {
            return std::any_of(points_.begin(), points_.end(),
                               [&](const Eigen::Vector3d &q) { return (q - p).cwiseAbs().maxCoeff() <= tol; });
        }

    private:
        std::vector<Eigen::Vector3d> points_;
        bool one_dimensional_ = true;
    };

    namespace detail
    {
        // Sorts lexicographically and merges points whose coordinates all agree within tol.
        inline std::vector<Eigen::Vector3d> dedup_points(std::vector<Eigen::Vector3d> pts, double tol)
        {
            std::sort(pts.begin(), pts.end(), [](const Eigen::Vector3d &a, const Eigen::Vector3d &b) {
                if (a.x() != b.x())
                    return a.x() < b.x();
                if (a.y() != b.y())
                    return a.y() < b.y();
                return a.z() < b.z();
            });
            std::vector<Eigen::Vector3d> kept;
            std::size_t window_start = 0;
            for (const auto &p : pts)
            {
                while (window_start < kept.size() && kept[window_start].x() < p.x() - tol)
                    ++window_start;
                bool duplicate = false;
                for (std::size_t i = window_start; i < kept.size(); ++i)
                {
                    if ((kept[i] - p).cwiseAbs().maxCoeff() <= tol)
                    {
                        duplicate = true;
                        break;
                    }
                }
                if (!duplicate)
                    kept.push_back(p);
            }
            return kept;
        }
    } // namespace detail

    // Sampling lattice {k * step : k in [M]}, ascending
    inline SamplingSet ula_lattice(const ArrayConfig &cfg, Band band)
    {
        std::vector<double> v(cfg.num_antennas());
        const double step = cfg.lattice_step(band);
        for (int k = 0; k < cfg.num_antennas(); ++k)
            v[k] = k * step;
        return SamplingSet::from_scalars(v);
    }

    // Minkowski difference R - R, deduplicated and sorted
    inline SamplingSet difference_set(const ArrayGeometry &geom)
    {
        if (geom.positions.empty())
            detail::argument_fail("difference_set", "geometry has no elements");
        std::vector<Eigen::Vector3d> diffs;
        diffs.reserve(geom.positions.size() * geom.positions.size());
        for (const auto &a : geom.positions)
            for (const auto &b : geom.positions)
                diffs.push_back(a - b);
        auto pts = detail::dedup_points(std::move(diffs), SamplingSet::dedup_tolerance);

        bool collinear_x = std::all_of(pts.begin(), pts.end(), [](const Eigen::Vector3d &p) {
            return std::abs(p.y()) <= SamplingSet::dedup_tolerance && std::abs(p.z()) <= SamplingSet::dedup_tolerance;
        });
        if (collinear_x)
        {
            std::vector<double> xs;
            for (const auto &p : pts)
                xs.push_back(p.x());
            return SamplingSet::from_scalars(xs);
        }
        return SamplingSet::from_points(std::move(pts));
    }

    inline SamplingSet scale_sampling_set(const SamplingSet &s, double factor)
    {
        if (!(factor > 0.0))
            detail::argument_fail("scale_sampling_set", "factor must be positive");
        std::vector<Eigen::Vector3d> pts;
        pts.reserve(s.size());
        for (const auto &p : s.points())
            pts.push_back(factor * p);
        if (s.one_dimensional())
        {
            std::vector<double> xs;
            for (const auto &p : pts)
                xs.push_back(p.x());
            return SamplingSet::from_scalars(xs);
        }
        return SamplingSet::from_points(std::move(pts));
    }

} // namespace covinterp

#endif
