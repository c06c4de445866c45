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

#ifndef COVINTERP_SIMCHANNEL_HPP
#define COVINTERP_SIMCHANNEL_HPP

#include "covinterp/estimators.hpp"
#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

namespace covinterp
{
    // Per-snapshot random streams: std::mt19937_64 seeded with splitmix64(seed, stream, t).
    // Normal draws use the Box-Muller transform on 53-bit uniforms, so results do not depend on
    // the standard library's distribution implementations.
    class SnapshotRng
    {
    public:
        SnapshotRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
            : engine_(derive_seed(seed, stream, index))
        {
        }

        static std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }

        static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        {
            return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
        }

        // Uniform in [0, 1)
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        // Circularly-symmetric complex Gaussian with E|z|^2 = variance
        cplx complex_normal(double variance)
        {
            double u1 = 1.0 - uniform();
            double u2 = uniform();
            double r = std::sqrt(-2.0 * std::log(u1) * 0.5 * variance);
            return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
        }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
    };

    struct SnapshotBatch
    {
        CMatrix snapshots; // M x T, column t is h(t)
        std::uint64_t seed = 0;
        double snr_db = 0.0;
        Band band = Band::uplink;

        Eigen::Index num_snapshots() const { return snapshots.cols(); }
        Eigen::Index num_antennas() const { return snapshots.rows(); }
    };

    // Scatterer list used for generation: atoms as given, rects split over a midpoint grid on [-1, 1]
    struct Scatterers
    {
        std::vector<double> xi;
        std::vector<double> power;
    };

    inline Scatterers discretize_psf(const AngularPSF &psf, int sim_grid_size)
    {
        if (sim_grid_size < 1)
            detail::argument_fail("discretize_psf", "grid size must be positive");
        Scatterers sc;
        for (const auto &at : psf.atoms())
        {
            sc.xi.push_back(at.xi);
            sc.power.push_back(at.mass);
        }
        if (!psf.rects().empty())
        {
            const double dx = 2.0 / sim_grid_size;
            for (int j = 0; j < sim_grid_size; ++j)
            {
                double lo = -1.0 + j * dx, hi = lo + dx;
                double mass = 0.0;
                for (const auto &r : psf.rects())
                    mass += r.density * std::max(0.0, std::min(hi, r.b) - std::max(lo, r.a));
                if (mass > 0.0)
                {
                    sc.xi.push_back(lo + 0.5 * dx);
                    sc.power.push_back(mass);
                }
            }
        }
        return sc;
    }

    // Noise variance for a normalized PSF: snr_db = 10 log10(trace / (M sigma^2)) with trace = M
    inline double noise_variance_for_snr(double snr_db)
    {
        if (std::isinf(snr_db) && snr_db > 0.0)
            return 0.0;
        return std::pow(10.0, -snr_db / 10.0);
    }

    // Snapshots h(t) = sum_i w_i(t) a(xi_i) + n(t) with w_i(t) ~ CN(0, gamma_i), n(t) ~ CN(0, sigma^2 I).
    // Pass snr_db = +infinity for noiseless data.
    inline SnapshotBatch generate_snapshots(const AngularPSF &psf, const ArrayConfig &cfg, int T, double snr_db,
                                            std::uint64_t seed, Band band = Band::uplink, int sim_grid_size = 4096)
    {
        if (T < 1)
            detail::argument_fail("generate_snapshots", "T must be positive");
        if (sim_grid_size < 256)
            detail::argument_fail("generate_snapshots", "sim_grid_size must be at least 256");
        if (std::isnan(snr_db))
            detail::argument_fail("generate_snapshots", "snr_db is NaN");

        const Scatterers sc = discretize_psf(psf, sim_grid_size);
        const Eigen::Index M = cfg.num_antennas();
        const Eigen::Index K = static_cast<Eigen::Index>(sc.xi.size());
        CMatrix S(M, K);
        for (Eigen::Index k = 0; k < K; ++k)
            S.col(k) = steering_vector(cfg, sc.xi[static_cast<std::size_t>(k)], band);
        const double sigma2 = noise_variance_for_snr(snr_db);

        SnapshotBatch batch;
        batch.seed = seed;
        batch.snr_db = snr_db;
        batch.band = band;
        batch.snapshots.resize(M, T);

        constexpr int chunk = 256;
        for (int t0 = 0; t0 < T; t0 += chunk)
        {
            const int n = std::min(chunk, T - t0);
            CMatrix W(K, n);
            CMatrix N = CMatrix::Zero(M, n);
            for (int c = 0; c < n; ++c)
            {
                SnapshotRng rng(seed, 0, static_cast<std::uint64_t>(t0 + c));
                for (Eigen::Index k = 0; k < K; ++k)
                    W(k, c) = rng.complex_normal(sc.power[static_cast<std::size_t>(k)]);
                if (sigma2 > 0.0)
                    for (Eigen::Index i = 0; i < M; ++i)
                        N(i, c) = rng.complex_normal(sigma2);
            }
            batch.snapshots.middleCols(t0, n).noalias() = S * W;
            batch.snapshots.middleCols(t0, n) += N;
        }
        return batch;
    }

    // (1/T) sum_t h(t) h(t)^H
    inline CMatrix sample_covariance(const SnapshotBatch &batch)
    {
        const auto &H = batch.snapshots;
        if (H.cols() < 1)
            detail::argument_fail("sample_covariance", "batch is empty");
        CMatrix C = (H * H.adjoint()) / static_cast<double>(H.cols());
        return 0.5 * (C + C.adjoint());
    }

    // Sketched observations x(t) = B(t) h(t) + n(t) with matching dictionaries B(t) A.
    // Identity sketches share one dictionary; the observations are then the columns of X.
    struct SketchedBatch
    {
        bool shared = false;
        CMatrix shared_dict;
        CMatrix X;
        std::vector<CMatrix> sketches;
        std::vector<CMatrix> dicts;
        std::vector<CVector> obs;

        std::size_t size() const { return shared ? static_cast<std::size_t>(X.cols()) : obs.size(); }
    };

    inline SketchedBatch sketch_snapshots(const SnapshotBatch &batch, const SketchConfig &sk, const CMatrix &A,
                                          std::uint64_t seed)
    {
        const Eigen::Index M = batch.num_antennas();
        const Eigen::Index T = batch.num_snapshots();
        const Eigen::Index m = sk.m == 0 ? M : sk.m;
        if (m > M || m < 1)
            detail::argument_fail("sketch_snapshots", "sketch size m must lie in [1, M]");
        if (A.rows() != M)
            detail::argument_fail("sketch_snapshots", "dictionary rows must equal M");
        if (sk.kind == SketchKind::identity && m != M)
            detail::argument_fail("sketch_snapshots", "identity sketch requires m = M");

        SketchedBatch out;
        if (sk.kind == SketchKind::identity)
        {
            out.shared = true;
            out.shared_dict = A;
            out.X = batch.snapshots;
            if (sk.noise_variance > 0.0)
                for (Eigen::Index t = 0; t < T; ++t)
                {
                    SnapshotRng rng(seed, 1, static_cast<std::uint64_t>(t));
                    for (Eigen::Index i = 0; i < M; ++i)
                        out.X(i, t) += rng.complex_normal(sk.noise_variance);
                }
            return out;
        }

        std::vector<Eigen::Index> perm(static_cast<std::size_t>(M));
        for (Eigen::Index t = 0; t < T; ++t)
        {
            SnapshotRng rng(seed, 1, static_cast<std::uint64_t>(t));
            CMatrix B = CMatrix::Zero(m, M);
            if (sk.kind == SketchKind::selection)
            {
                std::iota(perm.begin(), perm.end(), Eigen::Index{0});
                // Fisher-Yates driven by the 53-bit uniforms
                for (Eigen::Index i = M - 1; i > 0; --i)
                {
                    auto j = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(i + 1));
                    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(std::min(j, i))]);
                }
                for (Eigen::Index r = 0; r < m; ++r)
                    B(r, perm[static_cast<std::size_t>(r)]) = 1.0;
            }
            else
            {
                for (Eigen::Index c = 0; c < M; ++c)
                    for (Eigen::Index r = 0; r < m; ++r)
                        B(r, c) = rng.complex_normal(1.0 / static_cast<double>(m));
            }
            CVector x = B * batch.snapshots.col(t);
            if (sk.noise_variance > 0.0)
                for (Eigen::Index i = 0; i < m; ++i)
                    x[i] += rng.complex_normal(sk.noise_variance);
            out.dicts.push_back(B * A);
            out.sketches.push_back(std::move(B));
            out.obs.push_back(std::move(x));
        }
        return out;
    }

    inline GroupL21Result group_l21_solve(const SketchedBatch &sb, double iota, double tol = 1e-6, int max_iter = 20000)
    {
        if (sb.shared)
            return group_l21_solve(sb.shared_dict, sb.X, iota, tol, max_iter);
        return group_l21_solve(sb.dicts, sb.obs, iota, tol, max_iter);
    }

    // CSV rows (t, antenna, re, im)
    inline void write_batch_csv(std::ostream &os, const SnapshotBatch &batch)
    {
        os << "t,antenna,re,im\n" << std::setprecision(17);
        for (Eigen::Index t = 0; t < batch.num_snapshots(); ++t)
            for (Eigen::Index k = 0; k < batch.num_antennas(); ++k)
                os << t << ',' << k << ',' << batch.snapshots(k, t).real() << ',' << batch.snapshots(k, t).imag() << '\n';
    }

} // namespace covinterp

#endif
