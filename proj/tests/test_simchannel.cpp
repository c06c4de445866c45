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

#include "covinterp/covariance.hpp"
#include "covinterp/simchannel.hpp"

#include <catch_amalgamated.hpp>

#include <limits>
#include <set>
#include <sstream>

using namespace covinterp;
using Catch::Matchers::WithinAbs;

namespace
{
    constexpr double noiseless = std::numeric_limits<double>::infinity();

    double relative_frobenius(const CMatrix &A, const CMatrix &B)
    {
        return (A - B).norm() / B.norm();
    }
} // namespace

TEST_CASE("SnapshotRng is reproducible and has the requested moments", "[simchannel]")
{
    SnapshotRng a(9, 0, 3), b(9, 0, 3), c(9, 0, 4), d(9, 1, 3);
    double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
    CHECK(x != d.uniform());

    SnapshotRng g(1, 2, 3);
    const int n = 200000;
    cplx mean = 0.0;
    double power = 0.0, re2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        cplx z = g.complex_normal(2.0);
        mean += z;
        power += std::norm(z);
        re2 += z.real() * z.real();
    }
    CHECK(std::abs(mean / static_cast<double>(n)) <= 4.0 * std::sqrt(2.0 / n));
    CHECK_THAT(power / n, WithinAbs(2.0, 0.03));
    CHECK_THAT(re2 / n, WithinAbs(1.0, 0.02));
}

TEST_CASE("discretize_psf preserves mass", "[simchannel]")
{
    Scatterers sc = discretize_psf(AngularPSF({{0.1, 0.3}}, {{0.6, 0.8, 1.0}, {0.8, 1.0, 4.0}}), 4096);
    double total = 0.0;
    for (double p : sc.power)
        total += p;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    CHECK(sc.xi.front() == 0.1);
    CHECK_THAT(sc.power.front(), WithinAbs(0.3 / 1.3, 1e-15));
    for (std::size_t i = 1; i < sc.xi.size(); ++i)
    {
        CHECK(sc.xi[i] >= 0.6 - 1.0 / 4096);
        CHECK(sc.xi[i] <= 1.0);
    }
}

TEST_CASE("sample covariance converges to the true covariance", "[simchannel]")
{
    const ArrayConfig cfg(16, 0.9, 0.9);
    AngularPSF psf = standard_rect_psf();
    CMatrix truth = covariance_from_psf(psf, cfg, Band::uplink).matrix();
    SnapshotBatch big = generate_snapshots(psf, cfg, 20000, noiseless, 2024);
    CHECK(relative_frobenius(sample_covariance(big), truth) <= 0.05);

    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        double e_small = relative_frobenius(sample_covariance(generate_snapshots(psf, cfg, 1000, noiseless, seed)), truth);
        double e_large = relative_frobenius(sample_covariance(generate_snapshots(psf, cfg, 40000, noiseless, seed)), truth);
        CHECK(e_large < e_small);
    }

    // Circular symmetry: the empirical mean stays within three standard errors
    const double T = static_cast<double>(big.num_snapshots());
    CVector mean = big.snapshots.rowwise().mean();
    CHECK(mean.norm() <= 3.0 * std::sqrt(sample_covariance(big).trace().real() / T));
}

TEST_CASE("noise level follows the SNR definition", "[simchannel]")
{
    CHECK(noise_variance_for_snr(noiseless) == 0.0);
    CHECK_THAT(noise_variance_for_snr(20.0), WithinAbs(0.01, 1e-15));
    CHECK_THAT(noise_variance_for_snr(0.0), WithinAbs(1.0, 0.0));
    const ArrayConfig cfg(8, 0.9, 0.9);
    SnapshotBatch b = generate_snapshots(standard_rect_psf(), cfg, 40000, 0.0, 7);
    // Unit-power PSF plus unit noise: trace doubles
    CHECK_THAT(sample_covariance(b).trace().real() / 8.0, WithinAbs(2.0, 0.05));
}

TEST_CASE("single atom snapshots are rank one", "[simchannel]")
{
    const ArrayConfig cfg(12, 0.9, 0.9);
    const double xi0 = 0.37;
    SnapshotBatch b = generate_snapshots(AngularPSF::single_atom(xi0), cfg, 50, noiseless, 11);
    CVector a = steering_vector(cfg, xi0, Band::uplink);
    for (Eigen::Index t = 0; t < 50; ++t)
    {
        CVector h = b.snapshots.col(t);
        double coherence = std::abs(a.dot(h)) / (h.norm() * std::sqrt(12.0));
        CHECK_THAT(coherence, WithinAbs(1.0, 1e-10));
    }
    CHECK_THROWS_AS(AngularPSF({{xi0, 0.0}}, {}), std::invalid_argument);
}

TEST_CASE("generate_snapshots validation and determinism", "[simchannel]")
{
    const ArrayConfig cfg(6, 0.9, 0.9);
    AngularPSF psf = standard_rect_psf();
    CHECK_THROWS_AS(generate_snapshots(psf, cfg, 0, 20.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_snapshots(psf, cfg, 5, 20.0, 1, Band::uplink, 255), std::invalid_argument);
    SnapshotBatch a = generate_snapshots(psf, cfg, 300, 20.0, 99);
    SnapshotBatch b = generate_snapshots(psf, cfg, 300, 20.0, 99);
    SnapshotBatch c = generate_snapshots(psf, cfg, 300, 20.0, 100);
    CHECK(a.snapshots == b.snapshots);
    CHECK(a.snapshots != c.snapshots);
    CHECK(a.snapshots.allFinite());
    // Snapshot t depends only on (seed, t), so a shorter batch is a prefix up to product rounding
    SnapshotBatch prefix = generate_snapshots(psf, cfg, 17, 20.0, 99);
    CHECK((prefix.snapshots - a.snapshots.leftCols(17)).cwiseAbs().maxCoeff() <= 1e-13);
    SnapshotBatch dl = generate_snapshots(psf, cfg, 3, 20.0, 99, Band::downlink);
    CHECK(dl.band == Band::downlink);
}

TEST_CASE("sample_covariance examples", "[simchannel]")
{
    const ArrayConfig cfg(5, 0.9, 0.9);
    SnapshotBatch one = generate_snapshots(standard_rect_psf(), cfg, 1, 10.0, 4);
    CMatrix C = sample_covariance(one);
    CVector h = one.snapshots.col(0);
    CHECK((C - h * h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(C);
    CHECK(es.eigenvalues()[3] <= 1e-12 * es.eigenvalues()[4]);

    SnapshotBatch many = generate_snapshots(standard_rect_psf(), cfg, 64, 10.0, 4);
    double energy = many.snapshots.squaredNorm() / 64.0;
    CHECK_THAT(sample_covariance(many).trace().real(), WithinAbs(energy, 1e-12 * energy));
    CMatrix S = sample_covariance(many);
    CHECK((S - S.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sketch_snapshots examples", "[simchannel]")
{
    const ArrayConfig cfg(8, 0.9, 0.9);
    CMatrix A = CMatrix::Identity(8, 8);
    SnapshotBatch b = generate_snapshots(standard_rect_psf(), cfg, 20, 20.0, 3);

    SketchConfig id;
    id.noise_variance = 0.0;
    SketchedBatch s = sketch_snapshots(b, id, A, 1);
    CHECK(s.shared);
    CHECK(s.X == b.snapshots);

    SketchConfig sel;
    sel.kind = SketchKind::selection;
    sel.noise_variance = 0.0;
    SketchedBatch p = sketch_snapshots(b, sel, A, 1);
    REQUIRE(p.obs.size() == 20);
    for (std::size_t t = 0; t < 20; ++t)
    {
        const CMatrix &B = p.sketches[t];
        CHECK((B * B.adjoint() - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
        std::multiset<std::pair<double, double>> lhs, rhs;
        for (int i = 0; i < 8; ++i)
        {
            lhs.insert({p.obs[t][i].real(), p.obs[t][i].imag()});
            rhs.insert({b.snapshots(i, static_cast<Eigen::Index>(t)).real(), b.snapshots(i, static_cast<Eigen::Index>(t)).imag()});
        }
        CHECK(lhs == rhs);
        CHECK((p.dicts[t] - B * A).cwiseAbs().maxCoeff() == 0.0);
    }

    SketchConfig too_big;
    too_big.kind = SketchKind::gaussian;
    too_big.m = 9;
    CHECK_THROWS_AS(sketch_snapshots(b, too_big, A, 1), std::invalid_argument);
    SketchConfig bad_id;
    bad_id.m = 4;
    CHECK_THROWS_AS(sketch_snapshots(b, bad_id, A, 1), std::invalid_argument);
}

TEST_CASE("Gaussian sketch preserves expected energy", "[simchannel]")
{
    const ArrayConfig cfg(8, 0.9, 0.9);
    const int T = 10000;
    SnapshotBatch b = generate_snapshots(standard_rect_psf(), cfg, T, noiseless, 8);
    SketchConfig g;
    g.kind = SketchKind::gaussian;
    g.m = 4;
    g.noise_variance = 1.0;
    SketchedBatch s = sketch_snapshots(b, g, CMatrix::Identity(8, 8), 21);
    double ex = 0.0;
    for (const auto &x : s.obs)
        ex += x.squaredNorm();
    ex /= T;
    const double eh = b.snapshots.squaredNorm() / T;
    CHECK(std::abs(ex - (eh + g.m)) <= 0.05 * (eh + g.m));
}

TEST_CASE("batch CSV export", "[simchannel]")
{
    SnapshotBatch b = generate_snapshots(standard_rect_psf(), ArrayConfig(2, 0.9, 0.9), 2, 20.0, 1);
    std::ostringstream os;
    write_batch_csv(os, b);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,antenna,re,im");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 4);
}
