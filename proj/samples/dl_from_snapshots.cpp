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

// Estimates a downlink covariance from simulated uplink snapshots and compares the DL eigenbases
// obtained with and without interpolation.
//
// Usage: dl_from_snapshots [M] [T] [snr_db]

#include "covinterp/covinterp.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char **argv)
{
    using namespace covinterp;
    const int M = argc > 1 ? std::atoi(argv[1]) : 64;
    const int T = argc > 2 ? std::atoi(argv[2]) : 2000;
    const double snr_db = argc > 3 ? std::atof(argv[3]) : 20.0;

    const ArrayConfig cfg(M, 0.9, 0.9); // rho = 0.9, f_ul / f_dl = 0.9
    const AngularPSF psf({{0.3, 0.2}}, {{-0.5, 0.1, 0.8 / 0.6}});

    // UL side: snapshots -> sample covariance -> Toeplitz projection
    SnapshotBatch ul = generate_snapshots(psf, cfg, T, snr_db, /*seed=*/42);
    CVector sigma_ul = toeplitzify(sample_covariance(ul)).first_column();
    sigma_ul /= sigma_ul[0].real();

    auto res = run_algorithm1(sigma_ul, cfg, SolverConfig{}, TruncationMode::keep_fraction(0.1));
    std::cout << "NNLS: " << res.report.iterations << " iterations, KKT residual " << res.report.kkt_residual << '\n';
    std::cout << "kept " << res.interpolation.kept.size() << " of " << M << " DL samples\n";

    const ToeplitzCovariance dl_true = covariance_from_psf(psf, cfg, Band::downlink);
    const PowerDistribution p = eigen_power(dl_true).p;
    const double naive = distortion(p, captured_power(dl_true, eigen_basis(ToeplitzCovariance(sigma_ul).matrix()).basis));
    const double interp = distortion(p, captured_power(dl_true, eigen_basis(res.covariance_dl.matrix()).basis));
    std::cout << "distortion using the UL eigenbasis:     " << naive << '\n';
    std::cout << "distortion using the interpolated basis: " << interp << '\n';
    return res.report.converged ? 0 : 1;
}
