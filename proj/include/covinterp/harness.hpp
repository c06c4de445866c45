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

#ifndef COVINTERP_HARNESS_HPP
#define COVINTERP_HARNESS_HPP

#include "covinterp/chebyshev.hpp"
#include "covinterp/covariance.hpp"
#include "covinterp/estimators.hpp"
#include "covinterp/interpolate.hpp"
#include "covinterp/manifold.hpp"
#include "covinterp/psf.hpp"
#include "covinterp/simchannel.hpp"
#include "covinterp/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace covinterp
{
    // ------------------------------------------------------------------ work pool

    // Worker count from COVINTERP_THREADS, else the hardware concurrency
    inline unsigned pool_size()
    {
        if (const char *env = std::getenv("COVINTERP_THREADS"))
        {
            char *end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0)
                return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    // Runs fn(i) for i in [0, n). Each index writes only its own output slot, so results do not
    // depend on scheduling. The first exception is rethrown after all workers finish.
    inline void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn)
    {
        unsigned workers = static_cast<unsigned>(std::min<std::size_t>(pool_size(), n));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    // ------------------------------------------------------------------ configuration

    enum class Scenario
    {
        aliasing,
        interior_error,
        distortion_sweep,
        dof_curves,
        bound_curves,
        width_sandwich
    };

    inline std::string to_string(Scenario s)
    {
        switch (s)
        {
        case Scenario::aliasing:
            return "aliasing";
        case Scenario::interior_error:
            return "interior_error";
        case Scenario::distortion_sweep:
            return "distortion_sweep";
        case Scenario::dof_curves:
            return "dof_curves";
        case Scenario::bound_curves:
            return "bound_curves";
        default:
            return "width_sandwich";
        }
    }

    inline Scenario scenario_from_string(const std::string &name)
    {
        for (Scenario s : {Scenario::aliasing, Scenario::interior_error, Scenario::distortion_sweep, Scenario::dof_curves,
                           Scenario::bound_curves, Scenario::width_sandwich})
            if (to_string(s) == name)
                return s;
        detail::argument_fail("scenario", "unknown scenario '" + name + "'");
    }

    struct ExperimentConfig
    {
        Scenario scenario = Scenario::interior_error;
        double rho = 0.9;
        double nu = 0.9;
        double theta_max = pi / 3.0;
        AngularPSF psf = standard_rect_psf();
        SolverConfig solver;
        int grid_factor = 4; // dictionary size G = grid_factor * M
        std::vector<int> M_list;
        TruncationMode truncation = TruncationMode::keep_fraction(0.1);

        // UL covariance source; exact sigma_ul unless from_snapshots is set
        bool from_snapshots = false;
        int T = 2000;
        double snr_db = 20.0;
        std::uint64_t seed = 1;
        int sim_grid_size = 4096;

        bool bypass_solver = false; // feed the true PSF instead of the NNLS measure

        // Scenario expectations
        std::optional<bool> expect_failure;
        double interior_threshold = 1e-2;
        double boundary_ratio = 10.0;
        double alias_ratio = 0.5;
        double exponent_tolerance = 0.05;
        double rho_step = 1e-3;
        int width_M = 8;
        double width_rho = 0.5;
        int width_G = 64;
        int width_probes = 20;
    };

    inline std::vector<int> default_M_list(Scenario s)
    {
        switch (s)
        {
        case Scenario::aliasing:
            return {50, 100};
        case Scenario::interior_error:
            return {50, 100, 200};
        case Scenario::distortion_sweep:
            return {25, 50, 100, 150, 200};
        case Scenario::bound_curves:
            return {50, 100, 200};
        default:
            return {};
        }
    }

    inline ExperimentConfig default_config(Scenario s)
    {
        ExperimentConfig c;
        c.scenario = s;
        c.M_list = default_M_list(s);
        if (s == Scenario::aliasing)
            c.rho = 1.05;
        return c;
    }

    // Keys absent from the JSON keep the scenario defaults
    inline ExperimentConfig experiment_config_from_json(Scenario s, const nlohmann::json &j)
    {
        ExperimentConfig c = default_config(s);
        c.rho = j.value("rho", c.rho);
        c.nu = j.value("nu", c.nu);
        c.theta_max = j.value("theta_max", c.theta_max);
        if (j.contains("psf"))
            c.psf = psf_from_json(j.at("psf"));
        if (j.contains("solver"))
            c.solver = solver_config_from_json(j.at("solver"));
        c.grid_factor = j.value("grid_factor", c.grid_factor);
        if (j.contains("M_list"))
            c.M_list = j.at("M_list").get<std::vector<int>>();
        if (j.contains("truncation"))
            c.truncation = TruncationMode::parse(j.at("truncation").get<std::string>());
        c.from_snapshots = j.value("from_snapshots", c.from_snapshots);
        c.T = j.value("T", c.T);
        c.snr_db = j.value("snr_db", c.snr_db);
        c.seed = j.value("seed", c.seed);
        c.sim_grid_size = j.value("sim_grid_size", c.sim_grid_size);
        c.bypass_solver = j.value("bypass_solver", c.bypass_solver);
        if (j.contains("expect_failure"))
            c.expect_failure = j.at("expect_failure").get<bool>();
        c.interior_threshold = j.value("interior_threshold", c.interior_threshold);
        c.boundary_ratio = j.value("boundary_ratio", c.boundary_ratio);
        c.alias_ratio = j.value("alias_ratio", c.alias_ratio);
        c.exponent_tolerance = j.value("exponent_tolerance", c.exponent_tolerance);
        c.rho_step = j.value("rho_step", c.rho_step);
        c.width_M = j.value("width_M", c.width_M);
        c.width_rho = j.value("width_rho", c.width_rho);
        c.width_G = j.value("width_G", c.width_G);
        c.width_probes = j.value("width_probes", c.width_probes);

        if (c.grid_factor < 1 || c.T < 1 || !(c.rho_step > 0.0 && c.rho_step < 0.5) || c.width_probes < 1)
            detail::argument_fail("experiment config", "invalid numeric setting");
        for (int M : c.M_list)
            if (M < 1)
                detail::argument_fail("experiment config", "M_list entries must be positive");
        if ((s == Scenario::aliasing || s == Scenario::interior_error || s == Scenario::distortion_sweep ||
             s == Scenario::bound_curves) &&
            c.M_list.empty())
            detail::argument_fail("experiment config", "scenario needs a non-empty M_list");
        return c;
    }

    // ------------------------------------------------------------------ reports

    struct Table
    {
        std::string name;
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;
    };

    struct Assertion
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct ExperimentReport
    {
        Scenario scenario = Scenario::interior_error;
        std::vector<Table> tables;
        std::vector<Assertion> assertions;
        double wall_seconds = 0.0;

        bool all_passed() const
        {
            return std::all_of(assertions.begin(), assertions.end(), [](const Assertion &a) { return a.passed; });
        }

        void check(const std::string &name, bool ok, const std::string &detail)
        {
            assertions.push_back({name, ok, detail});
        }
    };

    inline std::string format_number(double v)
    {
        std::ostringstream os;
        os << std::setprecision(6) << v;
        return os.str();
    }

    inline void write_table_csv(std::ostream &os, const Table &t)
    {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << '\n' << std::setprecision(17);
        for (const auto &row : t.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << row[i];
            os << '\n';
        }
    }

    // One line per assertion, "PASS name: detail" or "FAIL name: detail"
    inline void write_summary(std::ostream &os, const ExperimentReport &r)
    {
        os << "scenario " << to_string(r.scenario) << '\n';
        for (const auto &a : r.assertions)
            os << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
        os << (r.all_passed() ? "ALL PASS" : "SOME FAILED") << '\n';
    }

    // Writes <dir>/<scenario>_<table>.csv for every table plus <dir>/<scenario>_summary.txt
    inline void write_report(const std::filesystem::path &dir, const ExperimentReport &r)
    {
        std::filesystem::create_directories(dir);
        const std::string stem = to_string(r.scenario);
        for (const auto &t : r.tables)
        {
            std::ofstream f(dir / (stem + "_" + t.name + ".csv"));
            if (!f)
                throw std::runtime_error("cannot write " + (dir / (stem + "_" + t.name + ".csv")).string());
            write_table_csv(f, t);
        }
        std::ofstream s(dir / (stem + "_summary.txt"));
        write_summary(s, r);
    }

    // ------------------------------------------------------------------ shared pipeline pieces

    inline ArrayConfig array_for(const ExperimentConfig &c, int M)
    {
        return ArrayConfig(M, c.rho, c.nu, c.theta_max);
    }

    // UL first column from the configured source, normalized to sigma[0] = 1
    inline CVector ul_column(const ExperimentConfig &c, const ArrayConfig &cfg)
    {
        if (!c.from_snapshots)
            return covariance_from_psf(c.psf, cfg, Band::uplink).first_column();
        SnapshotBatch b = generate_snapshots(c.psf, cfg, c.T, c.snr_db, c.seed + static_cast<std::uint64_t>(cfg.num_antennas()),
                                             Band::uplink, c.sim_grid_size);
        CVector s = toeplitzify(sample_covariance(b)).first_column();
        return s / s[0].real();
    }

    struct DlEstimate
    {
        CVector full;
        CVector truth;
        SolverReport report;
    };

    inline DlEstimate estimate_dl(const ExperimentConfig &c, const ArrayConfig &cfg)
    {
        DlEstimate e;
        e.truth = covariance_from_psf(c.psf, cfg, Band::downlink).first_column();
        if (c.bypass_solver)
        {
            e.full = interpolate_dl(c.psf, cfg, TruncationMode::theory()).sigma_dl_full;
            e.report.converged = true;
            return e;
        }
        auto res = run_algorithm1(ul_column(c, cfg), cfg, c.solver, TruncationMode::theory(), c.grid_factor * cfg.num_antennas());
        e.full = res.interpolation.sigma_dl_full;
        e.report = std::move(res.report);
        return e;
    }

    inline double max_abs_error(const CVector &a, const CVector &b, int from, int to)
    {
        double m = 0.0;
        for (int k = std::max(from, 0); k < std::min<int>(to, static_cast<int>(a.size())); ++k)
            m = std::max(m, std::abs(a[k] - b[k]));
        return m;
    }

    // First index of the trailing 10% of the DL column
    inline int boundary_start(int M)
    {
        return static_cast<int>(std::ceil(0.9 * M - 1e-9));
    }

    // ------------------------------------------------------------------ scenarios

    // Untruncated DL error curves; the headline metric is the max error over the first ceil(0.9 M) indices
    inline ExperimentReport run_aliasing(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::aliasing;
        std::vector<DlEstimate> est(c.M_list.size());
        parallel_for(c.M_list.size(), [&](std::size_t i) { est[i] = estimate_dl(c, array_for(c, c.M_list[i])); });

        Table curve{"curve", {"M", "k", "abs_error"}, {}};
        Table metrics{"metrics", {"M", "max_error_window", "max_error_all", "kkt_residual"}, {}};
        std::vector<double> window_err;
        for (std::size_t i = 0; i < c.M_list.size(); ++i)
        {
            const int M = c.M_list[i];
            for (int k = 0; k < M; ++k)
                curve.rows.push_back({double(M), double(k), std::abs(est[i].full[k] - est[i].truth[k])});
            double w = max_abs_error(est[i].full, est[i].truth, 0, boundary_start(M));
            window_err.push_back(w);
            metrics.rows.push_back({double(M), w, max_abs_error(est[i].full, est[i].truth, 0, M), est[i].report.kkt_residual});
        }
        r.tables = {curve, metrics};

        const double ratio = window_err.back() / std::max(window_err.front(), 1e-300);
        const bool failure = ratio >= c.alias_ratio;
        const bool expected = c.expect_failure.value_or(c.rho >= 1.0);
        r.check("interpolation_failure_flag", failure == expected,
                "error ratio M=" + std::to_string(c.M_list.back()) + " vs M=" + std::to_string(c.M_list.front()) + " is " +
                    format_number(ratio) + " (failure iff >= " + format_number(c.alias_ratio) + "), expected failure " +
                    (expected ? "true" : "false"));
        return r;
    }

    inline ExperimentReport run_interior_error(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::interior_error;
        std::vector<DlEstimate> est(c.M_list.size());
        parallel_for(c.M_list.size(), [&](std::size_t i) { est[i] = estimate_dl(c, array_for(c, c.M_list[i])); });

        Table curve{"curve", {"M", "k", "abs_error", "in_index_set"}, {}};
        Table metrics{"metrics", {"M", "index_set_size", "interior_max_error", "boundary_max_error", "kkt_residual"}, {}};
        std::vector<double> interior, boundary;
        for (std::size_t i = 0; i < c.M_list.size(); ++i)
        {
            const int M = c.M_list[i];
            const ArrayConfig cfg = array_for(c, M);
            const IndexSet I = feasible_index_set(cfg);
            double in = 0.0;
            for (int k = 0; k < M; ++k)
            {
                double e = std::abs(est[i].full[k] - est[i].truth[k]);
                curve.rows.push_back({double(M), double(k), e, I.contains(k) ? 1.0 : 0.0});
                if (I.contains(k))
                    in = std::max(in, e);
            }
            double bd = max_abs_error(est[i].full, est[i].truth, boundary_start(M), M);
            interior.push_back(in);
            boundary.push_back(bd);
            metrics.rows.push_back({double(M), double(I.size()), in, bd, est[i].report.kkt_residual});

            r.check("interior_error_M" + std::to_string(M), in <= c.interior_threshold,
                    "max error over index set " + format_number(in) + " <= " + format_number(c.interior_threshold));
            if (!c.bypass_solver)
                r.check("boundary_ratio_M" + std::to_string(M), bd >= c.boundary_ratio * in,
                        "boundary max " + format_number(bd) + " >= " + format_number(c.boundary_ratio) + " x interior max " +
                            format_number(in));
        }
        if (!c.bypass_solver && c.M_list.size() >= 2)
            r.check("boundary_grows_with_M", boundary.back() >= boundary.front(),
                    "boundary error M=" + std::to_string(c.M_list.back()) + " " + format_number(boundary.back()) +
                        " >= M=" + std::to_string(c.M_list.front()) + " " + format_number(boundary.front()));
        r.tables = {curve, metrics};
        return r;
    }

    // Distortions of the three DL eigenbasis choices: UL eigenbasis (no interpolation),
    // interpolated column without truncation, and interpolated column with truncation
    struct DistortionPoint
    {
        double no_interp = 0.0;
        double interp_no_trunc = 0.0;
        double interp_trunc = 0.0;
        double kkt_residual = 0.0;
    };

    inline DistortionPoint evaluate_distortion(const AngularPSF &psf, const ArrayConfig &cfg, const CVector &sigma_ul,
                                               const SolverConfig &solver, const TruncationMode &truncation, int G)
    {
        const ToeplitzCovariance dl = covariance_from_psf(psf, cfg, Band::downlink);
        const PowerDistribution p = eigen_power(dl).p;

        DistortionPoint d;
        const CMatrix ul_matrix = ToeplitzCovariance(sigma_ul).matrix();
        d.no_interp = distortion(p, captured_power(dl, eigen_basis(ul_matrix).basis));

        auto res = run_algorithm1(sigma_ul, cfg, solver, truncation, G);
        d.kkt_residual = res.report.kkt_residual;
        const CMatrix full = ToeplitzCovariance(res.interpolation.sigma_dl_full).matrix();
        d.interp_no_trunc = distortion(p, captured_power(dl, eigen_basis(full).basis));
        d.interp_trunc = distortion(p, captured_power(dl, eigen_basis(res.covariance_dl.matrix()).basis));
        return d;
    }

    inline ExperimentReport run_distortion_sweep(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::distortion_sweep;
        std::vector<DistortionPoint> pts(c.M_list.size());
        parallel_for(c.M_list.size(), [&](std::size_t i) {
            const ArrayConfig cfg = array_for(c, c.M_list[i]);
            pts[i] = evaluate_distortion(c.psf, cfg, ul_column(c, cfg), c.solver, c.truncation, c.grid_factor * c.M_list[i]);
        });

        Table t{"distortion", {"M", "no_interp", "interp_no_trunc", "interp_trunc", "kkt_residual"}, {}};
        for (std::size_t i = 0; i < pts.size(); ++i)
            t.rows.push_back({double(c.M_list[i]), pts[i].no_interp, pts[i].interp_no_trunc, pts[i].interp_trunc, pts[i].kkt_residual});
        r.tables = {t};

        bool increasing = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
            increasing = increasing && pts[i].no_interp > pts[i - 1].no_interp;
        std::ostringstream seq;
        for (std::size_t i = 0; i < pts.size(); ++i)
            seq << (i ? ", " : "") << format_number(pts[i].no_interp);
        r.check("no_interp_increasing_in_M", increasing, "no-interpolation distortion over M_list: " + seq.str());

        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            const int M = c.M_list[i];
            const std::string tag = "_M" + std::to_string(M);
            if (M >= 100)
            {
                r.check("interp_trunc_below_no_interp" + tag, pts[i].interp_trunc < pts[i].no_interp,
                        format_number(pts[i].interp_trunc) + " < " + format_number(pts[i].no_interp));
                r.check("interp_trunc_below_interp_no_trunc" + tag, pts[i].interp_trunc < pts[i].interp_no_trunc,
                        format_number(pts[i].interp_trunc) + " < " + format_number(pts[i].interp_no_trunc));
            }
            if (M == 25)
                r.check("truncation_hurts_small_M" + tag, pts[i].interp_trunc > pts[i].interp_no_trunc,
                        format_number(pts[i].interp_trunc) + " > " + format_number(pts[i].interp_no_trunc));
        }
        return r;
    }

    inline ExperimentReport run_dof_curves(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::dof_curves;
        Table t{"dof", {"rho", "alpha", "N_per_M", "D_robust", "D_ideal"}, {}};
        const int n = static_cast<int>(std::floor(1.0 / c.rho_step - 1e-9));
        double best_rho = 0.0, best_D = -1.0, worst_equal = 0.0;
        for (int i = 1; i <= n; ++i)
        {
            double rho = i * c.rho_step;
            if (rho >= 1.0)
                break;
            DofTradeoff d = dof_tradeoff(1, c.nu, rho);
            t.rows.push_back({rho, d.alpha, d.N, d.D, rho});
            if (d.D > best_D)
            {
                best_D = d.D;
                best_rho = rho;
            }
            if (rho <= 1.0 / 3.0)
                worst_equal = std::max(worst_equal, std::abs(d.D - rho));
        }
        r.tables = {t};
        r.check("robust_dof_argmax", best_rho >= 0.48 && best_rho <= 0.52,
                "argmax of D(rho) at rho = " + format_number(best_rho) + " in [0.48, 0.52]");
        r.check("dof_equal_below_one_third", worst_equal <= 1e-9,
                "max |D(rho) - rho| for rho <= 1/3 is " + format_number(worst_equal) + " <= 1e-9");
        return r;
    }

    // Finite-M exponent h(s) on the half-integer grid s = n + 1/2 against f(s/M) and the Stirling brackets
    inline ExperimentReport run_bound_curves(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::bound_curves;
        Table t{"exponent", {"M", "s", "alpha", "f_alpha", "h", "lower", "upper"}, {}};
        for (int M : c.M_list)
        {
            double worst = 0.0;
            bool bracketed = true;
            for (int n = 0; n < M; ++n)
            {
                double s = n + 0.5;
                double a = s / M;
                double f = f_alpha(a), h = finite_m_exponent(s, M);
                ExponentBracket b = stirling_bracket(s, M);
                bracketed = bracketed && b.lower <= h && h <= b.upper;
                worst = std::max(worst, std::abs(h - f));
                t.rows.push_back({double(M), s, a, f, h, b.lower, b.upper});
            }
            r.check("stirling_bracket_M" + std::to_string(M), bracketed, "h(s) inside both brackets on the grid");
            if (M == c.M_list.back())
                r.check("exponent_close_to_f_M" + std::to_string(M), worst <= c.exponent_tolerance,
                        "max |h(s) - f(s/M)| = " + format_number(worst) + " <= " + format_number(c.exponent_tolerance));
        }
        r.tables = {t};
        return r;
    }

    // Finite-M width bound table on an s grid over [0, M rho]
    inline Table bound_table(int M, double rho, int points = 401)
    {
        Table t{"bounds", {"s", "real_part_bound", "imag_part_bound", "width_bound", "asymptotic"}, {}};
        for (int i = 0; i < points; ++i)
        {
            double s = M * rho * i / (points - 1);
            WidthBound w = width_bound(s, M, rho);
            t.rows.push_back({s, w.real_part_bound, w.imag_part_bound, w.bound, w.asymptotic});
        }
        return t;
    }

    // On-grid PSF with broad positive weights on every dictionary grid point, drawn from the seed
    inline AngularPSF random_grid_psf(int G, std::uint64_t seed)
    {
        SnapshotRng rng(seed, 7, 0);
        std::vector<Atom> atoms;
        for (int i = 0; i < G; ++i)
            atoms.push_back({G > 1 ? (i == G - 1 ? 1.0 : -1.0 + 2.0 * i / (G - 1)) : 0.0, 0.2 + rng.uniform()});
        return AngularPSF(std::move(atoms), {});
    }

    // Probe points s_i = M rho (i + 0.3) / n, which stay off the UL lattice for the default setting
    inline std::vector<double> width_probes(int M, double rho, int n)
    {
        std::vector<double> s;
        for (int i = 0; i < n; ++i)
            s.push_back(M * rho * (i + 0.3) / n);
        return s;
    }

    inline ExperimentReport run_width_sandwich(const ExperimentConfig &c)
    {
        ExperimentReport r;
        r.scenario = Scenario::width_sandwich;
        const ArrayConfig cfg(c.width_M, c.width_rho, c.nu, c.theta_max);
        const AngularPSF gamma = random_grid_psf(c.width_G, c.seed);
        std::vector<double> probes = width_probes(c.width_M, c.width_rho, c.width_probes);
        const std::size_t n_off = probes.size();
        for (int k = 0; k < c.width_M; ++k)
            probes.push_back(k * c.width_rho);

        std::vector<double> emp(probes.size()), bnd(probes.size());
        parallel_for(probes.size(), [&](std::size_t i) {
            emp[i] = empirical_width_lower_bound(gamma, cfg, probes[i], c.width_G).width;
            bnd[i] = width_bound(probes[i], c.width_M, c.width_rho).bound;
        });

        Table t{"width", {"s", "on_lattice", "empirical_lower_bound", "width_bound"}, {}};
        int violations = 0;
        double lattice_worst = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i)
        {
            bool lattice = i >= n_off;
            t.rows.push_back({probes[i], lattice ? 1.0 : 0.0, emp[i], bnd[i]});
            if (lattice)
                lattice_worst = std::max({lattice_worst, emp[i], bnd[i]});
            else if (emp[i] > bnd[i])
                ++violations;
        }
        r.tables = {t};
        r.check("empirical_below_bound", violations == 0,
                std::to_string(violations) + " violations over " + std::to_string(n_off) + " probes");
        r.check("zero_width_on_lattice", lattice_worst <= 1e-6,
                "max width estimate or bound on UL lattice " + format_number(lattice_worst) + " <= 1e-6");
        return r;
    }

    inline ExperimentReport run_experiment(const ExperimentConfig &c)
    {
        auto t0 = std::chrono::steady_clock::now();
        ExperimentReport r;
        switch (c.scenario)
        {
        case Scenario::aliasing:
            r = run_aliasing(c);
            break;
        case Scenario::interior_error:
            r = run_interior_error(c);
            break;
        case Scenario::distortion_sweep:
            r = run_distortion_sweep(c);
            break;
        case Scenario::dof_curves:
            r = run_dof_curves(c);
            break;
        case Scenario::bound_curves:
            r = run_bound_curves(c);
            break;
        case Scenario::width_sandwich:
            r = run_width_sandwich(c);
            break;
        }
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

} // namespace covinterp

#endif
