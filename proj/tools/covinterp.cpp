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

#include "covinterp/covinterp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{
    nlohmann::json load_json(const std::string &path)
    {
        if (path.empty())
            return nlohmann::json::object();
        std::ifstream f(path);
        if (!f)
            throw std::runtime_error("cannot open config file " + path);
        return nlohmann::json::parse(f);
    }

    std::ofstream open_out(const std::string &path)
    {
        std::filesystem::path p(path);
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot write " + path);
        return f;
    }
} // namespace

int main(int argc, char **argv)
{
    using namespace covinterp;
    CLI::App app{"covinterp: uplink/downlink covariance interpolation experiments"};
    app.require_subcommand(1);

    std::string scenario, config_path, out_dir = "out";
    auto *run = app.add_subcommand("run", "Run an experiment scenario and write CSV tables plus a summary");
    run->add_option("scenario", scenario,
                    "aliasing | interior_error | distortion_sweep | dof_curves | bound_curves | width_sandwich")
        ->required();
    run->add_option("--config", config_path, "JSON config file (missing keys keep defaults)");
    run->add_option("--out", out_dir, "Output directory");

    int bM = 0;
    double brho = 0.0;
    int bpoints = 401;
    std::string bout;
    auto *bounds = app.add_subcommand("bounds", "Write finite-M width bounds over s in [0, M rho]");
    bounds->add_option("--M", bM, "Number of antennas")->required()->check(CLI::PositiveNumber);
    bounds->add_option("--rho", brho, "Oversampling factor in (0, 1)")->required();
    bounds->add_option("--points", bpoints, "Number of s grid points")->check(CLI::Range(2, 1000000));
    bounds->add_option("--out", bout, "Output CSV")->required();

    std::string sigma_path, mode_text = "theory", iout, solver_path;
    int iM = 0, iG = 0;
    double irho = 0.0, inu = 0.0, itheta = pi / 3.0;
    auto *interp = app.add_subcommand("interpolate", "Interpolate a DL first column from a UL first column CSV");
    interp->add_option("--sigma-ul", sigma_path, "CSV with columns index,re,im")->required();
    interp->add_option("--M", iM, "Number of antennas")->required()->check(CLI::PositiveNumber);
    interp->add_option("--rho", irho, "Oversampling factor")->required();
    interp->add_option("--nu", inu, "Carrier ratio f_ul / f_dl")->required();
    interp->add_option("--theta-max", itheta, "Maximum angle in radians");
    interp->add_option("--mode", mode_text, "theory or fraction=<f>");
    interp->add_option("--G", iG, "Dictionary size (default 4M)");
    interp->add_option("--solver", solver_path, "Solver JSON config");
    interp->add_option("--out", iout, "Output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            const Scenario sc = scenario_from_string(scenario);
            const ExperimentConfig cfg = experiment_config_from_json(sc, load_json(config_path));
            const ExperimentReport rep = run_experiment(cfg);
            write_report(out_dir, rep);
            write_summary(std::cout, rep);
            std::cout << "wall time " << format_number(rep.wall_seconds) << " s\n";
            return rep.all_passed() ? 0 : 1;
        }
        if (*bounds)
        {
            auto f = open_out(bout);
            write_table_csv(f, bound_table(bM, brho, bpoints));
            return 0;
        }
        if (*interp)
        {
            std::ifstream in(sigma_path);
            if (!in)
                throw std::runtime_error("cannot open " + sigma_path);
            const CVector sigma = read_column_csv(in);
            const ArrayConfig cfg(iM, irho, inu, itheta);
            const SolverConfig solver = solver_path.empty() ? SolverConfig{} : solver_config_from_json(load_json(solver_path));
            const auto res = run_algorithm1(sigma, cfg, solver, TruncationMode::parse(mode_text), iG);
            if (res.interpolation.kept.aliasing_warning)
                std::cerr << "warning: rho >= 1 violates the spatial sampling condition; only k = 0 is kept\n";
            auto f = open_out(iout);
            write_interpolation_csv(f, res.interpolation);
            std::cout << "kept " << res.interpolation.kept.size() << " of " << iM << " DL coefficients, NNLS KKT residual "
                      << format_number(res.report.kkt_residual) << (res.report.converged ? "" : " (not converged)") << '\n';
            return res.report.converged ? 0 : 1;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
