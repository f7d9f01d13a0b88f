#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsf/errors.hpp"
#include "nsf/estimates.hpp"
#include "nsf/experiments.hpp"
#include "nsf/version.hpp"

namespace {

nsf::RunConfig load_or_exit(const std::string& path) {
    try {
        return nsf::load_config(path);
    } catch (const nsf::ConfigError& e) {
        std::cerr << e.what() << "\n";
        std::exit(nsf::kExitConfigError);
    }
}

std::vector<std::pair<double, double>> read_series(const std::string& path,
                                                   const std::string& column) {
    std::ifstream in(path);
    if (!in) throw nsf::Error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw nsf::Error("empty CSV " + path);
    std::vector<std::string> cols;
    {
        std::stringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    std::size_t tcol = cols.size(), ycol = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "t") tcol = i;
        if (cols[i] == column) ycol = i;
    }
    if (tcol == cols.size() || ycol == cols.size())
        throw nsf::Error("CSV lacks column 't' or '" + column + "'");
    std::vector<std::pair<double, double>> series;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::size_t i = 0;
        double t = 0.0, y = 0.0;
        while (std::getline(ls, cell, ',')) {
            if (i == tcol) t = std::stod(cell);
            if (i == ycol) y = std::stod(cell);
            ++i;
        }
        series.emplace_back(t, y);
    }
    return series;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonautonomous Schrodinger flow laboratory"};
    app.set_version_flag("--version", nsf::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.0};
    std::vector<int> k_list = {1, 2, 4};
    double theta = 0.0;
    std::string axis = "z";
    double tube_scale_override = -1.0;

    auto* run_cmd = app.add_subcommand("run", "integrate one configured flow");
    run_cmd->add_option("config", config_path, "run configuration file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep-eps", "compare regularized runs against eps=0");
    sweep_cmd->add_option("config", config_path)->required();
    sweep_cmd->add_option("--eps", eps_list, "epsilon values");

    auto* uniq_cmd = app.add_subcommand("uniqueness", "two-solution energy functional study");
    uniq_cmd->add_option("config", config_path)->required();
    uniq_cmd->add_option("--theta", theta, "initial rotation angle; 0 = cross-scheme pair");
    uniq_cmd->add_option("--axis", axis, "rotation axis x|y|z");

    auto* expand_cmd = app.add_subcommand("expand-torus", "fixed-spacing growing-period study");
    expand_cmd->add_option("config", config_path)->required();
    expand_cmd->add_option("--k", k_list, "period scale factors");

    auto* tube_cmd = app.add_subcommand("tube", "unconstrained run in the tubular neighborhood");
    tube_cmd->add_option("config", config_path)->required();
    tube_cmd->add_option("--scale", tube_scale_override, "initial radial scale override");

    double D = 1.0, Q = 2.0, U0 = 0.0, A = 0.0, B = 0.0, tmax = -1.0, tstar = 1.0;
    int samples = 20;
    bool linear = false;
    auto* ode_cmd = app.add_subcommand("ode", "print comparison-ODE tables");
    ode_cmd->add_option("--D", D);
    ode_cmd->add_option("--Q", Q);
    ode_cmd->add_option("--U0", U0);
    ode_cmd->add_flag("--linear", linear, "linear cascade dU/dt = A + B U");
    ode_cmd->add_option("--A", A);
    ode_cmd->add_option("--B", B);
    ode_cmd->add_option("--tmax", tmax, "table end time (default 0.9 t* or 1)");
    ode_cmd->add_option("--tstar", tstar, "horizon for the safe-time report");
    ode_cmd->add_option("--samples", samples);

    std::string series_csv, series_column = "Hkf_2";
    auto* verify_cmd =
        app.add_subcommand("verify", "check a recorded series against a supersolution");
    verify_cmd->add_option("csv", series_csv, "diagnostics CSV")->required();
    verify_cmd->add_option("--column", series_column, "series column name");
    verify_cmd->add_option("--D", D);
    verify_cmd->add_option("--Q", Q);
    verify_cmd->add_option("--U0", U0);
    verify_cmd->add_flag("--linear", linear);
    verify_cmd->add_option("--A", A);
    verify_cmd->add_option("--B", B);

    int n = 64, modes = 8, sections = 200, rep = 1;
    double L = 6.283185307179586;
    std::uint64_t seed = 1;
    nsf::GnExponents gn;
    gn.j = 1;
    gn.k = 2;
    gn.a = 0.5;
    auto* gn_cmd = app.add_subcommand("gn-check", "empirical interpolation-inequality ratio");
    gn_cmd->add_option("--n", n);
    gn_cmd->add_option("--L", L);
    gn_cmd->add_option("--sections", sections);
    gn_cmd->add_option("--seed", seed);
    gn_cmd->add_option("--modes", modes);
    gn_cmd->add_option("--rep", rep, "base periods spanned by the torus");
    gn_cmd->add_option("--j", gn.j);
    gn_cmd->add_option("--k", gn.k);
    gn_cmd->add_option("--p", gn.p);
    gn_cmd->add_option("--q", gn.q);
    gn_cmd->add_option("--r", gn.r);
    gn_cmd->add_option("--a", gn.a);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return nsf::cmd_run(load_or_exit(config_path));
        if (*sweep_cmd) return nsf::cmd_sweep_eps(load_or_exit(config_path), eps_list);
        if (*uniq_cmd)
            return nsf::cmd_uniqueness(load_or_exit(config_path), theta, axis.at(0));
        if (*expand_cmd) return nsf::cmd_expand_torus(load_or_exit(config_path), k_list);
        if (*tube_cmd) {
            nsf::RunConfig cfg = load_or_exit(config_path);
            if (tube_scale_override >= 0.0) {
                cfg.tube_scale = tube_scale_override;
                if (!(cfg.tube_scale >= 1.0 && cfg.tube_scale < 1.0 + 0.5 * cfg.tube_d)) {
                    std::cerr << "tube: scale must lie in [1, 1 + tube_d/2)\n";
                    return nsf::kExitConfigError;
                }
            }
            return nsf::cmd_tube(cfg);
        }
        if (*ode_cmd) {
            if (linear) {
                const nsf::LinearCascadeOde ode(A, B, U0);
                const double end = tmax > 0.0 ? tmax : 1.0;
                std::printf("t,U\n");
                for (int i = 0; i <= samples; ++i) {
                    const double t = end * i / samples;
                    std::printf("%.17g,%.17g\n", t, nsf::linear_cascade_solution(ode, t));
                }
            } else {
                const nsf::NonlinearOde ode(D, Q, U0);
                const double bt = nsf::blowup_time(ode);
                const double end = tmax > 0.0 ? tmax : 0.9 * bt;
                std::printf("t,U\n");
                for (int i = 0; i <= samples; ++i) {
                    const double t = end * i / samples;
                    std::printf("%.17g,%.17g\n", t, nsf::nonlinear_supersolution(ode, t));
                }
                std::printf("# blow-up time = %.17g, safe horizon = %.17g\n", bt,
                            nsf::safe_horizon(ode, tstar));
            }
            return 0;
        }
        if (*verify_cmd) {
            const auto series = read_series(series_csv, series_column);
            std::vector<double> ts, ys;
            for (const auto& [t, y] : series) {
                ts.push_back(t);
                ys.push_back(y);
            }
            const nsf::ComparisonOde ode =
                linear ? nsf::ComparisonOde(nsf::LinearCascadeOde(A, B, U0))
                       : nsf::ComparisonOde(nsf::NonlinearOde(D, Q, U0));
            const auto rep_out = nsf::verify_supersolution(ts, ys, ode);
            if (rep_out.pass) {
                std::printf("verify: PASS (%zu samples below the supersolution)\n", ts.size());
                return 0;
            }
            std::printf("verify: FAIL at sample %zu (t = %.17g, excess %.3e)\n",
                        *rep_out.first_violation, ts[*rep_out.first_violation],
                        rep_out.worst_excess);
            return 1;
        }
        if (*gn_cmd) {
            const nsf::TorusGrid grid = nsf::TorusGrid::line(n, L);
            const double ratio =
                nsf::gn_ensemble_max_ratio(grid, sections, seed, modes, gn, rep);
            std::printf("max ratio over %d sections: %.17g\n", sections, ratio);
            return 0;
        }
    } catch (const nsf::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return nsf::kExitConfigError;
    } catch (const nsf::StepRejected& e) {
        std::cerr << "step " << e.step_index << " rejected: " << e.what() << "\n";
        return nsf::kExitStepError;
    } catch (const nsf::LeftTube& e) {
        std::cerr << "step " << e.step_index << ": " << e.what() << "\n";
        return nsf::kExitStepError;
    } catch (const nsf::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
