#include "nsf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "nsf/errors.hpp"
#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"
#include "nsf/rng.hpp"
#include "nsf/snapshot.hpp"
#include "nsf/version.hpp"

namespace nsf {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_row(std::string& out, const DiagnosticsRecord& rec, bool ambient,
                bool residual_columns) {
    out += fmt(rec.t);
    out += ',';
    out += fmt(rec.E_f);
    for (double v : rec.Hkf) {
        out += ',';
        out += fmt(v);
    }
    for (double v : rec.Hk) {
        out += ',';
        out += fmt(v);
    }
    out += ',';
    out += fmt(rec.unit_err);
    out += ',';
    out += fmt(rec.max_tau_f);
    if (ambient) {
        out += ',';
        out += fmt(rec.tube_E.value_or(0.0));
    }
    if (residual_columns) {
        out += ',';
        out += fmt(rec.energy_residual.value_or(0.0));
        out += ',';
        out += fmt(rec.commuted_residual.value_or(0.0));
    }
    out += '\n';
}

std::string csv_header(std::size_t kmax, bool ambient, bool residual_columns) {
    std::string h = "t,E_f";
    for (std::size_t k = 1; k <= kmax; ++k) h += ",Hkf_" + std::to_string(k);
    for (std::size_t k = 1; k <= kmax; ++k) h += ",Hk_" + std::to_string(k);
    h += ",unit_err,max_tau_f";
    if (ambient) h += ",tube_E";
    if (residual_columns) h += ",energy_residual,commuted_residual";
    h += '\n';
    return h;
}

} // namespace

std::string csv_text(const Trajectory& traj, bool residual_columns) {
    const std::size_t kmax = traj.samples.empty() ? 0 : traj.samples.front().rec.Hkf.size();
    std::string out = csv_header(kmax, false, residual_columns);
    for (const auto& s : traj.samples) append_row(out, s.rec, false, residual_columns);
    return out;
}

std::string csv_text(const AmbientTrajectory& traj) {
    const std::size_t kmax = traj.samples.empty() ? 0 : traj.samples.front().rec.Hkf.size();
    std::string out = csv_header(kmax, true, false);
    for (const auto& s : traj.samples) append_row(out, s.rec, true, false);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("short write to " + path);
}

void write_manifest(const std::string& path, const RunConfig& cfg, double dt,
                    std::size_t steps, double wall_seconds, int exit_code) {
    nlohmann::json j;
    j["config"] = print_config(cfg);
    j["build"] = kBuildId;
    j["dt"] = dt;
    j["steps"] = steps;
    j["wall_seconds"] = wall_seconds;
    j["exit_code"] = exit_code;
    write_text(path, j.dump(2) + "\n");
}

double sup_distance(const SphereField& a, const SphereField& b) {
    return par::max(a.values.size(), [&](std::size_t i) {
        return geo::geodesic_distance(a.values[i], b.values[i]);
    });
}

int cmd_run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Trajectory traj;
    int code = kExitOk;
    try {
        traj = run(cfg);
    } catch (const StepRejected& e) {
        std::cerr << "run: step " << e.step_index << " rejected: " << e.what() << "\n";
        code = kExitStepError;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (code == kExitOk) {
        if (!cfg.csv_path.empty()) write_text(cfg.csv_path, csv_text(traj, cfg.residuals));
        if (!cfg.snapshot_prefix.empty()) {
            for (const auto& s : traj.samples) {
                char suffix[32];
                std::snprintf(suffix, sizeof suffix, "_%08zu.nsf", s.step);
                write_snapshot(cfg.snapshot_prefix + suffix, cfg.grid, s.u.values, s.t,
                               cfg.eps);
            }
        }
        for (const auto& s : traj.samples) {
            if (!s.sandwich_pass) {
                std::cerr << "run: weighted-norm sandwich violated at t = " << s.t << "\n";
                code = 1;
            }
        }
    }
    if (!cfg.manifest_path.empty())
        write_manifest(cfg.manifest_path, cfg, cfg.resolved_dt(), cfg.step_count(), wall, code);
    return code;
}

SweepResult sweep_eps(const RunConfig& cfg, const std::vector<double>& eps_list) {
    RunConfig ref_cfg = cfg;
    ref_cfg.eps = 0.0;
    const Trajectory ref = run(ref_cfg);

    SweepResult res;
    std::vector<double> sorted = eps_list;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    for (double e : sorted) {
        RunConfig c = cfg;
        c.eps = e;
        const Trajectory tr = e == 0.0 ? ref : run(c);
        res.eps.push_back(e);
        res.sup_dist.push_back(sup_distance(tr.samples.back().u, ref.samples.back().u));
    }
    res.ordered = true;
    for (std::size_t i = 0; i + 1 < res.eps.size(); ++i) {
        if (res.eps[i + 1] == 0.0) continue;
        if (!(res.sup_dist[i] > res.sup_dist[i + 1])) res.ordered = false;
    }
    return res;
}

int cmd_sweep_eps(const RunConfig& cfg, const std::vector<double>& eps_list) {
    try {
        const SweepResult res = sweep_eps(cfg, eps_list);
        std::string out = "eps,sup_dist\n";
        for (std::size_t i = 0; i < res.eps.size(); ++i)
            out += fmt(res.eps[i]) + "," + fmt(res.sup_dist[i]) + "\n";
        if (!cfg.csv_path.empty()) write_text(cfg.csv_path, out);
        std::cout << out;
        std::cout << "ordering (distance decreasing with eps): "
                  << (res.ordered ? "yes" : "no") << "\n";
        return kExitOk;
    } catch (const StepRejected& e) {
        std::cerr << "sweep-eps: step " << e.step_index << " rejected: " << e.what() << "\n";
        return kExitStepError;
    }
}

PairSeries uniqueness_pair(const RunConfig& cfg, double theta, char axis) {
    const SphereField u0 = generate_initial(cfg.initial, cfg.grid);

    RunConfig c1 = cfg, c2 = cfg;
    SphereField u0_b = u0;
    if (theta == 0.0) {
        c1.scheme = Scheme::RK4;
        c2.scheme = Scheme::Euler;
    } else {
        u0_b = rotate_field(u0, axis, theta);
    }
    const Trajectory t1 = run_from(c1, u0);
    const Trajectory t2 = run_from(c2, std::move(u0_b));

    PairSeries series;
    CouplingSampler sampler(cfg.coupling, cfg.grid);
    for (std::size_t i = 0; i < t1.samples.size(); ++i) {
        const auto& s1 = t1.samples[i];
        const auto& s2 = t2.samples[i];
        PairDiagnostics pd = uniqueness_energy(s1.u, s2.u, sampler.at(s1.t));
        pd.t = s1.t;
        series.rows.push_back(pd);
    }

    std::vector<double> ts, Es;
    for (const auto& r : series.rows) {
        ts.push_back(r.t);
        Es.push_back(r.energy);
    }
    try {
        const GronwallFit fit = gronwall_fit(ts, Es, cfg.grid.volume());
        series.all_zero = fit.all_zero;
        series.fitted = !fit.all_zero;
        series.C = fit.C;
    } catch (const ZeroInitialEnergy&) {
        series.fitted = false;
    }
    return series;
}

int cmd_uniqueness(const RunConfig& cfg, double theta, char axis) {
    try {
        const PairSeries series = uniqueness_pair(cfg, theta, axis);
        std::string out = "t,maxdist,E,flag\n";
        for (const auto& r : series.rows)
            out += fmt(r.t) + "," + fmt(r.max_dist) + "," + fmt(r.energy) + "," +
                   (r.exceeds_delta0 ? "1" : "0") + "\n";
        if (!cfg.csv_path.empty()) write_text(cfg.csv_path, out);
        std::cout << out;
        if (series.all_zero)
            std::cout << "gronwall: all_zero\n";
        else if (series.fitted)
            std::cout << "gronwall C = " << fmt(series.C) << "\n";
        else
            std::cout << "gronwall: no certificate (zero initial energy)\n";
        return kExitOk;
    } catch (const StepRejected& e) {
        std::cerr << "uniqueness: step " << e.step_index << " rejected: " << e.what() << "\n";
        return kExitStepError;
    }
}

namespace {

RunConfig scaled_torus_config(const RunConfig& base, int k) {
    RunConfig c = base;
    c.grid = base.grid.m == 1
                 ? TorusGrid::line(base.grid.n[0] * k, base.grid.L[0] * k)
                 : TorusGrid::plane(base.grid.n[0] * k, base.grid.n[1] * k,
                                    base.grid.L[0] * k, base.grid.L[1] * k);
    for (auto& tm : c.coupling.terms)
        for (int j = 0; j < base.grid.m; ++j) tm.k[j] *= k;
    c.initial.winding = base.initial.winding * k;
    return c;
}

} // namespace

ExpandResult expand_torus(const RunConfig& cfg, const std::vector<int>& k_list) {
    if (cfg.initial.family != InitialSpec::Family::Bump &&
        cfg.initial.family != InitialSpec::Family::Equator)
        throw ConfigError("expand-torus: initial family must be bump (or equator)");
    if (cfg.initial.family == InitialSpec::Family::Bump) {
        if (cfg.initial.bump_center < 0.0 || cfg.initial.bump_center >= cfg.grid.L[0])
            throw ConfigError("expand-torus: bump center must lie inside the base window");
        if (cfg.initial.bump_width > 0.5 * cfg.grid.L[0])
            throw ConfigError("expand-torus: bump must be supported inside the base window");
    }
    for (int k : k_list)
        if (k < 1) throw ConfigError("expand-torus: scale factors must be >= 1");

    ExpandResult res;
    res.k = k_list;
    std::vector<SphereField> finals;
    for (int k : k_list) finals.push_back(run(scaled_torus_config(cfg, k)).samples.back().u);

    const std::size_t wn0 = static_cast<std::size_t>(cfg.grid.n[0]);
    const std::size_t wn1 = cfg.grid.m == 2 ? static_cast<std::size_t>(cfg.grid.n[1]) : 1;
    for (std::size_t r = 0; r + 1 < finals.size(); ++r) {
        const SphereField& a = finals[r];
        const SphereField& b = finals[r + 1];
        double worst = 0.0;
        for (std::size_t i1 = 0; i1 < wn1; ++i1) {
            for (std::size_t i0 = 0; i0 < wn0; ++i0) {
                const Vec3 va = a.values[i0 + static_cast<std::size_t>(a.grid.n[0]) * i1];
                const Vec3 vb = b.values[i0 + static_cast<std::size_t>(b.grid.n[0]) * i1];
                worst = std::max(worst, geo::geodesic_distance(va, vb));
            }
        }
        res.window_dist.push_back(worst);
    }
    res.ordered = res.window_dist.size() < 2 ||
                  res.window_dist.back() < res.window_dist.front();
    return res;
}

int cmd_expand_torus(const RunConfig& cfg, const std::vector<int>& k_list) {
    try {
        const ExpandResult res = expand_torus(cfg, k_list);
        std::string out = "k_from,k_to,window_dist\n";
        for (std::size_t i = 0; i < res.window_dist.size(); ++i)
            out += std::to_string(res.k[i]) + "," + std::to_string(res.k[i + 1]) + "," +
                   fmt(res.window_dist[i]) + "\n";
        if (!cfg.csv_path.empty()) write_text(cfg.csv_path, out);
        std::cout << out;
        std::cout << "ordering (last difference < first): " << (res.ordered ? "yes" : "no")
                  << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const StepRejected& e) {
        std::cerr << "expand-torus: step " << e.step_index << " rejected: " << e.what()
                  << "\n";
        return kExitStepError;
    }
}

TubeResult tube_run(const RunConfig& cfg) {
    TubeResult res;
    res.traj = run_ambient(cfg);
    double scale = 0.0;
    for (const auto& s : res.traj.samples) scale = std::max(scale, s.max_grad_rho2);
    res.slack = 10.0 * res.traj.dt * res.traj.dt * scale;
    res.monotone = true;
    if (cfg.coupling.time_independent()) {
        for (std::size_t i = 0; i + 1 < res.traj.samples.size(); ++i) {
            const double e0 = res.traj.samples[i].rec.tube_E.value_or(0.0);
            const double e1 = res.traj.samples[i + 1].rec.tube_E.value_or(0.0);
            if (e1 > e0 + res.slack) res.monotone = false;
        }
    }
    return res;
}

int cmd_tube(const RunConfig& cfg) {
    try {
        const TubeResult res = tube_run(cfg);
        if (!cfg.csv_path.empty()) write_text(cfg.csv_path, csv_text(res.traj));
        std::cout << "tube run: " << res.traj.samples.size() << " samples, final tube_E = "
                  << fmt(res.traj.samples.back().rec.tube_E.value_or(0.0)) << "\n";
        if (cfg.coupling.time_independent())
            std::cout << "tube energy non-increasing within slack " << fmt(res.slack) << ": "
                      << (res.monotone ? "yes" : "no") << "\n";
        return kExitOk;
    } catch (const LeftTube& e) {
        std::cerr << "tube: step " << e.step_index << ": " << e.what() << "\n";
        return kExitStepError;
    }
}

VecField gn_section(const TorusGrid& grid, std::uint64_t seed, int modes, int rep) {
    Rng rng(seed);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    struct Mode {
        double a;
        int k0, k1;
        double phi0, phi1;
    };
    std::vector<std::vector<Mode>> comp_modes(3);
    const int kmax1 = grid.m == 2 ? modes : 0;
    for (int c = 0; c < 3; ++c) {
        for (int k0 = 0; k0 <= modes; ++k0) {
            for (int k1 = 0; k1 <= kmax1; ++k1) {
                if (k0 + k1 == 0) continue;
                comp_modes[c].push_back({rng.uniform(-1.0, 1.0), k0 * rep, k1 * rep,
                                         rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi)});
            }
        }
    }
    VecField s(grid.points());
    par::for_each(s.size(), [&](std::size_t i) {
        const double x0 = grid.coord(i, 0);
        const double x1 = grid.m == 2 ? grid.coord(i, 1) : 0.0;
        double g[3];
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (const auto& m : comp_modes[c]) {
                double v = m.a * std::cos(kTwoPi * m.k0 * x0 / grid.L[0] + m.phi0);
                if (grid.m == 2) v *= std::cos(kTwoPi * m.k1 * x1 / grid.L[1] + m.phi1);
                acc += v;
            }
            g[c] = acc;
        }
        s[i] = {g[0], g[1], g[2]};
    });
    return s;
}

double gn_ensemble_max_ratio(const TorusGrid& grid, int sections, std::uint64_t seed,
                             int modes, const GnExponents& e, int rep) {
    double worst = 0.0;
    for (int s = 0; s < sections; ++s) {
        const VecField sec = gn_section(grid, seed + static_cast<std::uint64_t>(s), modes, rep);
        worst = std::max(worst, gn_probe(grid, sec, nullptr, e));
    }
    return worst;
}

} // namespace nsf
