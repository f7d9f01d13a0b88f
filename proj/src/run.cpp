#include "nsf/run.hpp"

#include <cmath>

#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

Trajectory run(const RunConfig& cfg) {
    return run_from(cfg, generate_initial(cfg.initial, cfg.grid));
}

Trajectory run_from(const RunConfig& cfg, SphereField u0) {
    const TorusGrid& grid = cfg.grid;
    const CouplingBounds b = bounds(cfg.coupling, grid);

    Trajectory traj;
    traj.dt = cfg.resolved_dt();
    traj.steps = cfg.step_count();
    traj.delta = b.delta;
    traj.eta = b.eta;

    FlowState state;
    state.u = std::move(u0);
    state.eps = cfg.eps;

    StepControl ctl;
    ctl.dt = traj.dt;
    ctl.cfl = cfg.cfl;
    ctl.scheme = cfg.scheme;

    CouplingSampler sampler(cfg.coupling, grid);
    CouplingSampler record_sampler(cfg.coupling, grid);

    auto record = [&](const FlowState& s) {
        const CouplingSamples& fs = record_sampler.at(s.t);
        TrajectorySample sample;
        sample.step = s.step;
        sample.t = s.t;
        sample.u = s.u;
        sample.rec = diagnostics_record(s.u, fs, cfg.kmax);
        sample.rec.t = s.t;
        sample.sandwich_pass = sandwich_all(sample.rec, b.delta, b.eta);
        traj.samples.push_back(std::move(sample));
    };

    record(state);
    for (std::size_t s = 1; s <= traj.steps; ++s) {
        state = step(state, sampler, ctl);
        if (s % static_cast<std::size_t>(cfg.sample_every) == 0 || s == traj.steps)
            record(state);
    }
    if (cfg.residuals) attach_residuals(traj, cfg);
    return traj;
}

void attach_residuals(Trajectory& traj, const RunConfig& cfg) {
    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        TrajectorySample& sm = traj.samples[i];
        const TrajectorySample& lo = traj.samples[i - 1];
        const TrajectorySample& hi = traj.samples[i + 1];
        if (std::fabs((hi.t - sm.t) - (sm.t - lo.t)) > 1e-12 * traj.dt) continue;
        sm.rec.energy_residual = energy_identity_residual(lo.u, lo.t, sm.u, sm.t, hi.u, hi.t,
                                                          cfg.coupling, cfg.eps);
        sm.rec.commuted_residual =
            commuted_equation_residual(lo.u, sm.u, hi.u, sm.t - lo.t);
    }
}

AmbientTrajectory run_ambient(const RunConfig& cfg) {
    const TorusGrid& grid = cfg.grid;
    const CouplingBounds b = bounds(cfg.coupling, grid);

    AmbientTrajectory traj;
    traj.dt = cfg.resolved_dt();
    traj.steps = cfg.step_count();
    traj.delta = b.delta;
    traj.eta = b.eta;

    const SphereField u0 = generate_initial(cfg.initial, grid);
    AmbientState state;
    state.grid = grid;
    state.v.resize(u0.values.size());
    par::for_each(state.v.size(),
                  [&](std::size_t i) { state.v[i] = u0.values[i] * cfg.tube_scale; });
    state.eps = cfg.eps;
    state.tube_d = cfg.tube_d;

    StepControl ctl;
    ctl.dt = traj.dt;
    ctl.cfl = cfg.cfl;
    ctl.scheme = cfg.scheme;

    CouplingSampler sampler(cfg.coupling, grid);
    CouplingSampler record_sampler(cfg.coupling, grid);

    auto record = [&](const AmbientState& s) {
        const CouplingSamples& fs = record_sampler.at(s.t);
        AmbientSample sample;
        sample.step = s.step;
        sample.t = s.t;
        sample.v = s.v;

        SphereField p{grid, VecField(s.v.size())};
        VecField rho(s.v.size());
        par::for_each(s.v.size(), [&](std::size_t i) {
            p.values[i] = geo::project_point(s.v[i]);
            rho[i] = s.v[i] - p.values[i];
        });
        sample.rec = diagnostics_record(p, fs, cfg.kmax);
        sample.rec.t = s.t;
        sample.rec.tube_E = tube_energy(grid, s.v, fs);

        ScalarField g2(s.v.size(), 0.0);
        for (int j = 0; j < grid.m; ++j) {
            const VecField dj = diff_central(grid, rho, j);
            par::for_each(g2.size(), [&](std::size_t i) { g2[i] += norm2(dj[i]); });
        }
        sample.max_grad_rho2 = par::max(g2.size(), [&](std::size_t i) { return g2[i]; });
        traj.samples.push_back(std::move(sample));
    };

    record(state);
    for (std::size_t s = 1; s <= traj.steps; ++s) {
        state = step_ambient(state, sampler, ctl);
        if (s % static_cast<std::size_t>(cfg.sample_every) == 0 || s == traj.steps)
            record(state);
    }
    return traj;
}

} // namespace nsf
