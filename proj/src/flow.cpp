#include "nsf/flow.hpp"

#include <cmath>
#include <string>

#include "nsf/errors.hpp"
#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

double StepControl::budget(const TorusGrid& grid, double eta, double eps, double c) {
    const double hmin = grid.min_h();
    return c * hmin * hmin / (eta * (1.0 + eps) * 4.0 * grid.m);
}

namespace {

// tau_f evaluated on raw (not necessarily unit) point values, as used at the
// interior stages of an explicit step.
VecField tension_f_raw(const TorusGrid& grid, const VecField& u, const CouplingSamples& fs) {
    VecField out(u.size());
    const int m = grid.m;
    std::array<double, 2> inv2h = {1.0 / (2.0 * grid.h[0]), 0.0};
    std::array<double, 2> invh2 = {1.0 / (grid.h[0] * grid.h[0]), 0.0};
    if (m == 2) {
        inv2h[1] = 1.0 / (2.0 * grid.h[1]);
        invh2[1] = 1.0 / (grid.h[1] * grid.h[1]);
    }
    par::for_each(u.size(), [&](std::size_t i) {
        const Vec3 ui = u[i];
        Vec3 acc{0.0, 0.0, 0.0};
        for (int j = 0; j < m; ++j) {
            const Vec3 up = u[grid.shift(i, j, 1)];
            const Vec3 um = u[grid.shift(i, j, -1)];
            const Vec3 lap = (up + um - ui * 2.0) * invh2[j];
            const Vec3 dj = (up - um) * inv2h[j];
            acc += geo::project_tangent(ui, lap) * fs.f[i];
            acc += geo::project_tangent(ui, dj) * fs.df[j][i];
        }
        out[i] = acc;
    });
    return out;
}

VecField rhs_raw(const TorusGrid& grid, const VecField& u, const CouplingSamples& fs,
                 double eps) {
    VecField tf = tension_f_raw(grid, u, fs);
    par::for_each(u.size(), [&](std::size_t i) { tf[i] = tf[i] * eps + cross(u[i], tf[i]); });
    return tf;
}

VecField axpy(const VecField& u, double a, const VecField& k) {
    VecField out(u.size());
    par::for_each(u.size(), [&](std::size_t i) { out[i] = u[i] + k[i] * a; });
    return out;
}

template <typename Rhs>
VecField explicit_update(const VecField& u, double t, double dt, Scheme scheme,
                         Rhs&& rhs_at) {
    VecField k1 = rhs_at(u, t);
    if (scheme == Scheme::Euler) return axpy(u, dt, k1);
    VecField k2 = rhs_at(axpy(u, 0.5 * dt, k1), t + 0.5 * dt);
    VecField k3 = rhs_at(axpy(u, 0.5 * dt, k2), t + 0.5 * dt);
    VecField k4 = rhs_at(axpy(u, dt, k3), t + dt);
    VecField out(u.size());
    par::for_each(u.size(), [&](std::size_t i) {
        out[i] = u[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
    });
    return out;
}

} // namespace

VecField tension(const SphereField& u) {
    VecField lap = laplacian(u.grid, u.values);
    par::for_each(lap.size(),
                  [&](std::size_t i) { lap[i] = geo::project_tangent(u.values[i], lap[i]); });
    return lap;
}

VecField tension_f(const SphereField& u, const CouplingSamples& fs) {
    return tension_f_raw(u.grid, u.values, fs);
}

VecField rhs(const SphereField& u, const CouplingSamples& fs, double eps) {
    return rhs_raw(u.grid, u.values, fs, eps);
}

FlowState step(const FlowState& state, CouplingSampler& f, const StepControl& ctl) {
    const TorusGrid& grid = state.u.grid;
    VecField w = explicit_update(state.u.values, state.t, ctl.dt, ctl.scheme,
                                 [&](const VecField& u, double t) {
                                     return rhs_raw(grid, u, f.at(t), state.eps);
                                 });
    const double drift =
        par::max(w.size(), [&](std::size_t i) { return std::fabs(norm(w[i]) - 1.0); });
    if (drift > 0.1)
        throw StepRejected("step: pre-projection norm drift " + std::to_string(drift),
                           state.step);
    par::for_each(w.size(), [&](std::size_t i) { w[i] = w[i] / norm(w[i]); });
    FlowState next;
    next.u = {grid, std::move(w)};
    next.t = state.t + ctl.dt;
    next.eps = state.eps;
    next.step = state.step + 1;
    return next;
}

double lambda_cutoff(double s, double d) {
    const double lo = 0.25 * d * d;        // (d/2)^2
    const double hi = 0.5625 * d * d;      // (3d/4)^2
    if (s <= lo) return 1.0;
    if (s >= hi) return 0.0;
    const double w = (s - lo) / (hi - lo);
    return 1.0 - w * w * w * (10.0 + w * (-15.0 + 6.0 * w));
}

namespace {

VecField rhs_ambient_raw(const TorusGrid& grid, const VecField& v, const CouplingSamples& fs,
                         double eps, double tube_d) {
    const std::size_t npts = v.size();
    // Projected field and its cutoff weights. The divisor is clamped instead
    // of throwing: stage values sit within one step of a state inside the
    // tube, and the post-step containment check aborts runaway runs.
    VecField p(npts);
    ScalarField lam(npts);
    par::for_each(npts, [&](std::size_t i) {
        const double r = norm(v[i]);
        p[i] = v[i] / (r > 1e-8 ? r : 1e-8);
        lam[i] = lambda_cutoff((r - 1.0) * (r - 1.0), tube_d);
    });

    const int m = grid.m;
    std::array<double, 2> inv2h = {1.0 / (2.0 * grid.h[0]), 0.0};
    std::array<double, 2> invh2 = {1.0 / (grid.h[0] * grid.h[0]), 0.0};
    if (m == 2) {
        inv2h[1] = 1.0 / (2.0 * grid.h[1]);
        invh2[1] = 1.0 / (grid.h[1] * grid.h[1]);
    }

    VecField out(npts);
    par::for_each(npts, [&](std::size_t i) {
        const Vec3 pi = p[i];
        Vec3 lap_v{0.0, 0.0, 0.0};
        Vec3 tau_f{0.0, 0.0, 0.0};
        Vec3 df_dp{0.0, 0.0, 0.0};
        double q = 0.0; // -<Delta_h p, p> via one-sided squares, so the
                        // curvature term cancels the normal part of Delta_h p
                        // pointwise and on-sphere states stay on-sphere
        for (int j = 0; j < m; ++j) {
            const Vec3 vp = v[grid.shift(i, j, 1)];
            const Vec3 vm = v[grid.shift(i, j, -1)];
            lap_v += (vp + vm - v[i] * 2.0) * invh2[j];

            const Vec3 pp = p[grid.shift(i, j, 1)];
            const Vec3 pm = p[grid.shift(i, j, -1)];
            const Vec3 lap_p = (pp + pm - pi * 2.0) * invh2[j];
            const Vec3 djp = (pp - pm) * inv2h[j];
            q += 0.5 * (norm2(pp - pi) + norm2(pm - pi)) * invh2[j];
            const Vec3 tdjp = geo::project_tangent(pi, djp);
            tau_f += geo::project_tangent(pi, lap_p) * fs.f[i] + tdjp * fs.df[j][i];
            df_dp += tdjp * fs.df[j][i];
        }
        const Vec3 diffusion = (lap_v * fs.f[i] + pi * (lam[i] * fs.f[i] * q)) * eps;
        const Vec3 hamiltonian = cross(pi, tau_f) * lam[i];
        out[i] = diffusion + df_dp * (eps * lam[i]) + hamiltonian;
    });
    return out;
}

} // namespace

VecField rhs_ambient(const AmbientState& state, const CouplingSamples& fs) {
    if (max_tube_distance(state.v) >= state.tube_d)
        throw LeftTube("rhs_ambient: state outside the tube", state.step);
    return rhs_ambient_raw(state.grid, state.v, fs, state.eps, state.tube_d);
}

AmbientState step_ambient(const AmbientState& state, CouplingSampler& f,
                          const StepControl& ctl) {
    VecField w = explicit_update(state.v, state.t, ctl.dt, ctl.scheme,
                                 [&](const VecField& v, double t) {
                                     return rhs_ambient_raw(state.grid, v, f.at(t), state.eps,
                                                            state.tube_d);
                                 });
    AmbientState next;
    next.grid = state.grid;
    next.v = std::move(w);
    next.t = state.t + ctl.dt;
    next.eps = state.eps;
    next.tube_d = state.tube_d;
    next.step = state.step + 1;
    if (max_tube_distance(next.v) >= state.tube_d)
        throw LeftTube("step_ambient: left the tubular neighborhood", next.step);
    return next;
}

double max_tube_distance(const VecField& v) {
    return par::max(v.size(), [&](std::size_t i) { return std::fabs(norm(v[i]) - 1.0); });
}

} // namespace nsf
