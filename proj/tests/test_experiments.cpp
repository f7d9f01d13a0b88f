#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsf/experiments.hpp"
#include "nsf/geometry.hpp"
#include "nsf/initial.hpp"
#include "nsf/run.hpp"

using namespace nsf;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CouplingSpec static_f() {
    CouplingSpec s;
    s.c0 = 2.0;
    s.terms.push_back({1.0, {1, 0}, {-M_PI / 2, 0.0}, 0.0, 0.0});
    s.t_star = 1e30;
    return s;
}

RunConfig line_config(int n) {
    RunConfig cfg;
    cfg.grid = TorusGrid::line(n, kTwoPi);
    cfg.coupling = static_f();
    cfg.initial.family = InitialSpec::Family::BandLimited;
    cfg.initial.seed = 11;
    cfg.initial.modes = 2;
    cfg.initial.amp = 0.5;
    cfg.sample_every = 1 << 24;
    cfg.kmax = 1;
    return cfg;
}

} // namespace

TEST_CASE("sweep with only eps = 0 degenerates to one run") {
    RunConfig cfg = line_config(32);
    cfg.T = 0.02;
    const SweepResult res = sweep_eps(cfg, {0.0});
    REQUIRE(res.eps.size() == 1);
    CHECK(res.sup_dist[0] == 0.0);
    CHECK(res.ordered);
}

TEST_CASE("constant map sweeps give identically zero distances") {
    RunConfig cfg = line_config(32);
    cfg.initial.family = InitialSpec::Family::Constant;
    cfg.T = 0.02;
    const SweepResult res = sweep_eps(cfg, {0.2, 0.1, 0.0});
    for (double d : res.sup_dist) CHECK(d == 0.0);
}

TEST_CASE("expanding-torus study") {
    RunConfig cfg;
    cfg.grid = TorusGrid::line(32, kTwoPi);
    cfg.coupling = static_f();
    cfg.initial.family = InitialSpec::Family::Bump;
    cfg.initial.winding = 1;
    cfg.initial.bump_amp = 0.4;
    cfg.initial.bump_center = M_PI;
    cfg.initial.bump_width = 1.0;
    cfg.eps = 0.0;
    cfg.T = 0.05;
    cfg.sample_every = 1 << 24;
    cfg.kmax = 1;

    const ExpandResult res = expand_torus(cfg, {1, 2, 4});
    REQUIRE(res.window_dist.size() == 2);
    CHECK(res.window_dist[0] > 0.0);
    CHECK(res.ordered); // wrap-around influence shrinks with the period

    // zero bump: every run is the same stationary equator on the window
    RunConfig flat = cfg;
    flat.coupling = constant_coupling(1.0);
    flat.initial.bump_amp = 0.0;
    const ExpandResult zero = expand_torus(flat, {1, 2});
    CHECK(zero.window_dist[0] < 1e-10);

    // scale factors below one and stray bump centers are config errors
    CHECK_THROWS_AS(expand_torus(cfg, {0, 2}), ConfigError);
    RunConfig off = cfg;
    off.initial.bump_center = 10.0;
    CHECK_THROWS_AS(expand_torus(off, {1, 2}), ConfigError);
}

TEST_CASE("tube run reporting") {
    RunConfig cfg = line_config(32);
    cfg.initial.family = InitialSpec::Family::Equator;
    cfg.eps = 0.1;
    cfg.T = 0.1;
    cfg.tube_scale = 1.05;
    cfg.sample_every = 8;

    const TubeResult res = tube_run(cfg);
    CHECK(res.monotone);
    const double first = res.traj.samples.front().rec.tube_E.value_or(-1.0);
    const double last = res.traj.samples.back().rec.tube_E.value_or(-1.0);
    CHECK(first == doctest::Approx(0.5 * 0.0025 * kTwoPi / 2.0).epsilon(0.3));
    CHECK(last < first);
}

TEST_CASE("uniqueness pair experiments") {
    // theta = 0: cross-scheme pair grows a positive energy, no certificate
    RunConfig cfg = line_config(32);
    cfg.eps = 0.1;
    cfg.T = 0.02;
    cfg.sample_every = 16;
    const PairSeries cross = uniqueness_pair(cfg, 0.0, 'z');
    CHECK(cross.rows.front().energy < 1e-30); // identical u0, rounding only
    CHECK(cross.rows.back().energy > 1e-15);
    CHECK(cross.rows.back().energy > cross.rows.front().energy);

    // rotated pair on the equator: fitted certificate
    RunConfig rot = line_config(32);
    rot.coupling = constant_coupling(1.0);
    rot.initial.family = InitialSpec::Family::Equator;
    rot.T = 0.02;
    rot.sample_every = 16;
    const PairSeries pair = uniqueness_pair(rot, 0.01, 'z');
    CHECK(pair.fitted);
    CHECK(pair.rows.front().energy ==
          doctest::Approx(kTwoPi * 1e-4).epsilon(0.02));
    for (const auto& r : pair.rows) CHECK_FALSE(r.exceeds_delta0);
}

TEST_CASE("fitted gronwall rate is stable under refinement") {
    // perturbed-initial-data pairs at three resolutions
    std::vector<double> C;
    for (int n : {32, 64, 128}) {
        RunConfig cfg = line_config(n);
        cfg.eps = 0.1;
        cfg.T = 0.1;
        cfg.sample_every = static_cast<int>(cfg.step_count() / 20) + 1;
        const PairSeries s = uniqueness_pair(cfg, 0.01, 'z');
        REQUIRE(s.fitted);
        C.push_back(s.C);
    }
    for (double c : C) CHECK(std::fabs(c - C.back()) < 0.25 * std::fabs(C.back()));
}

TEST_CASE("two-dimensional torus: run, diagnostics, determinism") {
    RunConfig cfg;
    cfg.grid = TorusGrid::plane(16, 16, kTwoPi, kTwoPi);
    CouplingSpec f2;
    f2.c0 = 2.0;
    f2.terms.push_back({0.5, {1, 1}, {0.3, -0.2}, 1.0, 0.4});
    f2.t_star = 4.0;
    cfg.coupling = f2;
    cfg.initial.family = InitialSpec::Family::BandLimited;
    cfg.initial.seed = 3;
    cfg.initial.modes = 2;
    cfg.initial.amp = 0.5;
    cfg.eps = 0.15;
    cfg.T = 0.02;
    cfg.sample_every = 4;
    cfg.kmax = 3; // rank-4 jets: 16 components per point on the 2-torus

    const Trajectory a = run(cfg);
    const Trajectory b = run(cfg);
    REQUIRE(!a.samples.empty());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].rec.unit_err < 1e-14);
        CHECK(a.samples[i].sandwich_pass);
        CHECK(a.samples[i].rec.E_f == b.samples[i].rec.E_f);
    }

    // equator along the first axis is stationary on the flat 2-torus too
    RunConfig eq = cfg;
    eq.coupling = constant_coupling(1.0);
    eq.initial.family = InitialSpec::Family::Equator;
    eq.eps = 0.0;
    const Trajectory tr = run(eq);
    CHECK(sup_distance(tr.samples.front().u, tr.samples.back().u) < 1e-12);
}

TEST_CASE("two-dimensional stencil eigenvalues") {
    const TorusGrid g = TorusGrid::plane(24, 16, kTwoPi, 2.0 * kTwoPi);
    const int k0 = 3, k1 = 2;
    ScalarField mode(g.points());
    for (std::size_t i = 0; i < mode.size(); ++i)
        mode[i] = std::cos(k0 * g.coord(i, 0)) * std::cos(k1 * kTwoPi * g.coord(i, 1) / g.L[1]);
    const double w1 = k1 * kTwoPi / g.L[1];
    const double lam =
        -(2.0 - 2.0 * std::cos(k0 * g.h[0])) / (g.h[0] * g.h[0]) -
        (2.0 - 2.0 * std::cos(w1 * g.h[1])) / (g.h[1] * g.h[1]);
    const ScalarField lap = laplacian(g, mode);
    for (std::size_t i = 0; i < mode.size(); ++i)
        CHECK(lap[i] == doctest::Approx(lam * mode[i]).epsilon(1e-10).scale(1.0));

    // volume integral on the anisotropic torus
    CHECK(integrate(g, ScalarField(g.points(), 1.0)) ==
          doctest::Approx(g.L[0] * g.L[1]).epsilon(1e-14));
}
