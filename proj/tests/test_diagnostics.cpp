#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsf/diagnostics.hpp"
#include "nsf/experiments.hpp"
#include "nsf/geometry.hpp"
#include "nsf/initial.hpp"
#include "nsf/run.hpp"

using namespace nsf;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CouplingSpec two_plus_sin(double t_star = 1e30) {
    CouplingSpec s;
    s.c0 = 2.0;
    s.terms.push_back({1.0, {1, 0}, {-M_PI / 2, 0.0}, 0.0, 0.0});
    s.t_star = t_star;
    return s;
}

SphereField equator_map(const TorusGrid& g, int winding = 1) {
    InitialSpec spec;
    spec.family = InitialSpec::Family::Equator;
    spec.winding = winding;
    return generate_initial(spec, g);
}

SphereField smooth_random(const TorusGrid& g, std::uint64_t seed) {
    InitialSpec spec;
    spec.family = InitialSpec::Family::BandLimited;
    spec.seed = seed;
    spec.modes = 3;
    spec.amp = 0.6;
    return generate_initial(spec, g);
}

RunConfig small_run(const TorusGrid& g) {
    RunConfig cfg;
    cfg.grid = g;
    cfg.coupling = two_plus_sin();
    cfg.initial.family = InitialSpec::Family::BandLimited;
    cfg.initial.seed = 5;
    cfg.initial.modes = 2;
    cfg.initial.amp = 0.5;
    return cfg;
}

} // namespace

TEST_CASE("dirichlet energy of the equator map converges to pi") {
    const InitialSpec eq{.family = InitialSpec::Family::Equator};
    auto energy = [&](int n, double f) {
        const TorusGrid g = TorusGrid::line(n, kTwoPi);
        return dirichlet_energy(generate_initial(eq, g),
                                sample(constant_coupling(f), g, 0.0));
    };
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    CHECK(dirichlet_energy(make_sphere_field(g, {0, 0, 1}),
                           sample(constant_coupling(1.0), g, 0.0)) == 0.0);

    // |E_h - pi| is pi h^2/3 to leading order; second-order convergence
    const double e64 = std::fabs(energy(64, 1.0) - M_PI);
    const double e128 = std::fabs(energy(128, 1.0) - M_PI);
    CHECK(e64 < 4.0 * g.h[0] * g.h[0]);
    CHECK(e64 / e128 > 3.5);
    CHECK(e64 / e128 < 4.5);
    // linear in f
    CHECK(energy(64, 2.0) == doctest::Approx(2.0 * energy(64, 1.0)).epsilon(1e-13));
}

TEST_CASE("weighted sobolev hierarchy") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    const SphereField u = smooth_random(g, 3);
    const CouplingSamples ones = sample(constant_coupling(1.0), g, 0.0);

    const SphereField c = make_sphere_field(g, {1, 0, 0});
    for (int k = 1; k <= 3; ++k)
        CHECK(weighted_sobolev(c, ones, k) == 0.0);

    // f == 1: weighted equals plain bitwise
    for (int k = 1; k <= 3; ++k)
        CHECK(weighted_sobolev(u, ones, k) == plain_sobolev(u, k));
    CHECK_THROWS_AS(weighted_sobolev(u, ones, 4), KTooLarge);

    // equator with f == 2, k = 1: 2 int |grad u|^2 + 4 int |grad^2 u|^2
    const SphereField eq = equator_map(g);
    const CouplingSamples twos = sample(constant_coupling(2.0), g, 0.0);
    const double w = weighted_sobolev(eq, twos, 1);
    CHECK(std::fabs(w - 4.0 * M_PI) < 16.0 * g.h[0] * g.h[0]);
}

TEST_CASE("sandwich inequality") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    const SphereField c = make_sphere_field(g, {0, 1, 0});
    const CouplingSamples ones = sample(constant_coupling(1.0), g, 0.0);
    const SandwichResult rc = sandwich_check(c, ones, 2, 1.0, 1.0);
    CHECK(rc.pass); // 0 <= 0 <= 0

    // constant f = 2 with the clamped convention (delta, eta) = (1, 2)
    const CouplingSamples twos = sample(constant_coupling(2.0), g, 0.0);
    const SphereField u = smooth_random(g, 8);
    const CouplingBounds b2 = bounds(constant_coupling(2.0), g);
    for (int k = 1; k <= 3; ++k)
        CHECK(sandwich_check(u, twos, k, b2.delta, b2.eta).pass);
    // constant f = 0.5, clamped to (0.5, 1)
    const CouplingSamples halves = sample(constant_coupling(0.5), g, 0.0);
    const CouplingBounds bh = bounds(constant_coupling(0.5), g);
    for (int k = 1; k <= 3; ++k)
        CHECK(sandwich_check(u, halves, k, bh.delta, bh.eta).pass);

    // 100 random smooth fields against f = 2 + sin x
    const CouplingSpec fs = two_plus_sin();
    const CouplingBounds b = bounds(fs, g);
    const CouplingSamples fsam = sample(fs, g, 0.0);
    for (int i = 0; i < 100; ++i) {
        const SphereField r = smooth_random(g, 100 + i);
        for (int k = 1; k <= 3; ++k) {
            const SandwichResult sr = sandwich_check(r, fsam, k, b.delta, b.eta);
            CHECK(sr.pass);
            CHECK(sr.lhs <= sr.mid * (1 + 1e-12));
            CHECK(sr.mid <= sr.rhs * (1 + 1e-12));
        }
    }
}

TEST_CASE("energy identity residual shrinks under refinement") {
    auto residual_at = [&](int n, double eps) {
        const TorusGrid g = TorusGrid::line(n, kTwoPi);
        RunConfig cfg = small_run(g);
        cfg.eps = eps;
        cfg.T = 0.02;
        cfg.dt_override = StepControl::budget(g, 3.0, eps, 0.1);
        cfg.sample_every = 1;
        const Trajectory tr = run(cfg);
        const std::size_t mid = tr.samples.size() / 2;
        const auto& lo = tr.samples[mid - 1];
        const auto& s0 = tr.samples[mid];
        const auto& hi = tr.samples[mid + 1];
        return energy_identity_residual(lo.u, lo.t, s0.u, s0.t, hi.u, hi.t, cfg.coupling,
                                        eps);
    };
    for (double eps : {0.0, 0.2}) {
        const double r32 = residual_at(32, eps);
        const double r64 = residual_at(64, eps);
        CHECK(r64 < r32);
        CHECK(r32 / r64 > 2.0); // order >= 1
    }

    // a constant-map trajectory has an exactly zero residual
    const TorusGrid g = TorusGrid::line(32, kTwoPi);
    const SphereField c = make_sphere_field(g, {0, 0, 1});
    CHECK(energy_identity_residual(c, 0.0, c, 0.01, c, 0.02, constant_coupling(1.0), 0.3) ==
          0.0);
}

TEST_CASE("tube energy") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    const CouplingSamples ones = sample(constant_coupling(1.0), g, 0.0);
    const SphereField u = smooth_random(g, 2);
    CHECK(tube_energy(g, u.values, ones) < 1e-28);

    VecField v = u.values;
    for (auto& x : v) x = x * 1.1;
    CHECK(tube_energy(g, v, ones) ==
          doctest::Approx(0.5 * 0.01 * kTwoPi).epsilon(1e-12));
}

TEST_CASE("commuted equation residual") {
    // constant map: both sides vanish identically
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    const SphereField c = make_sphere_field(g, {0, 0, 1});
    CHECK(commuted_equation_residual(c, c, c, 0.01) == 0.0);

    // stationary equator: exact zeros up to rounding noise
    const SphereField eq = equator_map(g);
    CHECK(commuted_equation_residual(eq, eq, eq, 0.01) < 1e-2);

    // smooth non-stationary run: residual decreases under refinement
    auto residual_at = [&](int n) {
        const TorusGrid grid = TorusGrid::line(n, kTwoPi);
        RunConfig cfg = small_run(grid);
        cfg.coupling = constant_coupling(1.0);
        cfg.eps = 0.0;
        cfg.T = 0.01;
        cfg.dt_override = StepControl::budget(grid, 1.0, 0.0, 0.1);
        cfg.sample_every = 1;
        const Trajectory tr = run(cfg);
        const std::size_t mid = tr.samples.size() / 2;
        return commuted_equation_residual(tr.samples[mid - 1].u, tr.samples[mid].u,
                                          tr.samples[mid + 1].u,
                                          tr.samples[mid].t - tr.samples[mid - 1].t);
    };
    const double r32 = residual_at(32);
    const double r64 = residual_at(64);
    const double r128 = residual_at(128);
    CHECK(r64 < r32);
    CHECK(r128 < r64);
    CHECK(r32 / r64 > 2.0);
}

TEST_CASE("frame components") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);

    const SphereField px = make_sphere_field(g, {1, 0, 0});
    const FrameComponents fx = frame_components(px);
    CHECK(norm(fx.f1[0] - Vec3{0, 0, 1}) < 1e-15);
    CHECK(norm(fx.f2[0] - Vec3{0, -1, 0}) < 1e-15);
    CHECK(fx.singular[0] == 0);

    // north pole: reference axis degenerates, fallback kicks in and is flagged
    const SphereField pz = make_sphere_field(g, {0, 0, 1});
    const FrameComponents fz = frame_components(pz);
    CHECK(fz.singular[0] == 1);
    CHECK(norm(fz.f1[0] - Vec3{1, 0, 0}) < 1e-15);

    // equator: |phi| equals |grad u| (orthonormal frame), constant magnitude
    const SphereField eq = equator_map(g);
    const FrameComponents fe = frame_components(eq);
    const double alpha = std::sin(g.h[0]) / g.h[0];
    for (std::size_t i = 0; i < g.points(); ++i) {
        const double phi2 = fe.phi_at(0, 0, i) * fe.phi_at(0, 0, i) +
                            fe.phi_at(0, 1, i) * fe.phi_at(0, 1, i);
        CHECK(std::fabs(std::sqrt(phi2) - alpha) < 1e-12);
    }

    // reconstruction identity on random states
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
        const SphereField u = smooth_random(g, 40 + s);
        const FrameComponents fc = frame_components(u);
        const TensorField grad = grad_cov(u);
        for (std::size_t i = 0; i < g.points(); ++i) {
            const Vec3 rebuilt =
                fc.f1[i] * fc.phi_at(0, 0, i) + fc.f2[i] * fc.phi_at(0, 1, i);
            worst = std::max(worst, norm(rebuilt - grad.at(0, i)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("uniqueness energy") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);
    const CouplingSamples ones = sample(constant_coupling(1.0), g, 0.0);
    const SphereField u = equator_map(g);

    const PairDiagnostics same = uniqueness_energy(u, u, ones);
    CHECK(same.energy < 1e-14 * kTwoPi);
    CHECK(same.max_dist == 0.0);
    CHECK_FALSE(same.exceeds_delta0);

    // rotating the equator about z shifts phase: d == theta, psi == 0
    const double theta = 0.01;
    const SphereField ru = rotate_field(u, 'z', theta);
    const PairDiagnostics rot = uniqueness_energy(u, ru, ones);
    CHECK(rot.max_dist == doctest::Approx(theta).epsilon(1e-9));
    CHECK(rot.energy == doctest::Approx(kTwoPi * theta * theta).epsilon(0.02));
    // transport term vanishes for an isometry: verify through the energy split
    const double d2_term = kTwoPi * theta * theta;
    CHECK(std::fabs(rot.energy - d2_term) < 1e-10);

    // invariant under one global rotation applied to both fields
    const SphereField u1 = smooth_random(g, 77);
    const SphereField u2 = rotate_field(smooth_random(g, 78), 'x', 0.05);
    const PairDiagnostics base = uniqueness_energy(u1, u2, ones);
    const PairDiagnostics both = uniqueness_energy(rotate_field(u1, 'y', 1.3),
                                                   rotate_field(u2, 'y', 1.3), ones);
    CHECK(std::fabs(base.energy - both.energy) < 1e-11 * (1.0 + base.energy));

    // the delta0 flag trips beyond 0.25
    const SphereField far = rotate_field(u, 'z', 0.3);
    CHECK(uniqueness_energy(u, far, ones).exceeds_delta0);

    // antipodal pairs cannot be transported
    const SphereField anti = rotate_field(u, 'z', M_PI);
    CHECK_THROWS_AS(uniqueness_energy(u, anti, ones), AntipodalPoints);
}

TEST_CASE("gronwall fit") {
    const std::vector<double> t = {0.0, 0.1, 0.2, 0.3, 0.4};

    const GronwallFit flat = gronwall_fit(t, {2.0, 2.0, 2.0, 2.0, 2.0});
    CHECK_FALSE(flat.all_zero);
    CHECK(flat.C == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(flat.certificate_holds);

    std::vector<double> e;
    for (double ti : t) e.push_back(3.0 * std::exp(2.0 * ti));
    const GronwallFit expfit = gronwall_fit(t, e);
    CHECK(expfit.C == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(expfit.certificate_holds);

    const GronwallFit zero = gronwall_fit(t, {0.0, 0.0, 0.0, 0.0, 0.0}, 1.0);
    CHECK(zero.all_zero);

    CHECK_THROWS_AS(gronwall_fit(t, {0.0, 1.0, 1.0, 1.0, 1.0}), ZeroInitialEnergy);

    // generic series: the certificate holds by construction
    const GronwallFit mixed = gronwall_fit(t, {1.0, 0.5, 2.0, 1.5, 0.7});
    CHECK(mixed.certificate_holds);
}

TEST_CASE("interpolation-inequality probe") {
    const TorusGrid g = TorusGrid::line(64, kTwoPi);

    // j = 0, a = 0, p = r: both sides are the same norm
    GnExponents e0;
    e0.j = 0;
    e0.k = 1;
    e0.p = 2.0;
    e0.q = 2.0;
    e0.r = 2.0;
    e0.a = 0.0;
    const VecField s = gn_section(g, 5, 6);
    CHECK(gn_probe(g, s, nullptr, e0) == doctest::Approx(1.0).epsilon(1e-13));

    // constant section, j >= 1: derivative side vanishes
    GnExponents e1;
    e1.j = 1;
    e1.k = 2;
    e1.p = 2.0;
    e1.q = 2.0;
    e1.r = 2.0;
    e1.a = 0.5;
    const VecField constant(g.points(), Vec3{0.3, -0.2, 0.9});
    CHECK(gn_probe(g, constant, nullptr, e1) == 0.0);

    // exponent relation and section guards
    GnExponents bad = e1;
    bad.a = 0.7; // violates the relation for these (j,k,p,q,r)
    CHECK_THROWS_AS(gn_probe(g, s, nullptr, bad), ExponentRelationViolated);
    const VecField zero(g.points(), Vec3{0, 0, 0});
    CHECK_THROWS_AS(gn_probe(g, zero, nullptr, e1), ZeroSection);

    // covariant version runs on tangent sections
    const SphereField base = smooth_random(g, 21);
    TensorField grad = grad_cov(base);
    VecField tangent(g.points());
    for (std::size_t i = 0; i < g.points(); ++i) tangent[i] = grad.at(0, i);
    CHECK(gn_probe(g, tangent, &base, e1) > 0.0);

    // sup-norm route on the circle: ||s||_inf <= C ||s||_{H^1}^(1/2) ||s||_2^(1/2)
    GnExponents einf;
    einf.j = 0;
    einf.k = 1;
    einf.p = INFINITY;
    einf.q = 2.0;
    einf.r = 2.0;
    einf.a = 0.5;
    const double ratio = gn_probe(g, s, nullptr, einf);
    CHECK(ratio > 0.0);
    CHECK(ratio < 10.0);
}
