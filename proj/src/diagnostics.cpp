#include "nsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsf/errors.hpp"
#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

DiagnosticsRecord diagnostics_record(const SphereField& u, const CouplingSamples& fs,
                                     int kmax) {
    DiagnosticsRecord rec;
    rec.t = fs.t;
    const auto norms = higher_covariant_norms(u, kmax + 1);
    std::vector<double> weighted(kmax + 1), plain(kmax + 1);
    for (int l = 1; l <= kmax + 1; ++l) {
        const ScalarField& nl = norms[l - 1];
        ScalarField integrand(nl.size());
        par::for_each(nl.size(), [&](std::size_t i) {
            double fl = fs.f[i];
            for (int e = 1; e < l; ++e) fl *= fs.f[i];
            integrand[i] = fl * nl[i];
        });
        weighted[l - 1] = integrate(u.grid, integrand);
        plain[l - 1] = integrate(u.grid, nl);
    }
    rec.E_f = 0.5 * weighted[0];
    rec.Hkf.resize(kmax);
    rec.Hk.resize(kmax);
    double wsum = weighted[0], psum = plain[0];
    for (int k = 1; k <= kmax; ++k) {
        wsum += weighted[k];
        psum += plain[k];
        rec.Hkf[k - 1] = wsum;
        rec.Hk[k - 1] = psum;
    }
    rec.unit_err = max_unit_error(u);
    const VecField tf = tension_f(u, fs);
    rec.max_tau_f =
        std::sqrt(par::max(tf.size(), [&](std::size_t i) { return norm2(tf[i]); }));
    return rec;
}

bool sandwich_all(const DiagnosticsRecord& rec, double delta, double eta) {
    for (std::size_t k = 1; k <= rec.Hkf.size(); ++k) {
        double dk = 1.0, ek = 1.0;
        for (std::size_t e = 0; e < k + 1; ++e) {
            dk *= delta;
            ek *= eta;
        }
        const double lhs = dk * rec.Hk[k - 1];
        const double mid = rec.Hkf[k - 1];
        const double rhs = ek * rec.Hk[k - 1];
        if (lhs > mid + 1e-12 * (std::fabs(lhs) + std::fabs(mid))) return false;
        if (mid > rhs + 1e-12 * (std::fabs(mid) + std::fabs(rhs))) return false;
    }
    return true;
}

double dirichlet_energy(const SphereField& u, const CouplingSamples& fs) {
    const ScalarField g2 = higher_covariant_norms(u, 1)[0];
    ScalarField integrand(g2.size());
    par::for_each(g2.size(), [&](std::size_t i) { integrand[i] = fs.f[i] * g2[i]; });
    return 0.5 * integrate(u.grid, integrand);
}

double weighted_sobolev(const SphereField& u, const CouplingSamples& fs, int k) {
    if (k + 1 > 4) throw KTooLarge("weighted_sobolev: k + 1 > 4");
    const auto norms = higher_covariant_norms(u, k + 1);
    double total = 0.0;
    for (int l = 1; l <= k + 1; ++l) {
        const ScalarField& nl = norms[l - 1];
        ScalarField integrand(nl.size());
        par::for_each(nl.size(), [&](std::size_t i) {
            double fl = fs.f[i];
            for (int e = 1; e < l; ++e) fl *= fs.f[i];
            integrand[i] = fl * nl[i];
        });
        total += integrate(u.grid, integrand);
    }
    return total;
}

double plain_sobolev(const SphereField& u, int k) {
    if (k + 1 > 4) throw KTooLarge("plain_sobolev: k + 1 > 4");
    const auto norms = higher_covariant_norms(u, k + 1);
    double total = 0.0;
    for (int l = 1; l <= k + 1; ++l) total += integrate(u.grid, norms[l - 1]);
    return total;
}

SandwichResult sandwich_check(const SphereField& u, const CouplingSamples& fs, int k,
                              double delta, double eta) {
    const double plain = plain_sobolev(u, k);
    const double weighted = weighted_sobolev(u, fs, k);
    double dk = 1.0, ek = 1.0;
    for (int e = 0; e < k + 1; ++e) {
        dk *= delta;
        ek *= eta;
    }
    SandwichResult r;
    r.lhs = dk * plain;
    r.mid = weighted;
    r.rhs = ek * plain;
    const double slack_lo = 1e-12 * (std::fabs(r.lhs) + std::fabs(r.mid));
    const double slack_hi = 1e-12 * (std::fabs(r.mid) + std::fabs(r.rhs));
    r.pass = r.lhs <= r.mid + slack_lo && r.mid <= r.rhs + slack_hi;
    return r;
}

double energy_identity_residual(const SphereField& um, double tm, const SphereField& u0,
                                double t0, const SphereField& up, double tp,
                                const CouplingSpec& spec, double eps) {
    const TorusGrid& grid = u0.grid;
    const CouplingSamples fm = sample(spec, grid, tm);
    const CouplingSamples f0 = sample(spec, grid, t0);
    const CouplingSamples fp = sample(spec, grid, tp);

    const double dEdt = (dirichlet_energy(up, fp) - dirichlet_energy(um, fm)) / (tp - tm);

    const ScalarField g2 = higher_covariant_norms(u0, 1)[0];
    ScalarField ft_term(g2.size());
    par::for_each(g2.size(), [&](std::size_t i) { ft_term[i] = f0.ft[i] * g2[i]; });
    const VecField tf = tension_f(u0, f0);
    ScalarField tf2(tf.size());
    par::for_each(tf.size(), [&](std::size_t i) { tf2[i] = norm2(tf[i]); });

    const double identity = 0.5 * integrate(grid, ft_term) - eps * integrate(grid, tf2);
    return std::fabs(dEdt - identity);
}

double tube_energy(const TorusGrid& grid, const VecField& v, const CouplingSamples& fs) {
    ScalarField integrand(v.size());
    par::for_each(v.size(), [&](std::size_t i) {
        const double r = norm(v[i]) - 1.0;
        integrand[i] = r * r / fs.f[i];
    });
    return 0.5 * integrate(grid, integrand);
}

double commuted_equation_residual(const SphereField& um, const SphereField& u0,
                                  const SphereField& up, double dt) {
    const TorusGrid& grid = u0.grid;
    const std::size_t npts = grid.points();
    const int m = grid.m;

    const TensorField gm = grad_cov(um);
    const TensorField gp = grad_cov(up);
    const TensorField g = grad_cov(u0);
    const TensorField gg = grad_cov(u0, g);
    const TensorField ggg = grad_cov(u0, gg);

    const double inv2dt = 1.0 / (2.0 * dt);
    return par::max(npts, [&](std::size_t i) {
        const Vec3 ui = u0.values[i];
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
            const Vec3 lhs =
                geo::project_tangent(ui, (gp.at(j, i) - gm.at(j, i)) * inv2dt);
            Vec3 inner{0.0, 0.0, 0.0};
            for (int k = 0; k < m; ++k) {
                // component (k, k, j) of nabla^3 u
                inner += ggg.at((static_cast<std::size_t>(k) * m + k) * m + j, i);
                inner += geo::curvature_RN(g.at(j, i), g.at(k, i), g.at(k, i));
            }
            const Vec3 rhs = cross(ui, inner);
            const double r = norm(lhs - rhs);
            if (r > worst) worst = r;
        }
        return worst;
    });
}

FrameComponents frame_components(const SphereField& u) {
    const std::size_t npts = u.grid.points();
    const int m = u.grid.m;
    FrameComponents out;
    out.npts = npts;
    out.m = m;
    out.f1.resize(npts);
    out.f2.resize(npts);
    out.singular.assign(npts, 0);
    out.phi.assign(static_cast<std::size_t>(m) * 2 * npts, 0.0);

    const Vec3 ref{0.0, 0.0, 1.0};
    const Vec3 fallback{1.0, 0.0, 0.0};
    par::for_each(npts, [&](std::size_t i) {
        const Vec3 ui = u.values[i];
        Vec3 w = geo::project_tangent(ui, ref);
        if (norm(w) < 1e-6) {
            out.singular[i] = 1;
            w = geo::project_tangent(ui, fallback);
        }
        out.f1[i] = w / norm(w);
        out.f2[i] = cross(ui, out.f1[i]);
    });

    const TensorField g = grad_cov(u);
    par::for_each(npts, [&](std::size_t i) {
        for (int j = 0; j < m; ++j) {
            out.phi[(static_cast<std::size_t>(j) * 2 + 0) * npts + i] = dot(g.at(j, i), out.f1[i]);
            out.phi[(static_cast<std::size_t>(j) * 2 + 1) * npts + i] = dot(g.at(j, i), out.f2[i]);
        }
    });
    return out;
}

PairDiagnostics uniqueness_energy(const SphereField& u1, const SphereField& u2,
                                  const CouplingSamples& fs) {
    if (!u1.grid.same_shape(u2.grid))
        throw Error("uniqueness_energy: fields live on different grids");
    const TorusGrid& grid = u1.grid;
    const std::size_t npts = grid.points();
    const int m = grid.m;

    // transport below is per-point; rule out antipodal pairs before entering
    // the parallel region rather than throwing inside it
    const double worst_cos = -par::max(
        npts, [&](std::size_t i) { return -dot(u1.values[i], u2.values[i]); });
    if (worst_cos <= -1.0 + 1e-9)
        throw AntipodalPoints("uniqueness_energy: fields contain antipodal pairs");

    ScalarField d2(npts);
    par::for_each(npts, [&](std::size_t i) {
        const double d = geo::geodesic_distance(u1.values[i], u2.values[i]);
        d2[i] = d * d;
    });
    const double maxd =
        std::sqrt(par::max(npts, [&](std::size_t i) { return d2[i]; }));

    const TensorField g1 = grad_cov(u1);
    const TensorField g2 = grad_cov(u2);
    ScalarField psi2(npts);
    par::for_each(npts, [&](std::size_t i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            const Vec3 transported =
                geo::parallel_transport(u2.values[i], u1.values[i], g2.at(j, i));
            acc += norm2(transported - g1.at(j, i));
        }
        psi2[i] = acc;
    });

    ScalarField fpsi(npts);
    par::for_each(npts, [&](std::size_t i) { fpsi[i] = fs.f[i] * psi2[i]; });

    PairDiagnostics out;
    out.t = fs.t;
    out.max_dist = maxd;
    out.energy = integrate(grid, d2) + 0.5 * integrate(grid, fpsi);
    out.exceeds_delta0 = maxd >= geo::kDelta0;
    return out;
}

GronwallFit gronwall_fit(const std::vector<double>& t, const std::vector<double>& E,
                         double scale) {
    if (t.size() != E.size() || t.empty())
        throw Error("gronwall_fit: malformed series");
    double emax = 0.0;
    for (double e : E) emax = std::max(emax, e);
    GronwallFit fit;
    if (emax < 1e-13 * scale) {
        fit.all_zero = true;
        fit.certificate_holds = true;
        return fit;
    }
    if (E[0] < 1e-300)
        throw ZeroInitialEnergy("gronwall_fit: E(0) vanishes but the series does not");

    double C = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] <= t[0] || E[i] <= 0.0) continue;
        C = std::max(C, (std::log(E[i]) - std::log(E[0])) / (t[i] - t[0]));
        any = true;
    }
    fit.C = any ? C : 0.0;
    fit.certificate_holds = true;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (E[i] > E[0] * std::exp(fit.C * (t[i] - t[0])) * (1.0 + 1e-9))
            fit.certificate_holds = false;
    return fit;
}

namespace {

double inv_exp(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Pointwise tensor magnitudes of nabla^level s for level = 0..maxlevel,
// flat derivatives for the trivial bundle, projected ones along a base map.
std::vector<ScalarField> jet_magnitudes(const TorusGrid& grid, const VecField& s,
                                        const SphereField* base, int maxlevel) {
    const std::size_t npts = grid.points();
    std::vector<VecField> comps = {s};
    std::vector<ScalarField> mags;
    for (int level = 0;; ++level) {
        ScalarField m2(npts, 0.0);
        for (const VecField& c : comps)
            par::for_each(npts, [&](std::size_t i) { m2[i] += norm2(c[i]); });
        par::for_each(npts, [&](std::size_t i) { m2[i] = std::sqrt(m2[i]); });
        mags.push_back(std::move(m2));
        if (level == maxlevel) break;
        std::vector<VecField> next;
        next.reserve(comps.size() * grid.m);
        for (int j = 0; j < grid.m; ++j)
            for (const VecField& c : comps)
                next.push_back(base ? covariant_derivative(*base, c, j)
                                    : diff_central(grid, c, j));
        comps = std::move(next);
    }
    return mags;
}

double lp_norm(const TorusGrid& grid, const ScalarField& mag, double p) {
    if (std::isinf(p)) return par::max(mag.size(), [&](std::size_t i) { return mag[i]; });
    ScalarField powed(mag.size());
    par::for_each(mag.size(), [&](std::size_t i) { powed[i] = std::pow(mag[i], p); });
    return std::pow(integrate(grid, powed), 1.0 / p);
}

} // namespace

double gn_probe(const TorusGrid& grid, const VecField& s, const SphereField* base,
                const GnExponents& e) {
    if (e.j < 0 || e.k < 1 || e.j > e.k)
        throw ExponentRelationViolated("gn_probe: need 0 <= j <= k, k >= 1");
    const double m = static_cast<double>(grid.m);
    const double lhs_rel = inv_exp(e.p);
    const double rhs_rel =
        e.j / m + inv_exp(e.r) + e.a * (inv_exp(e.q) - inv_exp(e.r) - e.k / m);
    if (std::fabs(lhs_rel - rhs_rel) > 1e-12)
        throw ExponentRelationViolated("gn_probe: exponent relation violated");
    if (e.a < static_cast<double>(e.j) / e.k - 1e-12 || e.a > 1.0 + 1e-12)
        throw ExponentRelationViolated("gn_probe: a outside [j/k, 1]");

    const auto mags = jet_magnitudes(grid, s, base, std::max(e.j, e.k));

    const double lr = lp_norm(grid, mags[0], e.r);
    if (lr == 0.0) throw ZeroSection("gn_probe: section is identically zero");

    double hkq;
    if (std::isinf(e.q)) {
        hkq = 0.0;
        for (int i = 0; i <= e.k; ++i) hkq = std::max(hkq, lp_norm(grid, mags[i], e.q));
    } else {
        double acc = 0.0;
        for (int i = 0; i <= e.k; ++i) acc += std::pow(lp_norm(grid, mags[i], e.q), e.q);
        hkq = std::pow(acc, 1.0 / e.q);
    }
    if (hkq == 0.0) throw ZeroSection("gn_probe: H^{k,q} norm vanishes");

    const double lhs = lp_norm(grid, mags[e.j], e.p);
    const double rhs = std::pow(hkq, e.a) * std::pow(lr, 1.0 - e.a);
    return lhs / rhs;
}

} // namespace nsf
