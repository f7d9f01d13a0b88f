#include "nsf/initial.hpp"

#include <cmath>
#include <vector>

#include "nsf/errors.hpp"
#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"
#include "nsf/rng.hpp"
#include "nsf/snapshot.hpp"

namespace nsf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

SphereField equator(const TorusGrid& grid, int winding) {
    SphereField u{grid, VecField(grid.points())};
    par::for_each(u.values.size(), [&](std::size_t i) {
        const double phase = kTwoPi * winding * grid.coord(i, 0) / grid.L[0];
        u.values[i] = {std::cos(phase), std::sin(phase), 0.0};
    });
    return u;
}

// C-infinity bump with support |s| < 1, value 1 at s = 0.
double bump(double s2) {
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double periodic_offset(double x, double c, double L) {
    double d = std::fmod(x - c, L);
    if (d > 0.5 * L) d -= L;
    if (d < -0.5 * L) d += L;
    return d;
}

SphereField band_limited(const TorusGrid& grid, std::uint64_t seed, int modes, double amp) {
    if (modes < 1) throw ConfigError("initial: band-limited modes must be >= 1");
    if (!(amp > 0.0) || amp > 0.9)
        throw ConfigError("initial: band-limited amplitude must lie in (0, 0.9]");
    Rng rng(seed);

    struct Mode {
        double a;
        int k0, k1;
        double phi0, phi1;
    };
    // one mode list per component, drawn in a fixed order
    std::vector<std::vector<Mode>> comp_modes(3);
    const int kmax1 = grid.m == 2 ? modes : 0;
    int count = 0;
    for (int k0 = 0; k0 <= modes; ++k0)
        for (int k1 = 0; k1 <= kmax1; ++k1)
            if (k0 + k1 > 0) ++count;
    for (int c = 0; c < 3; ++c) {
        for (int k0 = 0; k0 <= modes; ++k0) {
            for (int k1 = 0; k1 <= kmax1; ++k1) {
                if (k0 + k1 == 0) continue;
                Mode m;
                m.a = amp * rng.uniform(-1.0, 1.0) / count;
                m.k0 = k0;
                m.k1 = k1;
                m.phi0 = rng.uniform(0.0, kTwoPi);
                m.phi1 = rng.uniform(0.0, kTwoPi);
                comp_modes[c].push_back(m);
            }
        }
    }

    SphereField u{grid, VecField(grid.points())};
    par::for_each(u.values.size(), [&](std::size_t i) {
        const double x0 = grid.coord(i, 0);
        const double x1 = grid.m == 2 ? grid.coord(i, 1) : 0.0;
        double g[3];
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (const Mode& m : comp_modes[c]) {
                double v = m.a * std::cos(kTwoPi * m.k0 * x0 / grid.L[0] + m.phi0);
                if (grid.m == 2) v *= std::cos(kTwoPi * m.k1 * x1 / grid.L[1] + m.phi1);
                acc += v;
            }
            g[c] = acc;
        }
        u.values[i] = geo::project_point(Vec3{g[0], g[1], 1.0 + g[2]});
    });
    return u;
}

SphereField bump_perturbed(const TorusGrid& grid, const InitialSpec& spec) {
    SphereField u = equator(grid, spec.winding);
    par::for_each(u.values.size(), [&](std::size_t i) {
        double s2 = 0.0;
        for (int j = 0; j < grid.m; ++j) {
            const double d =
                periodic_offset(grid.coord(i, j), spec.bump_center, grid.L[j]) /
                spec.bump_width;
            s2 += d * d;
        }
        const double b = bump(s2);
        if (b > 0.0)
            u.values[i] =
                geo::project_point(u.values[i] + Vec3{0.0, 0.0, spec.bump_amp * b});
    });
    return u;
}

} // namespace

Vec3 rotate_vec(const Vec3& v, char axis, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    switch (axis) {
    case 'x': return {v.x, c * v.y - s * v.z, s * v.y + c * v.z};
    case 'y': return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
    case 'z': return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
    default: throw ConfigError("rotate: axis must be x, y or z");
    }
}

SphereField rotate_field(const SphereField& u, char axis, double theta) {
    SphereField out{u.grid, VecField(u.values.size())};
    par::for_each(u.values.size(),
                  [&](std::size_t i) { out.values[i] = rotate_vec(u.values[i], axis, theta); });
    return out;
}

SphereField generate_initial(const InitialSpec& spec, const TorusGrid& grid) {
    switch (spec.family) {
    case InitialSpec::Family::Constant: return make_sphere_field(grid, spec.constant);
    case InitialSpec::Family::Equator: return equator(grid, spec.winding);
    case InitialSpec::Family::Rotated:
        return rotate_field(equator(grid, spec.winding), spec.axis, spec.theta);
    case InitialSpec::Family::BandLimited:
        return band_limited(grid, spec.seed, spec.modes, spec.amp);
    case InitialSpec::Family::Bump: return bump_perturbed(grid, spec);
    case InitialSpec::Family::Snapshot: {
        Snapshot s = read_snapshot(spec.snapshot_path, true);
        if (!s.grid.same_shape(grid))
            throw ConfigError("initial: snapshot grid does not match the run grid");
        return {grid, std::move(s.values)};
    }
    }
    throw ConfigError("initial: unknown family");
}

} // namespace nsf
