#include "nsf/coupling.hpp"

#include <cmath>

#include "nsf/errors.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct TermAt {
    double spatial;                 // prod_j cos(...)
    std::array<double, 2> dspatial; // d/dx_j of the product
};

TermAt spatial_factor(const CouplingTerm& tm, const TorusGrid& grid, std::size_t id) {
    TermAt out{1.0, {0.0, 0.0}};
    std::array<double, 2> c = {1.0, 1.0};
    std::array<double, 2> s = {0.0, 0.0};
    std::array<double, 2> w = {0.0, 0.0};
    for (int j = 0; j < grid.m; ++j) {
        w[j] = kTwoPi * tm.k[j] / grid.L[j];
        const double arg = w[j] * grid.coord(id, j) + tm.phi[j];
        c[j] = std::cos(arg);
        s[j] = std::sin(arg);
        out.spatial *= c[j];
    }
    for (int j = 0; j < grid.m; ++j) {
        double d = -w[j] * s[j];
        for (int jj = 0; jj < grid.m; ++jj)
            if (jj != j) d *= c[jj];
        out.dspatial[j] = d;
    }
    return out;
}

} // namespace

double coupling_value(const CouplingSpec& spec, const TorusGrid& grid, std::size_t id,
                      double t) {
    double f = spec.c0;
    for (const auto& tm : spec.terms)
        f += tm.amplitude * spatial_factor(tm, grid, id).spatial * std::cos(tm.omega * t + tm.psi);
    return f;
}

namespace {

std::string describe_min(const TorusGrid& grid, std::size_t id, double t, double value) {
    std::string where = "x = " + std::to_string(grid.coord(id, 0));
    if (grid.m == 2) where += ", y = " + std::to_string(grid.coord(id, 1));
    return "min f = " + std::to_string(value) + " at " + where + ", t = " + std::to_string(t);
}

} // namespace

CouplingBounds bounds(const CouplingSpec& spec, const TorusGrid& grid) {
    const std::size_t npts = grid.points();
    double lo = spec.c0, hi = spec.c0;
    std::size_t lo_id = 0;
    double lo_t = 0.0;
    bool first = true;
    for (int it = 0; it < kCouplingTimeSamples; ++it) {
        const double t = spec.t_star * it / (kCouplingTimeSamples - 1);
        for (std::size_t i = 0; i < npts; ++i) {
            const double v = coupling_value(spec, grid, i, t);
            if (first || v < lo) {
                lo = v;
                lo_id = i;
                lo_t = t;
            }
            if (first || v > hi) hi = v;
            first = false;
        }
    }
    if (lo <= 0.0)
        throw NonPositiveCoupling("coupling is not positive: " +
                                  describe_min(grid, lo_id, lo_t, lo));
    CouplingBounds b;
    b.raw_min = lo;
    b.raw_max = hi;
    b.delta = lo < 1.0 ? lo : 1.0;
    b.eta = hi > 1.0 ? hi : 1.0;
    b.min_id = lo_id;
    b.min_t = lo_t;
    return b;
}

CouplingBounds certify(const CouplingSpec& spec, const TorusGrid& grid) {
    const CouplingBounds b = bounds(spec, grid);
    if (b.raw_min < kCouplingDeltaMin)
        throw NonPositiveCoupling("coupling below the 1e-3 safety margin: " +
                                  describe_min(grid, b.min_id, b.min_t, b.raw_min));
    return b;
}

CouplingSamples sample(const CouplingSpec& spec, const TorusGrid& grid, double t) {
    if (t < 0.0 || t > spec.t_star)
        throw TimeOutOfRange("coupling sample: t outside [0, T*]");
    const std::size_t npts = grid.points();
    CouplingSamples out;
    out.t = t;
    out.f.assign(npts, 0.0);
    out.ft.assign(npts, 0.0);
    for (int j = 0; j < grid.m; ++j) out.df[j].assign(npts, 0.0);

    par::for_each(npts, [&](std::size_t i) {
        double f = spec.c0, ft = 0.0;
        std::array<double, 2> df = {0.0, 0.0};
        for (const auto& tm : spec.terms) {
            const TermAt sp = spatial_factor(tm, grid, i);
            const double ct = std::cos(tm.omega * t + tm.psi);
            const double st = std::sin(tm.omega * t + tm.psi);
            f += tm.amplitude * sp.spatial * ct;
            ft += -tm.amplitude * tm.omega * sp.spatial * st;
            for (int j = 0; j < grid.m; ++j) df[j] += tm.amplitude * sp.dspatial[j] * ct;
        }
        out.f[i] = f;
        out.ft[i] = ft;
        for (int j = 0; j < grid.m; ++j) out.df[j][i] = df[j];
    });
    return out;
}

double cbar1(const CouplingSpec& spec, const TorusGrid& grid, double t) {
    const CouplingSamples s = sample(spec, grid, t);
    return par::max(s.f.size(), [&](std::size_t i) { return std::fabs(s.ft[i] / s.f[i]); });
}

} // namespace nsf
