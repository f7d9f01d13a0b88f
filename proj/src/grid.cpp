#include "nsf/grid.hpp"

#include "nsf/geometry.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

namespace {

void check_axis_count(int n, double L) {
    if (n < 8 || n % 2 != 0) throw ConfigError("grid: points per axis must be even and >= 8");
    if (!(L > 0.0)) throw ConfigError("grid: period length must be positive");
}

} // namespace

TorusGrid TorusGrid::line(int n0, double L0) {
    check_axis_count(n0, L0);
    TorusGrid g;
    g.m = 1;
    g.n = {n0, 1};
    g.L = {L0, 1.0};
    g.h = {L0 / n0, 1.0};
    return g;
}

TorusGrid TorusGrid::plane(int n0, int n1, double L0, double L1) {
    check_axis_count(n0, L0);
    check_axis_count(n1, L1);
    TorusGrid g;
    g.m = 2;
    g.n = {n0, n1};
    g.L = {L0, L1};
    g.h = {L0 / n0, L1 / n1};
    return g;
}

SphereField make_sphere_field(const TorusGrid& grid, const Vec3& value) {
    return {grid, VecField(grid.points(), geo::project_point(value))};
}

double max_unit_error(const SphereField& u) {
    return par::max(u.values.size(),
                    [&](std::size_t i) { return std::fabs(norm(u.values[i]) - 1.0); });
}

template <typename T>
static std::vector<T> diff_central_impl(const TorusGrid& grid, const std::vector<T>& s,
                                        int axis) {
    std::vector<T> out(s.size());
    const double inv2h = 1.0 / (2.0 * grid.h[axis]);
    par::for_each(s.size(), [&](std::size_t i) {
        out[i] = (s[grid.shift(i, axis, 1)] - s[grid.shift(i, axis, -1)]) * inv2h;
    });
    return out;
}

ScalarField diff_central(const TorusGrid& grid, const ScalarField& s, int axis) {
    return diff_central_impl(grid, s, axis);
}

VecField diff_central(const TorusGrid& grid, const VecField& s, int axis) {
    return diff_central_impl(grid, s, axis);
}

template <typename T>
static std::vector<T> laplacian_impl(const TorusGrid& grid, const std::vector<T>& s) {
    std::vector<T> out(s.size());
    const double ih0 = 1.0 / (grid.h[0] * grid.h[0]);
    const double ih1 = grid.m == 2 ? 1.0 / (grid.h[1] * grid.h[1]) : 0.0;
    par::for_each(s.size(), [&](std::size_t i) {
        T acc = (s[grid.shift(i, 0, 1)] + s[grid.shift(i, 0, -1)] - s[i] * 2.0) * ih0;
        if (grid.m == 2)
            acc += (s[grid.shift(i, 1, 1)] + s[grid.shift(i, 1, -1)] - s[i] * 2.0) * ih1;
        out[i] = acc;
    });
    return out;
}

ScalarField laplacian(const TorusGrid& grid, const ScalarField& s) {
    return laplacian_impl(grid, s);
}

VecField laplacian(const TorusGrid& grid, const VecField& s) { return laplacian_impl(grid, s); }

VecField covariant_derivative(const SphereField& u, const VecField& s, int axis) {
    const TorusGrid& g = u.grid;
    VecField out(s.size());
    const double inv2h = 1.0 / (2.0 * g.h[axis]);
    par::for_each(s.size(), [&](std::size_t i) {
        const Vec3 d = (s[g.shift(i, axis, 1)] - s[g.shift(i, axis, -1)]) * inv2h;
        out[i] = geo::project_tangent(u.values[i], d);
    });
    return out;
}

TensorField grad_cov(const SphereField& u) {
    const std::size_t npts = u.grid.points();
    TensorField out{u.grid.m, 1, npts, VecField(static_cast<std::size_t>(u.grid.m) * npts)};
    for (int j = 0; j < u.grid.m; ++j) {
        VecField dj = covariant_derivative(u, u.values, j);
        for (std::size_t i = 0; i < npts; ++i) out.at(j, i) = dj[i];
    }
    return out;
}

TensorField grad_cov(const SphereField& u, const TensorField& s) {
    const std::size_t npts = s.npts;
    const std::size_t nc = s.ncomp();
    TensorField out{s.m, s.rank + 1, npts, VecField(static_cast<std::size_t>(s.m) * nc * npts)};
    for (int j = 0; j < s.m; ++j) {
        for (std::size_t c = 0; c < nc; ++c) {
            VecField comp(s.comp.begin() + c * npts, s.comp.begin() + (c + 1) * npts);
            VecField dj = covariant_derivative(u, comp, j);
            const std::size_t cout = static_cast<std::size_t>(j) * nc + c;
            for (std::size_t i = 0; i < npts; ++i) out.at(cout, i) = dj[i];
        }
    }
    return out;
}

std::vector<ScalarField> higher_covariant_norms(const SphereField& u, int kmax) {
    if (kmax > 4) throw KTooLarge("higher_covariant_norms: kmax > 4");
    if (kmax < 1) throw KTooLarge("higher_covariant_norms: kmax < 1");
    std::vector<ScalarField> norms;
    norms.reserve(kmax);
    TensorField s = grad_cov(u);
    for (int l = 1; l <= kmax; ++l) {
        const std::size_t nc = s.ncomp();
        ScalarField sq(s.npts);
        par::for_each(s.npts, [&](std::size_t i) {
            double acc = 0.0;
            for (std::size_t c = 0; c < nc; ++c) acc += norm2(s.at(c, i));
            sq[i] = acc;
        });
        norms.push_back(std::move(sq));
        if (l < kmax) s = grad_cov(u, s);
    }
    return norms;
}

double integrate(const TorusGrid& grid, const ScalarField& s) {
    return grid.cell() * par::sum(s.size(), [&](std::size_t i) { return s[i]; });
}

} // namespace nsf
