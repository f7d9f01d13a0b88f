#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "nsf/errors.hpp"
#include "nsf/vec3.hpp"

namespace nsf {

// Flat periodic torus T^1 or T^2 as a uniform grid. Index arithmetic wraps
// modulo n on every axis; axis 0 is contiguous in memory.
struct TorusGrid {
    int m = 1;
    std::array<int, 2> n = {8, 1};
    std::array<double, 2> L = {1.0, 1.0};
    std::array<double, 2> h = {0.125, 1.0};

    static TorusGrid line(int n0, double L0);
    static TorusGrid plane(int n0, int n1, double L0, double L1);

    std::size_t points() const {
        return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(m == 2 ? n[1] : 1);
    }

    std::size_t index(int i0, int i1 = 0) const {
        return static_cast<std::size_t>(i0) + static_cast<std::size_t>(n[0]) * i1;
    }

    // Neighbor of `id` shifted by `delta` cells along `axis`, periodic.
    std::size_t shift(std::size_t id, int axis, int delta) const {
        const int n0 = n[0];
        if (axis == 0) {
            int i0 = static_cast<int>(id % n0) + delta;
            i0 %= n0;
            if (i0 < 0) i0 += n0;
            return id - id % n0 + static_cast<std::size_t>(i0);
        }
        const int n1 = n[1];
        int i1 = static_cast<int>(id / n0) + delta;
        i1 %= n1;
        if (i1 < 0) i1 += n1;
        return id % n0 + static_cast<std::size_t>(n0) * i1;
    }

    double coord(std::size_t id, int axis) const {
        const int i = axis == 0 ? static_cast<int>(id % n[0]) : static_cast<int>(id / n[0]);
        return h[axis] * i;
    }

    double min_h() const { return m == 2 && h[1] < h[0] ? h[1] : h[0]; }
    double volume() const { return m == 2 ? L[0] * L[1] : L[0]; }
    double cell() const { return m == 2 ? h[0] * h[1] : h[0]; }

    bool same_shape(const TorusGrid& o) const {
        return m == o.m && n == o.n && L == o.L;
    }
};

using ScalarField = std::vector<double>;
using VecField = std::vector<Vec3>;

// Map from the grid into S^2, one unit vector per point.
struct SphereField {
    TorusGrid grid;
    VecField values;
};

// Section of u*TS^2 tensored with `rank` copies of T*M: 3-vector components
// indexed by a multi-index of torus axes, layout comp[c * npts + i] with
// c = j_1 * m^(rank-1) + ... + j_rank.
struct TensorField {
    int m = 1;
    int rank = 0;
    std::size_t npts = 0;
    VecField comp;

    std::size_t ncomp() const {
        std::size_t c = 1;
        for (int r = 0; r < rank; ++r) c *= static_cast<std::size_t>(m);
        return c;
    }
    const Vec3& at(std::size_t c, std::size_t i) const { return comp[c * npts + i]; }
    Vec3& at(std::size_t c, std::size_t i) { return comp[c * npts + i]; }
};

SphereField make_sphere_field(const TorusGrid& grid, const Vec3& value);
double max_unit_error(const SphereField& u);

// Second-order central difference along one axis, periodic.
ScalarField diff_central(const TorusGrid& grid, const ScalarField& s, int axis);
VecField diff_central(const TorusGrid& grid, const VecField& s, int axis);

// Compact 3-point (m=1) / 5-point (m=2) periodic Laplacian.
ScalarField laplacian(const TorusGrid& grid, const ScalarField& s);
VecField laplacian(const TorusGrid& grid, const VecField& s);

// Discrete connection on the pull-back bundle: project-then-difference,
// nabla_j s := P(u) D_j s applied per component.
VecField covariant_derivative(const SphereField& u, const VecField& s, int axis);

// nabla u as a rank-1 section.
TensorField grad_cov(const SphereField& u);
// nabla s, rank grows by one; the new axis index is the leading one.
TensorField grad_cov(const SphereField& u, const TensorField& s);

// Per-point |nabla^l u|^2 for l = 1..kmax (sum of squares over all indices).
std::vector<ScalarField> higher_covariant_norms(const SphereField& u, int kmax);

// Periodic rectangle rule with the deterministic blocked summation order.
double integrate(const TorusGrid& grid, const ScalarField& s);

} // namespace nsf
