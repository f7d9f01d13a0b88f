#pragma once

#include "nsf/errors.hpp"
#include "nsf/vec3.hpp"

namespace nsf::geo {

// Pure per-point primitives for the unit sphere S^2 in R^3. Everything is
// extrinsic; the target is fixed to the round unit sphere (curvature 1,
// injectivity radius pi). All functions are stateless and safe to call
// concurrently over grid points.

inline constexpr double kNearZero = 1e-14;

// Geodesic-convexity radius min{i0/2, 1/(4 sqrt(K0))} on the unit sphere.
inline constexpr double kDelta0 = 0.25;

// Closest-point projection pi(y) = y/|y|.
inline Vec3 project_point(const Vec3& y) {
    const double r = norm(y);
    if (r < kNearZero) throw NearZeroVector("project_point: |y| < 1e-14");
    return y / r;
}

// Normal part rho(y) = y - pi(y); rho + pi = Id on the tube.
inline Vec3 rho(const Vec3& y) { return y - project_point(y); }

// Orthogonal projection onto T_u S^2: P(u)v = v - <v,u>u.
inline Vec3 project_tangent(const Vec3& u, const Vec3& v) { return v - dot(v, u) * u; }

// Complex structure J(u)v = u x v; isometry of the tangent plane, J^2 = -Id.
inline Vec3 complex_structure(const Vec3& u, const Vec3& v) { return cross(u, v); }

// Second fundamental form A(u)(X,Y) = -<X,Y>u, valued in the normal line.
inline Vec3 second_fundamental_form(const Vec3& u, const Vec3& X, const Vec3& Y) {
    return -dot(X, Y) * u;
}

inline double clamp_unit(double t) { return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t); }

// Geodesic distance arccos<p,q>. Evaluated as atan2(|p x q|, <p,q>), which
// equals the clamped arccos for unit vectors but is exact at p = q and keeps
// full relative accuracy near 0 and pi.
inline double geodesic_distance(const Vec3& p, const Vec3& q) {
    return std::atan2(norm(cross(p, q)), dot(p, q));
}

// Parallel transport of v in T_p S^2 along the minimizing geodesic to q.
// Closed form valid below the antipodal cut; callers comparing two fields
// must keep d(p,q) < kDelta0 before trusting transport-based functionals.
inline Vec3 parallel_transport(const Vec3& p, const Vec3& q, const Vec3& v) {
    const double pq = dot(p, q);
    if (pq <= -1.0 + 1e-9) throw AntipodalPoints("parallel_transport: points antipodal");
    return v - (dot(v, q) / (1.0 + pq)) * (p + q);
}

// Curvature of the unit sphere: R(X,Y)Z = <Y,Z>X - <X,Z>Y.
inline Vec3 curvature_RN(const Vec3& X, const Vec3& Y, const Vec3& Z) {
    return dot(Y, Z) * X - dot(X, Z) * Y;
}

// A point on S^2, normalized on construction.
class UnitVec3 {
  public:
    UnitVec3() : v_(0.0, 0.0, 1.0) {}
    explicit UnitVec3(const Vec3& y) : v_(project_point(y)) {}
    UnitVec3(double x, double y, double z) : UnitVec3(Vec3{x, y, z}) {}

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }

  private:
    Vec3 v_;
};

// A tangent vector pinned to its base point; constructor projects out any
// normal component so the pairing invariant <vec,base> = 0 holds exactly.
class TangentVec3 {
  public:
    TangentVec3(const UnitVec3& base, const Vec3& v)
        : base_(base), v_(project_tangent(base.vec(), v)) {}

    const UnitVec3& base() const { return base_; }
    const Vec3& vec() const { return v_; }

  private:
    UnitVec3 base_;
    Vec3 v_;
};

} // namespace nsf::geo
