#pragma once

#include <cstddef>
#include <optional>

#include "nsf/coupling.hpp"
#include "nsf/grid.hpp"

namespace nsf {

enum class Scheme { RK4, Euler };

struct FlowState {
    SphereField u;
    double t = 0.0;
    double eps = 0.0;
    std::size_t step = 0;
};

// Unconstrained state of the ambient scheme; valid while it stays inside the
// tubular neighborhood max_x | |v| - 1 | < tube_d.
struct AmbientState {
    TorusGrid grid;
    VecField v;
    double t = 0.0;
    double eps = 0.0;
    double tube_d = 0.5;
    std::size_t step = 0;
};

struct StepControl {
    double dt = 0.0;
    double cfl = 0.1;
    Scheme scheme = Scheme::RK4;

    // Explicit stability budget: c * min_j h_j^2 / (eta * (1 + eps) * 4m).
    static double budget(const TorusGrid& grid, double eta, double eps, double c);
};

// Reusable f-sampler; time-independent specs are evaluated once, and every
// returned sample carries the certified (delta, eta) of the spec.
class CouplingSampler {
  public:
    CouplingSampler(const CouplingSpec& spec, const TorusGrid& grid)
        : spec_(&spec), grid_(grid), static_(spec.time_independent()),
          bounds_(bounds(spec, grid)) {}

    const CouplingSamples& at(double t) {
        if (buf_ && (static_ || buf_->t == t)) return *buf_;
        buf_ = sample(*spec_, grid_, static_ ? 0.0 : t);
        buf_->delta = bounds_.delta;
        buf_->eta = bounds_.eta;
        return *buf_;
    }

    const CouplingBounds& certified() const { return bounds_; }

  private:
    const CouplingSpec* spec_;
    TorusGrid grid_;
    bool static_;
    CouplingBounds bounds_;
    std::optional<CouplingSamples> buf_;
};

// Discrete tension field tau_h(u) = P(u)(Delta_h u), tangent at every point.
VecField tension(const SphereField& u);

// tau_f(u) = f * tau(u) + sum_j d_j f * nabla_j u.
VecField tension_f(const SphereField& u, const CouplingSamples& fs);

// Right-hand side of the regularized system: eps * tau_f + u x tau_f.
// Pointwise |rhs|^2 = (1 + eps^2) |tau_f|^2.
VecField rhs(const SphereField& u, const CouplingSamples& fs, double eps);

// One explicit step in ambient coordinates followed by pointwise projection
// back onto the sphere. Throws StepRejected when the pre-projection norm
// drifts past the blow-up guard.
FlowState step(const FlowState& state, CouplingSampler& f, const StepControl& ctl);

// Smooth cutoff on squared tube distance: 1 below (d/2)^2, 0 above (3d/4)^2,
// quintic smoothstep between.
double lambda_cutoff(double s, double d);

// Right-hand side of the ambient system. Built so that on-sphere states have
// exactly tangent velocities and the weighted tube energy is non-increasing
// for static f at the semi-discrete level.
VecField rhs_ambient(const AmbientState& state, const CouplingSamples& fs);

AmbientState step_ambient(const AmbientState& state, CouplingSampler& f,
                          const StepControl& ctl);

double max_tube_distance(const VecField& v);

} // namespace nsf
