#pragma once

#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/flow.hpp"

namespace nsf {

struct TrajectorySample {
    std::size_t step = 0;
    double t = 0.0;
    SphereField u;
    DiagnosticsRecord rec;
    bool sandwich_pass = true;
};

struct Trajectory {
    double dt = 0.0;
    std::size_t steps = 0;
    double delta = 1.0, eta = 1.0;
    std::vector<TrajectorySample> samples;
};

// Deterministic projected-flow run: identical config and build give identical
// samples byte for byte. Step errors propagate with the failing step index.
Trajectory run(const RunConfig& cfg);

// Same, but from explicit initial data (pair experiments perturb u0 directly).
Trajectory run_from(const RunConfig& cfg, SphereField u0);

// Post-pass filling centered-difference residual diagnostics on interior
// samples with uniform spacing.
void attach_residuals(Trajectory& traj, const RunConfig& cfg);

struct AmbientSample {
    std::size_t step = 0;
    double t = 0.0;
    VecField v;
    DiagnosticsRecord rec; // diagnostics of the projected field, plus tube_E
    double max_grad_rho2 = 0.0;
};

struct AmbientTrajectory {
    double dt = 0.0;
    std::size_t steps = 0;
    double delta = 1.0, eta = 1.0;
    std::vector<AmbientSample> samples;
};

// Ambient (unconstrained) run from tube_scale * initial data.
AmbientTrajectory run_ambient(const RunConfig& cfg);

} // namespace nsf
