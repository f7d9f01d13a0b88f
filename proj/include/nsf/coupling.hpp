#pragma once

#include <array>
#include <vector>

#include "nsf/grid.hpp"

namespace nsf {

// One separable trig-polynomial term
//   a * prod_j cos(2 pi k_j x_j / L_j + phi_j) * cos(omega t + psi).
// Integer wave vectors make spatial periodicity exact by construction.
struct CouplingTerm {
    double amplitude = 0.0;
    std::array<int, 2> k = {0, 0};
    std::array<double, 2> phi = {0.0, 0.0};
    double omega = 0.0;
    double psi = 0.0;
};

// Closed-form coupling f(x,t) = c0 + sum of terms, with analytic spatial and
// temporal derivatives and a certified positive lower bound.
struct CouplingSpec {
    double c0 = 1.0;
    std::vector<CouplingTerm> terms;
    double t_star = 1.0;

    bool time_independent() const {
        for (const auto& tm : terms)
            if (tm.omega != 0.0) return false;
        return true;
    }
};

// Number of time samples used for positivity certification and bounds.
inline constexpr int kCouplingTimeSamples = 257;
// Safety margin on the certified minimum.
inline constexpr double kCouplingDeltaMin = 1e-3;

struct CouplingBounds {
    double delta = 1.0; // min(sampled min, 1)
    double eta = 1.0;   // max(sampled max, 1)
    double raw_min = 1.0;
    double raw_max = 1.0;
    std::size_t min_id = 0; // grid point and time where the minimum was sampled
    double min_t = 0.0;
};

struct CouplingSamples {
    double t = 0.0;
    ScalarField f;
    std::array<ScalarField, 2> df; // df[axis]; df[1] unused when m == 1
    ScalarField ft;
    double delta = 1.0;
    double eta = 1.0;
};

double coupling_value(const CouplingSpec& spec, const TorusGrid& grid, std::size_t id, double t);

// Sampled extrema over grid x time samples, normalized to the standing
// convention delta <= 1 <= eta. Throws NonPositiveCoupling on min <= 0.
CouplingBounds bounds(const CouplingSpec& spec, const TorusGrid& grid);

// Construction-time certification: sampled min must clear the safety margin.
CouplingBounds certify(const CouplingSpec& spec, const TorusGrid& grid);

// Analytic evaluation of f, grad f, f_t at one time; no finite differencing.
CouplingSamples sample(const CouplingSpec& spec, const TorusGrid& grid, double t);

// C1bar(t) = max over the grid of |f_t / f|.
double cbar1(const CouplingSpec& spec, const TorusGrid& grid, double t);

inline CouplingSpec constant_coupling(double c = 1.0, double t_star = 1e30) {
    CouplingSpec s;
    s.c0 = c;
    s.t_star = t_star;
    return s;
}

} // namespace nsf
