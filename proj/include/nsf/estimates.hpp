#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace nsf {

// dU/dt = D (1 + U)^Q, U(0) = U0; blows up in finite time for Q > 1.
struct NonlinearOde {
    double D = 1.0;
    double Q = 2.0;
    double U0 = 0.0;

    NonlinearOde(double D_, double Q_, double U0_);
};

// dU/dt = A + B U, U(0) = U0.
struct LinearCascadeOde {
    double A = 0.0;
    double B = 0.0;
    double U0 = 0.0;

    LinearCascadeOde(double A_, double B_, double U0_);
};

// Closed-form blow-up supersolution
//   U(t) = (1 + U0) / (1 - (Q-1) D (1+U0)^{Q-1} t)^{1/(Q-1)} - 1.
double nonlinear_supersolution(const NonlinearOde& ode, double t);

// t* = 1 / ((Q-1) D (1+U0)^{Q-1}).
double blowup_time(const NonlinearOde& ode);

// Same formula without the type's Q > 1 invariant; Q <= 1 returns +infinity
// when the sentinel is enabled and throws NoBlowup otherwise.
double blowup_time_general(double D, double Q, double U0, bool infinity_sentinel);

// Safe horizon min{t*/2, t_star}, the factor-2 margin of the local-existence
// construction.
double safe_horizon(const NonlinearOde& ode, double t_star);

// U(t) = U0 e^{Bt} + (A/B)(e^{Bt} - 1), with a series branch below B = 1e-8.
double linear_cascade_solution(const LinearCascadeOde& ode, double t);

struct SupersolutionReport {
    bool pass = true;
    std::optional<std::size_t> first_violation;
    double worst_excess = 0.0; // max of y_i - U(t_i) over the series
};

using ComparisonOde = std::variant<NonlinearOde, LinearCascadeOde>;

// Comparison check: y_i <= U(t_i) + 1e-9 (1 + |U(t_i)|) for the whole series.
SupersolutionReport verify_supersolution(const std::vector<double>& t,
                                         const std::vector<double>& y,
                                         const ComparisonOde& ode);

} // namespace nsf
