#include "nsf/estimates.hpp"

#include <cmath>
#include <limits>

#include "nsf/errors.hpp"

namespace nsf {

NonlinearOde::NonlinearOde(double D_, double Q_, double U0_) : D(D_), Q(Q_), U0(U0_) {
    if (!(D > 0.0) || !std::isfinite(D)) throw Error("NonlinearOde: D must be positive");
    if (!(Q >= 1.0 + 1e-9) || !std::isfinite(Q))
        throw Error("NonlinearOde: Q must be >= 1 + 1e-9");
    if (!(U0 >= 0.0) || !std::isfinite(U0)) throw Error("NonlinearOde: U0 must be >= 0");
}

LinearCascadeOde::LinearCascadeOde(double A_, double B_, double U0_) : A(A_), B(B_), U0(U0_) {
    if (!(A >= 0.0) || !std::isfinite(A)) throw Error("LinearCascadeOde: A must be >= 0");
    if (!(B >= 0.0) || !std::isfinite(B)) throw Error("LinearCascadeOde: B must be >= 0");
    if (!(U0 >= 0.0) || !std::isfinite(U0)) throw Error("LinearCascadeOde: U0 must be >= 0");
}

double blowup_time(const NonlinearOde& ode) {
    return 1.0 / ((ode.Q - 1.0) * ode.D * std::pow(1.0 + ode.U0, ode.Q - 1.0));
}

double blowup_time_general(double D, double Q, double U0, bool infinity_sentinel) {
    if (Q <= 1.0) {
        if (infinity_sentinel) return std::numeric_limits<double>::infinity();
        throw NoBlowup("blowup_time: Q <= 1 has no blow-up");
    }
    return 1.0 / ((Q - 1.0) * D * std::pow(1.0 + U0, Q - 1.0));
}

double safe_horizon(const NonlinearOde& ode, double t_star) {
    const double half = 0.5 * blowup_time(ode);
    return half < t_star ? half : t_star;
}

double nonlinear_supersolution(const NonlinearOde& ode, double t) {
    if (t < 0.0) throw DomainExceeded("nonlinear_supersolution: t < 0");
    const double tstar = blowup_time(ode);
    if (t >= tstar) throw BeyondBlowup("nonlinear_supersolution: t at or past blow-up");
    const double qm1 = ode.Q - 1.0;
    const double denom = 1.0 - qm1 * ode.D * std::pow(1.0 + ode.U0, qm1) * t;
    return (1.0 + ode.U0) * std::pow(denom, -1.0 / qm1) - 1.0;
}

double linear_cascade_solution(const LinearCascadeOde& ode, double t) {
    if (t < 0.0) throw DomainExceeded("linear_cascade_solution: t < 0");
    if (ode.B < 1e-8) {
        // series of the closed form to second order in B t
        const double bt = ode.B * t;
        return ode.U0 * (1.0 + bt + 0.5 * bt * bt) +
               ode.A * t * (1.0 + 0.5 * bt + bt * bt / 6.0);
    }
    const double ebt = std::exp(ode.B * t);
    return ode.U0 * ebt + ode.A / ode.B * (ebt - 1.0);
}

SupersolutionReport verify_supersolution(const std::vector<double>& t,
                                         const std::vector<double>& y,
                                         const ComparisonOde& ode) {
    if (t.size() != y.size()) throw Error("verify_supersolution: size mismatch");
    if (const auto* nl = std::get_if<NonlinearOde>(&ode)) {
        const double tstar = blowup_time(*nl);
        for (double ti : t)
            if (ti >= tstar)
                throw DomainExceeded("verify_supersolution: sample at or past blow-up time");
    }
    SupersolutionReport rep;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double U = std::holds_alternative<NonlinearOde>(ode)
                             ? nonlinear_supersolution(std::get<NonlinearOde>(ode), t[i])
                             : linear_cascade_solution(std::get<LinearCascadeOde>(ode), t[i]);
        const double excess = y[i] - U;
        if (excess > rep.worst_excess) rep.worst_excess = excess;
        if (excess > 1e-9 * (1.0 + std::fabs(U)) && rep.pass) {
            rep.pass = false;
            rep.first_violation = i;
        }
    }
    return rep;
}

} // namespace nsf
