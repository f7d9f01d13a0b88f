#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsf/coupling.hpp"
#include "nsf/flow.hpp"
#include "nsf/grid.hpp"

namespace nsf {

struct DiagnosticsRecord {
    double t = 0.0;
    double E_f = 0.0;
    std::vector<double> Hkf; // weighted Sobolev, k = 1..kmax
    std::vector<double> Hk;  // plain counterparts
    double unit_err = 0.0;
    double max_tau_f = 0.0;
    std::optional<double> tube_E;
    std::optional<double> energy_residual;
    std::optional<double> commuted_residual;
};

struct PairDiagnostics {
    double t = 0.0;
    double max_dist = 0.0;
    double energy = 0.0;
    bool exceeds_delta0 = false;
};

// One row of the diagnostics series: E_f, the weighted/plain hierarchies up
// to kmax, the unit-norm error and max |tau_f|, all from one pass over the
// covariant jets.
DiagnosticsRecord diagnostics_record(const SphereField& u, const CouplingSamples& fs, int kmax);

// sandwich_check across k = 1..kmax on an assembled record.
bool sandwich_all(const DiagnosticsRecord& rec, double delta, double eta);

// Dirichlet energy E_f(u) = 1/2 int f |grad u|^2.
double dirichlet_energy(const SphereField& u, const CouplingSamples& fs);

// Weighted hierarchy sum_{l=1}^{k+1} int f^l |nabla^l u|^2, k+1 <= 4.
double weighted_sobolev(const SphereField& u, const CouplingSamples& fs, int k);

// Unweighted counterpart sum_{l=1}^{k+1} int |nabla^l u|^2.
double plain_sobolev(const SphereField& u, int k);

struct SandwichResult {
    double lhs = 0.0; // delta^(k+1) * plain
    double mid = 0.0; // weighted
    double rhs = 0.0; // eta^(k+1) * plain
    bool pass = false;
};

// delta^(k+1) ||grad u||^2_{H^k} <= ||grad u||^2_{H^k(f)} <= eta^(k+1) ||.||^2,
// checked with 1e-12 relative slack.
SandwichResult sandwich_check(const SphereField& u, const CouplingSamples& fs, int k,
                              double delta, double eta);

// |dE_f/dt - (1/2 int f_t |grad u|^2 - eps int |tau_f|^2)| with the time
// derivative taken as a centered difference of three recorded states.
double energy_identity_residual(const SphereField& um, double tm, const SphereField& u0,
                                double t0, const SphereField& up, double tp,
                                const CouplingSpec& spec, double eps);

// Tube energy of an ambient state: 1/2 int f^{-1} |rho(v)|^2.
double tube_energy(const TorusGrid& grid, const VecField& v, const CouplingSamples& fs);

// Sup-norm residual of the commuted equation
//   nabla_t nabla_i u = J(u)(nabla_k nabla_k nabla_i u + R(nabla_i u, nabla_k u) nabla_k u)
// on the flat torus, for an eps = 0 run of the f == 1 flow. Centered time
// differences of recorded states, uniform spacing.
double commuted_equation_residual(const SphereField& um, const SphereField& u0,
                                  const SphereField& up, double dt);

struct FrameComponents {
    VecField f1, f2;
    // phi[(j * 2 + alpha) * npts + i] = <nabla_j u, f_alpha> at point i
    std::vector<double> phi;
    std::vector<std::uint8_t> singular;
    std::size_t npts = 0;
    int m = 1;

    double phi_at(int axis, int alpha, std::size_t i) const {
        return phi[(static_cast<std::size_t>(axis) * 2 + alpha) * npts + i];
    }
};

// Orthonormal gauge of u*TS^2 with f2 = u x f1, so J becomes the constant
// rotation by pi/2 in frame coordinates. Points where the reference axis is
// near-normal fall back to a second axis and are flagged, not fatal.
FrameComponents frame_components(const SphereField& u);

// Uniqueness functional E(t) = int d^2(u1,u2) + 1/2 int f |P grad u2 - grad u1|^2.
PairDiagnostics uniqueness_energy(const SphereField& u1, const SphereField& u2,
                                  const CouplingSamples& fs);

struct GronwallFit {
    bool all_zero = false;
    double C = 0.0;
    bool certificate_holds = false;
};

// Smallest C with E_i <= E_0 e^{C t_i} across the series; the certificate
// holds by construction whenever a fit is produced.
GronwallFit gronwall_fit(const std::vector<double>& t, const std::vector<double>& E,
                         double scale = 1.0);

struct GnExponents {
    int j = 0;
    int k = 1;
    double p = 2.0; // use INFINITY for the sup norm
    double q = 2.0;
    double r = 2.0;
    double a = 0.0;
};

// Ratio ||nabla^j s||_p / (||s||^a_{H^{k,q}} ||s||^{1-a}_{L^r}) for a section
// s; "base" selects covariant derivatives along u, null means the trivial
// bundle with flat derivatives.
double gn_probe(const TorusGrid& grid, const VecField& s, const SphereField* base,
                const GnExponents& e);

} // namespace nsf
