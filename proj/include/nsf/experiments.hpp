#pragma once

#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/run.hpp"

namespace nsf {

// Exit-code contract shared by all subcommands: 0 completed, 2 step rejected
// or tube left, 3 configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitStepError = 2;
inline constexpr int kExitConfigError = 3;

std::string csv_text(const Trajectory& traj, bool residual_columns);
std::string csv_text(const AmbientTrajectory& traj);

void write_text(const std::string& path, const std::string& text);
void write_manifest(const std::string& path, const RunConfig& cfg, double dt,
                    std::size_t steps, double wall_seconds, int exit_code);

int cmd_run(const RunConfig& cfg);
int cmd_sweep_eps(const RunConfig& cfg, const std::vector<double>& eps_list);
int cmd_uniqueness(const RunConfig& cfg, double theta, char axis);
int cmd_expand_torus(const RunConfig& cfg, const std::vector<int>& k_list);
int cmd_tube(const RunConfig& cfg);

// Sup geodesic distance between two same-grid fields.
double sup_distance(const SphereField& a, const SphereField& b);

// Results of the sweep / pair / window experiments, exposed for in-process
// verification by the test suites.
struct SweepResult {
    std::vector<double> eps;
    std::vector<double> sup_dist; // against the eps = 0 run, same order
    bool ordered = false;         // strictly decreasing with eps
};
SweepResult sweep_eps(const RunConfig& cfg, const std::vector<double>& eps_list);

struct PairSeries {
    std::vector<PairDiagnostics> rows;
    bool fitted = false;
    bool all_zero = false;
    double C = 0.0;
};
PairSeries uniqueness_pair(const RunConfig& cfg, double theta, char axis);

struct ExpandResult {
    std::vector<int> k;
    std::vector<double> window_dist; // consecutive-run sup distance on the base window
    bool ordered = false;            // last difference < first
};
ExpandResult expand_torus(const RunConfig& cfg, const std::vector<int>& k_list);

struct TubeResult {
    AmbientTrajectory traj;
    bool monotone = false; // non-increase within the per-step slack (static f)
    double slack = 0.0;
};
TubeResult tube_run(const RunConfig& cfg);

// Seeded band-limited plain sections for the interpolation-inequality probe.
// `rep` stretches the mode indices so that a grid spanning rep base periods
// carries the same physical wavelengths as the base torus.
VecField gn_section(const TorusGrid& grid, std::uint64_t seed, int modes, int rep = 1);
double gn_ensemble_max_ratio(const TorusGrid& grid, int sections, std::uint64_t seed,
                             int modes, const GnExponents& e, int rep = 1);

} // namespace nsf
