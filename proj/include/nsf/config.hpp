#pragma once

#include <optional>
#include <string>

#include "nsf/coupling.hpp"
#include "nsf/flow.hpp"
#include "nsf/initial.hpp"

namespace nsf {

// Fully validated description of one run. Parsed from sectioned key-value
// text; print_config/parse_config form a fixpoint.
struct RunConfig {
    TorusGrid grid;
    CouplingSpec coupling;
    InitialSpec initial;

    double eps = 0.0;
    Scheme scheme = Scheme::RK4;
    double cfl = 0.1;
    std::optional<double> dt_override;
    double T = 0.0;
    int sample_every = 1;
    int kmax = 2;
    bool residuals = false;

    double tube_scale = 1.0;
    double tube_d = 0.5;

    std::string csv_path;
    std::string manifest_path;
    std::string snapshot_prefix;

    // Resolved at validation time from the coupling bounds.
    double delta = 1.0;
    double eta = 1.0;

    double resolved_dt() const;
    std::size_t step_count() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string print_config(const RunConfig& cfg);

} // namespace nsf
