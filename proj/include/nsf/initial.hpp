#pragma once

#include <cstdint>
#include <string>

#include "nsf/grid.hpp"

namespace nsf {

// Named, seeded initial-data families; every experiment is reproducible from
// the config alone. The snapshot family additionally allows resuming from a
// previously written state.
struct InitialSpec {
    enum class Family { Constant, Equator, Rotated, BandLimited, Bump, Snapshot };

    Family family = Family::Equator;
    Vec3 constant{0.0, 0.0, 1.0};
    int winding = 1;
    double theta = 0.0;
    char axis = 'z';
    std::uint64_t seed = 1;
    int modes = 3;
    double amp = 0.5;
    double bump_amp = 0.5;
    double bump_center = 0.0;
    double bump_width = 1.0;
    std::string snapshot_path;
};

SphereField generate_initial(const InitialSpec& spec, const TorusGrid& grid);

// Fixed rotation of the target applied to every value.
SphereField rotate_field(const SphereField& u, char axis, double theta);
Vec3 rotate_vec(const Vec3& v, char axis, double theta);

} // namespace nsf
