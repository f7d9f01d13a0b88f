#pragma once

#include <string>

#include "nsf/grid.hpp"

namespace nsf {

// Binary field snapshot, little-endian throughout:
//   magic "NSF1" | u32 version = 1 | u32 m | u32 n_j per axis |
//   f64 L_j per axis | f64 t | f64 eps | row-major f64 (x,y,z) triples.
struct Snapshot {
    TorusGrid grid;
    VecField values;
    double t = 0.0;
    double eps = 0.0;
};

void write_snapshot(const std::string& path, const TorusGrid& grid, const VecField& values,
                    double t, double eps);

// require_unit selects SphereField semantics: every triple must be unit-norm
// within 1e-9, else NormViolation naming the offending index. AmbientState
// loads pass false.
Snapshot read_snapshot(const std::string& path, bool require_unit);

} // namespace nsf
