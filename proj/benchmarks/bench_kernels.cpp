// Times the grid kernels in the serial reference mode and the OpenMP mode
// and checks that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nsf/coupling.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/flow.hpp"
#include "nsf/grid.hpp"
#include "nsf/initial.hpp"
#include "nsf/parallel.hpp"

using namespace nsf;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    // warm-up
    fn();
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 256;
    int reps = argc > 2 ? std::atoi(argv[2]) : 20;

    const TorusGrid grid = TorusGrid::plane(n, n, 6.283185307179586, 6.283185307179586);
    InitialSpec init;
    init.family = InitialSpec::Family::BandLimited;
    init.seed = 7;
    init.modes = 4;
    init.amp = 0.6;
    const SphereField u = generate_initial(init, grid);

    CouplingSpec fspec;
    fspec.c0 = 2.0;
    fspec.terms.push_back({0.5, {1, 1}, {0.0, 0.0}, 0.0, 0.0});
    const CouplingSamples fs = sample(fspec, grid, 0.0);

    struct Bench {
        std::string name;
        std::function<void()> fn;
    };
    volatile double sink = 0.0;
    std::vector<Bench> benches = {
        {"tension", [&] { sink = tension(u)[0].x; }},
        {"tension_f", [&] { sink = tension_f(u, fs)[0].x; }},
        {"rhs (eps=0.1)", [&] { sink = rhs(u, fs, 0.1)[0].x; }},
        {"covariant norms l<=4", [&] { sink = higher_covariant_norms(u, 4)[3][0]; }},
        {"dirichlet_energy", [&] { sink = dirichlet_energy(u, fs); }},
        {"integrate", [&] { sink = integrate(grid, fs.f); }},
    };

    std::printf("grid %dx%d, %d reps, OpenMP threads: %d\n\n", n, n, reps,
                par::max_threads());
    std::printf("%-24s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

    for (auto& b : benches) {
        par::set_backend(par::Backend::Serial);
        const double ts = time_of(b.fn, reps);
        par::set_backend(par::Backend::OpenMP);
        const double tp = time_of(b.fn, reps);
        std::printf("%-24s %12.3f %12.3f %8.2fx\n", b.name.c_str(), ts * 1e3, tp * 1e3,
                    ts / tp);
    }

    // the two backends must agree bitwise on a full reduction
    par::set_backend(par::Backend::Serial);
    const double es = dirichlet_energy(u, fs);
    par::set_backend(par::Backend::OpenMP);
    const double ep = dirichlet_energy(u, fs);
    std::printf("\ndeterminism: serial %.17g vs openmp %.17g -> %s\n", es, ep,
                es == ep ? "identical" : "MISMATCH");
    return es == ep ? 0 : 1;
}
