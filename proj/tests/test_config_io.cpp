#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/experiments.hpp"
#include "nsf/parallel.hpp"
#include "nsf/run.hpp"
#include "nsf/snapshot.hpp"

using namespace nsf;

namespace {

const char* kMinimal = R"(
[grid]
m = 1
n = 64
L = 6.283185307179586

[coupling]
c0 = 1.0

[initial]
family = equator

[solver]
T = 0.01
)";

std::string tmp_path(const std::string& name) { return "/tmp/nsf_test_" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("minimal config parses with the documented defaults") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.eps == 0.0);
    CHECK(cfg.scheme == Scheme::RK4);
    CHECK(cfg.cfl == 0.1);
    CHECK(cfg.kmax == 2);
    CHECK(cfg.sample_every == 1);
    CHECK(cfg.grid.n[0] == 64);
    CHECK(cfg.delta == 1.0);
    CHECK(cfg.eta == 1.0);
}

TEST_CASE("grid boundary cases") {
    std::string ten(kMinimal);
    ten.replace(ten.find("n = 64"), 6, "n = 10");
    CHECK_NOTHROW(parse_config(ten)); // even and >= 8: accepted

    std::string odd(kMinimal);
    odd.replace(odd.find("n = 64"), 6, "n = 11");
    CHECK_THROWS_AS(parse_config(odd), ConfigError);

    std::string small(kMinimal);
    small.replace(small.find("n = 64"), 6, "n = 6");
    CHECK_THROWS_AS(parse_config(small), ConfigError);
}

TEST_CASE("config errors carry line numbers and name the offense") {
    const char* unknown = R"(
[grid]
m = 1
n = 64
L = 6.28
bogus = 1
)";
    try {
        parse_config(unknown);
        FAIL("should have thrown");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 6") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }

    // non-positive coupling is rejected at validation
    std::string bad(kMinimal);
    bad.replace(bad.find("c0 = 1.0"), 8, "c0 = 0.5\nterm = 0.6 1 0 0 0");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    // missing required keys
    CHECK_THROWS_AS(parse_config("[grid]\nm = 1\nn = 64\n"), ConfigError);
}

TEST_CASE("dt override must respect the stability budget") {
    std::string cfg(kMinimal);
    cfg += "dt = 0.5\n"; // appended to [solver]
    CHECK_THROWS_AS(parse_config(cfg), ConfigError);

    std::string ok(kMinimal);
    ok += "dt = 1e-5\n";
    CHECK_NOTHROW(parse_config(ok));
}

TEST_CASE("parse/print fixpoint") {
    const char* fancy = R"(
[grid]
m = 1
n = 32
L = 6.283185307179586

[coupling]
c0 = 2.0
tstar = 4.0
term = 0.5 1 -1.5707963267948966 1.0 0.0

[initial]
family = bandlimited
seed = 9
modes = 3
amp = 0.55

[solver]
eps = 0.25
scheme = euler
cfl = 0.05
T = 0.5
sample_every = 4
kmax = 3
residuals = true

[output]
csv = /tmp/out.csv
)";
    const RunConfig a = parse_config(fancy);
    const std::string printed = print_config(a);
    const RunConfig b = parse_config(printed);
    CHECK(print_config(b) == printed);
}

TEST_CASE("snapshot round trip is bit exact") {
    const TorusGrid g = TorusGrid::plane(8, 12, 1.5, 2.5);
    InitialSpec spec;
    spec.family = InitialSpec::Family::BandLimited;
    spec.seed = 3;
    spec.modes = 2;
    spec.amp = 0.4;
    const SphereField u = generate_initial(spec, g);

    const std::string path = tmp_path("roundtrip.nsf");
    write_snapshot(path, g, u.values, 0.375, 0.25);
    const Snapshot s = read_snapshot(path, true);
    CHECK(s.grid.m == 2);
    CHECK(s.grid.n == g.n);
    CHECK(s.grid.L[0] == g.L[0]);
    CHECK(s.grid.L[1] == g.L[1]);
    CHECK(s.t == 0.375);
    CHECK(s.eps == 0.25);
    REQUIRE(s.values.size() == u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(s.values[i] == u.values[i]);

    // the serialized bytes themselves are reproducible
    const std::string again = tmp_path("roundtrip2.nsf");
    write_snapshot(again, g, u.values, 0.375, 0.25);
    CHECK(slurp(path) == slurp(again));
    std::remove(again.c_str());
    std::remove(path.c_str());
}

TEST_CASE("snapshot error taxonomy") {
    const TorusGrid g = TorusGrid::line(8, 1.0);
    VecField vals(g.points(), Vec3{0, 0, 1});
    const std::string path = tmp_path("errors.nsf");
    write_snapshot(path, g, vals, 0.0, 0.0);

    // bad magic
    {
        std::string bytes = slurp(path);
        bytes[0] = 'X';
        std::ofstream(path, std::ios::binary) << bytes;
        CHECK_THROWS_AS(read_snapshot(path, true), BadMagic);
    }
    // truncated payload, message names the byte counts
    write_snapshot(path, g, vals, 0.0, 0.0);
    {
        std::string bytes = slurp(path);
        bytes.resize(bytes.size() - 5);
        std::ofstream(path, std::ios::binary) << bytes;
        try {
            read_snapshot(path, true);
            FAIL("should have thrown");
        } catch (const LengthMismatch& e) {
            const std::string msg = e.what();
            CHECK(msg.find("expected") != std::string::npos);
            CHECK(msg.find("got") != std::string::npos);
        }
    }
    // zero triple: rejected for sphere loads, accepted for ambient loads
    vals[3] = {0, 0, 0};
    write_snapshot(path, g, vals, 0.0, 0.0);
    try {
        read_snapshot(path, true);
        FAIL("should have thrown");
    } catch (const NormViolation& e) {
        CHECK(std::string(e.what()).find("index 3") != std::string::npos);
    }
    CHECK_NOTHROW(read_snapshot(path, false));
    std::remove(path.c_str());
}

TEST_CASE("cmd_run writes deterministic artifacts and reports exit 0") {
    std::string text(kMinimal);
    text += "kmax = 3\n";
    text += "\n[output]\ncsv = " + tmp_path("run.csv") +
            "\nmanifest = " + tmp_path("run.json") + "\n";
    RunConfig cfg = parse_config(text);

    CHECK(cmd_run(cfg) == 0);
    const std::string csv1 = slurp(tmp_path("run.csv"));
    CHECK(cmd_run(cfg) == 0);
    const std::string csv2 = slurp(tmp_path("run.csv"));
    CHECK(csv1 == csv2);

    // header layout: t, E_f, weighted then plain hierarchies, then the tail
    CHECK(csv1.substr(0, csv1.find('\n')) ==
          "t,E_f,Hkf_1,Hkf_2,Hkf_3,Hk_1,Hk_2,Hk_3,unit_err,max_tau_f");

    // manifest echoes a config that reparses to the same canonical form
    const auto manifest = nlohmann::json::parse(slurp(tmp_path("run.json")));
    const RunConfig echoed = parse_config(manifest["config"].get<std::string>());
    CHECK(print_config(echoed) == print_config(cfg));
    CHECK(manifest["exit_code"] == 0);

    std::remove(tmp_path("run.csv").c_str());
    std::remove(tmp_path("run.json").c_str());
}

TEST_CASE("csv bytes do not depend on the execution backend") {
    std::string text(kMinimal);
    text.replace(text.find("T = 0.01"), 8, "T = 0.005");
    text.replace(text.find("family = equator"), 16,
                 "family = bandlimited\nseed = 2\nmodes = 3\namp = 0.5");
    const RunConfig cfg = parse_config(text);

    par::set_backend(par::Backend::Serial);
    const std::string serial = csv_text(run(cfg), false);
    par::set_backend(par::Backend::OpenMP);
    const std::string parallel = csv_text(run(cfg), false);
    CHECK(serial == parallel);
}

TEST_CASE("snapshot resume reproduces the uninterrupted run bitwise") {
    std::string text(kMinimal);
    text.replace(text.find("c0 = 1.0"), 8, "c0 = 2.0\nterm = 1.0 1 -1.5707963267948966 0 0");
    text.replace(text.find("family = equator"), 16,
                 "family = bandlimited\nseed = 31\nmodes = 2\namp = 0.5");
    RunConfig full = parse_config(text);
    full.eps = 0.1;
    full.T = 0.008;
    full.dt_override = 0.0004; // 20 aligned steps
    const Trajectory ref = run(full);

    RunConfig first = full;
    first.T = 0.004;
    const Trajectory half = run(first);
    const std::string snap = tmp_path("resume.nsf");
    write_snapshot(snap, full.grid, half.samples.back().u.values, half.samples.back().t,
                   full.eps);

    RunConfig second = full;
    second.T = 0.004;
    second.initial.family = InitialSpec::Family::Snapshot;
    second.initial.snapshot_path = snap;
    const Trajectory resumed = run(second);

    const SphereField& a = ref.samples.back().u;
    const SphereField& b = resumed.samples.back().u;
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    std::remove(snap.c_str());

    // grid mismatch is rejected
    RunConfig wrong = second;
    wrong.grid = TorusGrid::line(32, wrong.grid.L[0]);
    write_snapshot(snap, full.grid, half.samples.back().u.values, 0.0, 0.0);
    CHECK_THROWS_AS(run(wrong), ConfigError);
    std::remove(snap.c_str());
}

TEST_CASE("csv rows re-verify offline from the matching snapshots") {
    std::string text(kMinimal);
    text.replace(text.find("c0 = 1.0"), 8, "c0 = 2.0\nterm = 1.0 1 -1.5707963267948966 0 0");
    text.replace(text.find("family = equator"), 16,
                 "family = bandlimited\nseed = 8\nmodes = 2\namp = 0.5");
    text += "kmax = 3\nsample_every = 4\n";
    text += "\n[output]\ncsv = " + tmp_path("verify.csv") + "\nsnapshots = " +
            tmp_path("verify") + "\n";
    RunConfig cfg = parse_config(text);
    cfg.dt_override = cfg.T / 12.0;
    REQUIRE(cmd_run(cfg) == 0);

    // each recorded step has a snapshot; recompute its diagnostics row
    const CouplingBounds b = bounds(cfg.coupling, cfg.grid);
    std::vector<double> csv_E;
    {
        std::ifstream in(tmp_path("verify.csv"));
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line))
            csv_E.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
    const std::size_t recorded[] = {0, 4, 8, 12};
    CouplingSampler sampler(cfg.coupling, cfg.grid);
    for (std::size_t r = 0; r < 4; ++r) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_%08zu.nsf", recorded[r]);
        const Snapshot s = read_snapshot(tmp_path("verify") + suffix, true);
        const SphereField u{cfg.grid, s.values};
        const DiagnosticsRecord rec = diagnostics_record(u, sampler.at(s.t), cfg.kmax);
        CHECK(sandwich_all(rec, b.delta, b.eta));
        CHECK(rec.E_f == csv_E[r]); // %.17g round-trips doubles exactly
        std::remove((tmp_path("verify") + suffix).c_str());
    }
    std::remove(tmp_path("verify.csv").c_str());
}

TEST_CASE("constant-map run: row count and zero energies") {
    std::string text(kMinimal);
    text.replace(text.find("family = equator"), 16, "family = constant");
    RunConfig cfg = parse_config(text);
    // exactly 10 steps
    cfg.dt_override = cfg.T / 10.0;
    const Trajectory traj = run(cfg);
    CHECK(traj.steps == 10);
    CHECK(traj.samples.size() == 11);
    for (const auto& s : traj.samples) {
        CHECK(s.rec.E_f == 0.0);
        CHECK(s.rec.Hkf[0] == 0.0);
        CHECK(s.rec.max_tau_f == 0.0);
    }
}
