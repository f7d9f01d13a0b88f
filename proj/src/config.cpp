#include "nsf/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "nsf/errors.hpp"

namespace nsf {

std::size_t RunConfig::step_count() const {
    if (T <= 0.0) return 0;
    const double budget = StepControl::budget(grid, eta, eps, dt_override ? 1.0 : cfl);
    const double dt = dt_override ? *dt_override : budget;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    return steps < 1 ? 1 : steps;
}

double RunConfig::resolved_dt() const {
    const std::size_t steps = step_count();
    if (steps == 0) return StepControl::budget(grid, eta, eps, cfl);
    return T / static_cast<double>(steps);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Line {
    int number;
    std::string section;
    std::string key;
    std::string value;
};

struct ParseErrors {
    std::vector<std::string> messages;
    void add(int line, const std::string& msg) {
        messages.push_back("line " + std::to_string(line) + ": " + msg);
    }
    void raise_if_any() const {
        if (messages.empty()) return;
        std::string all = "config errors:";
        for (const auto& m : messages) all += "\n  " + m;
        throw ConfigError(all);
    }
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Line> tokenize(const std::string& text, ParseErrors& err) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                err.add(number, "unterminated section header");
                continue;
            }
            section = s.substr(1, s.size() - 2);
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            err.add(number, "expected key = value");
            continue;
        }
        if (section.empty()) {
            err.add(number, "key before any [section]");
            continue;
        }
        lines.push_back({number, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1))});
    }
    return lines;
}

bool to_double(const std::string& s, double& out) {
    try {
        std::size_t pos;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool to_int(const std::string& s, int& out) {
    try {
        std::size_t pos;
        out = std::stoi(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    ParseErrors err;
    const std::vector<Line> lines = tokenize(text, err);

    RunConfig cfg;
    int m = 1;
    std::vector<int> n;
    std::vector<double> L;
    bool has_n = false, has_L = false, has_T = false, has_tstar = false;
    cfg.coupling.terms.clear();
    std::vector<std::pair<int, std::string>> deferred_terms;

    for (const Line& ln : lines) {
        const std::string& sec = ln.section;
        const std::string& key = ln.key;
        const std::string& val = ln.value;
        auto need_double = [&](double& out) {
            if (!to_double(val, out)) err.add(ln.number, "expected a number for '" + key + "'");
        };
        auto need_int = [&](int& out) {
            if (!to_int(val, out)) err.add(ln.number, "expected an integer for '" + key + "'");
        };

        if (sec == "grid") {
            if (key == "m") {
                need_int(m);
            } else if (key == "n") {
                has_n = true;
                for (const auto& w : split_ws(val)) {
                    int v = 0;
                    if (!to_int(w, v)) err.add(ln.number, "bad grid size '" + w + "'");
                    n.push_back(v);
                }
            } else if (key == "L") {
                has_L = true;
                for (const auto& w : split_ws(val)) {
                    double v = 0;
                    if (!to_double(w, v)) err.add(ln.number, "bad period '" + w + "'");
                    L.push_back(v);
                }
            } else {
                err.add(ln.number, "unknown key '" + key + "' in [grid]");
            }
        } else if (sec == "coupling") {
            if (key == "c0") {
                need_double(cfg.coupling.c0);
            } else if (key == "tstar") {
                has_tstar = true;
                need_double(cfg.coupling.t_star);
            } else if (key == "term") {
                deferred_terms.emplace_back(ln.number, val);
            } else {
                err.add(ln.number, "unknown key '" + key + "' in [coupling]");
            }
        } else if (sec == "initial") {
            if (key == "family") {
                if (val == "constant")
                    cfg.initial.family = InitialSpec::Family::Constant;
                else if (val == "equator")
                    cfg.initial.family = InitialSpec::Family::Equator;
                else if (val == "rotated")
                    cfg.initial.family = InitialSpec::Family::Rotated;
                else if (val == "bandlimited")
                    cfg.initial.family = InitialSpec::Family::BandLimited;
                else if (val == "bump")
                    cfg.initial.family = InitialSpec::Family::Bump;
                else if (val == "snapshot")
                    cfg.initial.family = InitialSpec::Family::Snapshot;
                else
                    err.add(ln.number, "unknown initial family '" + val + "'");
            } else if (key == "constant") {
                const auto w = split_ws(val);
                double c[3];
                if (w.size() != 3 || !to_double(w[0], c[0]) || !to_double(w[1], c[1]) ||
                    !to_double(w[2], c[2]))
                    err.add(ln.number, "constant needs three components");
                else
                    cfg.initial.constant = {c[0], c[1], c[2]};
            } else if (key == "winding") {
                need_int(cfg.initial.winding);
            } else if (key == "theta") {
                need_double(cfg.initial.theta);
            } else if (key == "axis") {
                if (val.size() != 1 || (val[0] != 'x' && val[0] != 'y' && val[0] != 'z'))
                    err.add(ln.number, "axis must be x, y or z");
                else
                    cfg.initial.axis = val[0];
            } else if (key == "seed") {
                int s = 0;
                need_int(s);
                cfg.initial.seed = static_cast<std::uint64_t>(s);
            } else if (key == "modes") {
                need_int(cfg.initial.modes);
            } else if (key == "amp") {
                need_double(cfg.initial.amp);
            } else if (key == "bump_amp") {
                need_double(cfg.initial.bump_amp);
            } else if (key == "bump_center") {
                need_double(cfg.initial.bump_center);
            } else if (key == "bump_width") {
                need_double(cfg.initial.bump_width);
            } else if (key == "path") {
                cfg.initial.snapshot_path = val;
            } else {
                err.add(ln.number, "unknown key '" + key + "' in [initial]");
            }
        } else if (sec == "solver") {
            if (key == "eps") {
                need_double(cfg.eps);
            } else if (key == "scheme") {
                if (val == "rk4")
                    cfg.scheme = Scheme::RK4;
                else if (val == "euler")
                    cfg.scheme = Scheme::Euler;
                else
                    err.add(ln.number, "scheme must be rk4 or euler");
            } else if (key == "cfl") {
                need_double(cfg.cfl);
            } else if (key == "dt") {
                double dt = 0;
                need_double(dt);
                cfg.dt_override = dt;
            } else if (key == "T") {
                has_T = true;
                need_double(cfg.T);
            } else if (key == "sample_every") {
                need_int(cfg.sample_every);
            } else if (key == "kmax") {
                need_int(cfg.kmax);
            } else if (key == "residuals") {
                if (val == "true")
                    cfg.residuals = true;
                else if (val == "false")
                    cfg.residuals = false;
                else
                    err.add(ln.number, "residuals must be true or false");
            } else if (key == "tube_scale") {
                need_double(cfg.tube_scale);
            } else if (key == "tube_d") {
                need_double(cfg.tube_d);
            } else {
                err.add(ln.number, "unknown key '" + key + "' in [solver]");
            }
        } else if (sec == "output") {
            if (key == "csv")
                cfg.csv_path = val;
            else if (key == "manifest")
                cfg.manifest_path = val;
            else if (key == "snapshots")
                cfg.snapshot_prefix = val;
            else
                err.add(ln.number, "unknown key '" + key + "' in [output]");
        } else {
            err.add(ln.number, "unknown section [" + sec + "]");
        }
    }

    // grid assembly
    if (!has_n) err.messages.push_back("[grid] n is required");
    if (!has_L) err.messages.push_back("[grid] L is required");
    if (m != 1 && m != 2) err.messages.push_back("[grid] m must be 1 or 2");
    err.raise_if_any();
    if (static_cast<int>(n.size()) != m || static_cast<int>(L.size()) != m)
        throw ConfigError("config: n and L must each list " + std::to_string(m) + " value(s)");
    try {
        cfg.grid = m == 1 ? TorusGrid::line(n[0], L[0]) : TorusGrid::plane(n[0], n[1], L[0], L[1]);
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // coupling terms, now that m is known
    for (const auto& [number, val] : deferred_terms) {
        const auto w = split_ws(val);
        const std::size_t expect = m == 1 ? 5 : 7; // a k.. phi.. omega psi
        if (w.size() != expect) {
            err.add(number, "term needs " + std::to_string(expect) + " fields for m = " +
                                std::to_string(m) + " (a k phi omega psi per axis)");
            continue;
        }
        CouplingTerm tm;
        std::size_t idx = 0;
        bool ok = to_double(w[idx++], tm.amplitude);
        for (int j = 0; j < m; ++j) ok = ok && to_int(w[idx++], tm.k[j]);
        for (int j = 0; j < m; ++j) ok = ok && to_double(w[idx++], tm.phi[j]);
        ok = ok && to_double(w[idx++], tm.omega) && to_double(w[idx++], tm.psi);
        if (!ok)
            err.add(number, "malformed term");
        else
            cfg.coupling.terms.push_back(tm);
    }
    if (!has_tstar && !cfg.coupling.time_independent())
        err.messages.push_back("[coupling] tstar is required for time-dependent couplings");
    if (!has_tstar) cfg.coupling.t_star = 1e30;
    if (!has_T) err.messages.push_back("[solver] T is required");
    err.raise_if_any();

    // validation
    if (!(cfg.eps >= 0.0 && cfg.eps < 1.0))
        err.messages.push_back("[solver] eps must lie in [0, 1)");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
        err.messages.push_back("[solver] cfl must lie in (0, 1]");
    if (!(cfg.T >= 0.0)) err.messages.push_back("[solver] T must be non-negative");
    if (cfg.T > cfg.coupling.t_star)
        err.messages.push_back("[solver] T must not exceed the coupling horizon tstar");
    if (cfg.sample_every < 1) err.messages.push_back("[solver] sample_every must be >= 1");
    if (cfg.kmax < 1 || cfg.kmax > 3) err.messages.push_back("[solver] kmax must lie in 1..3");
    if (!(cfg.tube_d > 0.0 && cfg.tube_d < 1.0))
        err.messages.push_back("[solver] tube_d must lie in (0, 1)");
    if (!(cfg.tube_scale >= 1.0 && cfg.tube_scale < 1.0 + 0.5 * cfg.tube_d))
        err.messages.push_back("[solver] tube_scale must lie in [1, 1 + tube_d/2)");
    if (cfg.initial.family == InitialSpec::Family::Bump && !(cfg.initial.bump_width > 0.0))
        err.messages.push_back("[initial] bump_width must be positive");
    if (cfg.initial.family == InitialSpec::Family::Snapshot &&
        cfg.initial.snapshot_path.empty())
        err.messages.push_back("[initial] snapshot family requires a path");
    err.raise_if_any();

    try {
        const CouplingBounds b = certify(cfg.coupling, cfg.grid);
        cfg.delta = b.delta;
        cfg.eta = b.eta;
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cfg.dt_override) {
        const double cap = StepControl::budget(cfg.grid, cfg.eta, cfg.eps, 1.0);
        if (!(*cfg.dt_override > 0.0) || *cfg.dt_override > cap * (1.0 + 1e-12))
            throw ConfigError("config: dt override exceeds the stability budget " + fmt(cap));
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string print_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "m = " << cfg.grid.m << "\n";
    out << "n = " << cfg.grid.n[0];
    if (cfg.grid.m == 2) out << " " << cfg.grid.n[1];
    out << "\n";
    out << "L = " << fmt(cfg.grid.L[0]);
    if (cfg.grid.m == 2) out << " " << fmt(cfg.grid.L[1]);
    out << "\n\n[coupling]\n";
    out << "c0 = " << fmt(cfg.coupling.c0) << "\n";
    out << "tstar = " << fmt(cfg.coupling.t_star) << "\n";
    for (const auto& tm : cfg.coupling.terms) {
        out << "term = " << fmt(tm.amplitude);
        for (int j = 0; j < cfg.grid.m; ++j) out << " " << tm.k[j];
        for (int j = 0; j < cfg.grid.m; ++j) out << " " << fmt(tm.phi[j]);
        out << " " << fmt(tm.omega) << " " << fmt(tm.psi) << "\n";
    }
    out << "\n[initial]\n";
    switch (cfg.initial.family) {
    case InitialSpec::Family::Constant:
        out << "family = constant\n";
        out << "constant = " << fmt(cfg.initial.constant.x) << " " << fmt(cfg.initial.constant.y)
            << " " << fmt(cfg.initial.constant.z) << "\n";
        break;
    case InitialSpec::Family::Equator:
        out << "family = equator\n";
        out << "winding = " << cfg.initial.winding << "\n";
        break;
    case InitialSpec::Family::Rotated:
        out << "family = rotated\n";
        out << "winding = " << cfg.initial.winding << "\n";
        out << "theta = " << fmt(cfg.initial.theta) << "\n";
        out << "axis = " << cfg.initial.axis << "\n";
        break;
    case InitialSpec::Family::BandLimited:
        out << "family = bandlimited\n";
        out << "seed = " << cfg.initial.seed << "\n";
        out << "modes = " << cfg.initial.modes << "\n";
        out << "amp = " << fmt(cfg.initial.amp) << "\n";
        break;
    case InitialSpec::Family::Bump:
        out << "family = bump\n";
        out << "winding = " << cfg.initial.winding << "\n";
        out << "bump_amp = " << fmt(cfg.initial.bump_amp) << "\n";
        out << "bump_center = " << fmt(cfg.initial.bump_center) << "\n";
        out << "bump_width = " << fmt(cfg.initial.bump_width) << "\n";
        break;
    case InitialSpec::Family::Snapshot:
        out << "family = snapshot\n";
        out << "path = " << cfg.initial.snapshot_path << "\n";
        break;
    }
    out << "\n[solver]\n";
    out << "eps = " << fmt(cfg.eps) << "\n";
    out << "scheme = " << (cfg.scheme == Scheme::RK4 ? "rk4" : "euler") << "\n";
    out << "cfl = " << fmt(cfg.cfl) << "\n";
    if (cfg.dt_override) out << "dt = " << fmt(*cfg.dt_override) << "\n";
    out << "T = " << fmt(cfg.T) << "\n";
    out << "sample_every = " << cfg.sample_every << "\n";
    out << "kmax = " << cfg.kmax << "\n";
    out << "residuals = " << (cfg.residuals ? "true" : "false") << "\n";
    out << "tube_scale = " << fmt(cfg.tube_scale) << "\n";
    out << "tube_d = " << fmt(cfg.tube_d) << "\n";
    out << "\n[output]\n";
    if (!cfg.csv_path.empty()) out << "csv = " << cfg.csv_path << "\n";
    if (!cfg.manifest_path.empty()) out << "manifest = " << cfg.manifest_path << "\n";
    if (!cfg.snapshot_prefix.empty()) out << "snapshots = " << cfg.snapshot_prefix << "\n";
    return out.str();
}

} // namespace nsf
