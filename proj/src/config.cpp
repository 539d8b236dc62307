#include "presshock/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "presshock/io.hpp"

namespace presshock {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end || !std::isfinite(x)) throw ConfigError(line, key + ": expected a finite number, got '" + v + "'");
    return x;
}

int to_int(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end) throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(line, key + ": expected a boolean, got '" + v + "'");
}

void require(bool ok, int line, const std::string& msg) {
    if (!ok) throw ConfigError(line, msg);
}

} // namespace

SchemeParams RunConfig::scheme() const {
    SchemeParams p;
    p.cfl = cfl;
    p.theta = theta;
    p.rho_floor = rho_floor;
    p.boundary = boundary;
    p.threads = threads;
    return p;
}

std::vector<double> RunConfig::snapshots() const {
    return snapshot_times.empty() ? std::vector<double>{t_end} : snapshot_times;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    std::set<std::string> seen_sections;
    std::map<std::string, int> section_line;
    std::set<std::string> seen_keys;
    PrimitiveState* states[3] = {&c.states.s1, &c.states.s2, &c.states.s3};
    bool state_has[3][3] = {};
    std::map<std::string, int> key_line;

    using Setter = std::function<void(const std::string&, int)>;
    auto num = [](double& dst, const char* key, double lo, double hi, bool lo_open, bool hi_open) {
        return Setter([&dst, key, lo, hi, lo_open, hi_open](const std::string& v, int ln) {
            const double x = to_double(v, ln, key);
            const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
            if (!ok) {
                std::ostringstream m;
                m << key << " = " << v << " out of range " << (lo_open ? "(" : "[") << format_number(lo) << ", "
                  << format_number(hi) << (hi_open ? ")" : "]");
                throw ConfigError(ln, m.str());
            }
            dst = x;
        });
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::map<std::string, std::map<std::string, Setter>> table;
    table["domain"] = {
        {"nx", [&](const std::string& v, int ln) {
             c.grid.nx = to_int(v, ln, "nx");
             require(c.grid.nx >= 4, ln, "nx = " + v + " out of range [4, inf)");
         }},
        {"ny", [&](const std::string& v, int ln) {
             c.grid.ny = to_int(v, ln, "ny");
             require(c.grid.ny >= 4, ln, "ny = " + v + " out of range [4, inf)");
         }},
        {"xmin", num(c.grid.xmin, "xmin", -inf, inf, true, true)},
        {"xmax", num(c.grid.xmax, "xmax", -inf, inf, true, true)},
        {"ymin", num(c.grid.ymin, "ymin", -inf, inf, true, true)},
        {"ymax", num(c.grid.ymax, "ymax", -inf, inf, true, true)},
        {"boundary", [&](const std::string& v, int ln) {
             if (v == "zero-gradient") c.boundary = Boundary::ZeroGradient;
             else if (v == "periodic") c.boundary = Boundary::Periodic;
             else throw ConfigError(ln, "boundary: expected zero-gradient or periodic, got '" + v + "'");
         }},
    };
    table["run"] = {
        {"name", [&](const std::string& v, int) { c.name = v; }},
        {"cfl", num(c.cfl, "cfl", 0, 1, true, true)},
        {"theta", num(c.theta, "theta", 1, 2, false, false)},
        {"t_end", num(c.t_end, "t_end", 0, inf, false, true)},
        {"snapshots", [&](const std::string& v, int ln) {
             c.snapshot_times.clear();
             std::istringstream ss(v);
             std::string tok;
             while (std::getline(ss, tok, ',')) {
                 const double t = to_double(trim(tok), ln, "snapshots");
                 require(t >= 0, ln, "snapshots: negative time " + trim(tok));
                 c.snapshot_times.push_back(t);
             }
             require(!c.snapshot_times.empty(), ln, "snapshots: empty list");
             require(std::is_sorted(c.snapshot_times.begin(), c.snapshot_times.end()), ln,
                     "snapshots: times must be increasing");
         }},
        {"with_energy", [&](const std::string& v, int ln) { c.with_energy = to_bool(v, ln, "with_energy"); }},
        {"rho_floor", num(c.rho_floor, "rho_floor", 0, 1e-3, true, false)},
        {"tol_fp", num(c.tol_fp, "tol_fp", 0, 1e-3, true, false)},
        {"tol_eq", num(c.tol_eq, "tol_eq", 0, 1e-3, false, false)},
        {"threads", [&](const std::string& v, int ln) {
             c.threads = to_int(v, ln, "threads");
             require(c.threads >= 0, ln, "threads = " + v + " out of range [0, inf)");
         }},
        {"output", [&](const std::string& v, int ln) {
             require(!v.empty(), ln, "output: empty path");
             c.output = v;
         }},
    };
    for (int k = 0; k < 3; ++k) {
        PrimitiveState& s = *states[k];
        bool* has = state_has[k];
        table["state" + std::to_string(k + 1)] = {
            {"rho", [&s, has](const std::string& v, int ln) {
                 s.rho = to_double(v, ln, "rho");
                 require(s.rho >= 0, ln, "rho = " + v + " out of range [0, inf)");
                 has[0] = true;
             }},
            {"u", [&s, has](const std::string& v, int ln) {
                 s.u = to_double(v, ln, "u");
                 has[1] = true;
             }},
            {"v", [&s, has](const std::string& v, int ln) {
                 s.v = to_double(v, ln, "v");
                 has[2] = true;
             }},
            {"H", [&s](const std::string& v, int ln) {
                 s.H = to_double(v, ln, "H");
                 require(s.H >= 0, ln, "H = " + v + " out of range [0, inf)");
             }},
        };
    }

    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            require(s.back() == ']', line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            require(table.count(section) > 0, line, "unknown section [" + section + "]");
            if (!seen_sections.insert(section).second)
                throw ConfigError(line, "duplicate section [" + section + "] (first at line " +
                                            std::to_string(section_line[section]) + ")");
            section_line[section] = line;
            continue;
        }
        const auto eq = s.find('=');
        require(eq != std::string::npos, line, "expected key = value");
        require(!section.empty(), line, "key outside of a section");
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        auto& keys = table[section];
        const auto it = keys.find(key);
        require(it != keys.end(), line, "unknown key '" + key + "' in [" + section + "]");
        require(seen_keys.insert(section + "." + key).second, line, "duplicate key '" + key + "' in [" + section + "]");
        key_line[section + "." + key] = line;
        it->second(value, line);
    }

    for (int k = 0; k < 3; ++k) {
        const std::string sec = "state" + std::to_string(k + 1);
        if (!seen_sections.count(sec)) throw ConfigError(line, "missing section [" + sec + "]");
        const char* names[3] = {"rho", "u", "v"};
        for (int q = 0; q < 3; ++q)
            if (!state_has[k][q])
                throw ConfigError(section_line[sec], "missing key '" + std::string(names[q]) + "' in [" + sec + "]");
        try {
            validate(*states[k]);
        } catch (const Error& e) {
            throw ConfigError(section_line[sec], "[" + sec + "]: " + e.what());
        }
    }
    auto where = [&](const std::string& k) {
        const auto it = key_line.find(k);
        return it == key_line.end() ? line : it->second;
    };
    require(c.grid.xmax > c.grid.xmin, where("domain.xmax"), "xmax must exceed xmin");
    require(c.grid.ymax > c.grid.ymin, where("domain.ymax"), "ymax must exceed ymin");
    for (double t : c.snapshot_times)
        require(t <= c.t_end, where("run.snapshots"), "snapshots: time " + format_number(t) + " exceeds t_end");
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

} // namespace presshock
