#pragma once

#include <string>
#include <vector>

#include "presshock/riemann.hpp"
#include "presshock/scheme.hpp"

namespace presshock {

struct RunConfig {
    std::string name;
    Grid2D grid;
    Boundary boundary = Boundary::ZeroGradient;
    double cfl = 0.1;
    double theta = 1.3;
    double t_end = 0.2;
    std::vector<double> snapshot_times;  // empty: t_end only
    RiemannData states;
    bool with_energy = false;
    double rho_floor = 1e-10;
    double tol_fp = 1e-11;
    double tol_eq = 0;
    int threads = 0;
    std::string output = "out";

    SchemeParams scheme() const;
    std::vector<double> snapshots() const;
};

// Sections: [domain] [run] [state1] [state2] [state3]; '#' starts a comment.
// Errors are ConfigError with the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace presshock
