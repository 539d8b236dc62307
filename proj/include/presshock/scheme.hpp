#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "presshock/core.hpp"

namespace presshock {

struct RiemannData;

struct Grid2D {
    int nx = 200;
    int ny = 200;
    double xmin = -0.5;
    double xmax = 0.5;
    double ymin = -0.5;
    double ymax = 0.5;
    int ghost = 2;

    double dx() const { return (xmax - xmin) / nx; }
    double dy() const { return (ymax - ymin) / ny; }
    double xc(int i) const { return xmin + (i + 0.5) * dx(); }
    double yc(int j) const { return ymin + (j + 0.5) * dy(); }
    void validate() const;
};

enum class Boundary { ZeroGradient, Periodic };

// Cell averages with a ghost frame. Column idx(i, j) holds (rho, mx, my, E)
// for interior indices 0 <= i < nx, 0 <= j < ny and ghosts outside.
struct GridField {
    Grid2D grid;
    double time = 0;
    bool with_energy = false;
    Eigen::Array<double, 4, Eigen::Dynamic> U;

    int stride() const { return grid.nx + 2 * grid.ghost; }
    int rows() const { return grid.ny + 2 * grid.ghost; }
    int idx(int i, int j) const { return (i + grid.ghost) + (j + grid.ghost) * stride(); }
    auto cell(int i, int j) { return U.col(idx(i, j)); }
    auto cell(int i, int j) const { return U.col(idx(i, j)); }
    int ncomp() const { return with_energy ? 4 : 3; }
};

GridField make_field(const Grid2D& grid, bool with_energy);
GridField initial_field(const RiemannData& d, const Grid2D& grid, bool with_energy);
void fill_ghosts(GridField& f, Boundary b);

// Interior totals times cell area, per component.
Eigen::Array4d totals(const GridField& f);

template <typename Scalar>
Scalar minmod(std::initializer_list<Scalar> values) {
    bool pos = true, neg = true;
    for (Scalar v : values) {
        pos = pos && v > 0;
        neg = neg && v < 0;
    }
    if (pos) return std::min(values);
    if (neg) return std::max(values);
    return Scalar(0);
}

struct SchemeParams {
    double cfl = 0.1;
    double theta = 1.3;
    double rho_floor = 1e-10;
    double eps_speed = 1e-12;
    Boundary boundary = Boundary::ZeroGradient;
    int threads = 0; // 0: PRESSHOCK_THREADS or hardware concurrency
};

struct Slopes {
    Eigen::Array<double, 4, Eigen::Dynamic> ux;
    Eigen::Array<double, 4, Eigen::Dynamic> uy;
};

// Slopes on the interior and the first ghost ring; ghosts must be filled.
Slopes slopes(const GridField& f, double theta);

struct ReconstructedFace {
    const GridField* field = nullptr;
    Slopes s;
    int guarded_cells = 0;

    ConservedState avg(int i, int j) const { return field->cell(i, j); }
    ConservedState E(int i, int j) const { return point(i, j, 1, 0); }
    ConservedState W(int i, int j) const { return point(i, j, -1, 0); }
    ConservedState N(int i, int j) const { return point(i, j, 0, 1); }
    ConservedState S(int i, int j) const { return point(i, j, 0, -1); }
    ConservedState NE(int i, int j) const { return point(i, j, 1, 1); }
    ConservedState NW(int i, int j) const { return point(i, j, -1, 1); }
    ConservedState SE(int i, int j) const { return point(i, j, 1, -1); }
    ConservedState SW(int i, int j) const { return point(i, j, -1, -1); }

    ConservedState point(int i, int j, int sx, int sy) const {
        const int k = field->idx(i, j);
        ConservedState u = field->U.col(k);
        if (sx) u += (sx * field->grid.dx() / 2) * s.ux.col(k);
        if (sy) u += (sy * field->grid.dy() / 2) * s.uy.col(k);
        return u;
    }
};

// Guards applied per cell: slopes are zeroed when any of the eight point
// values has negative density, or a point-value velocity outside the range of
// the neighbouring (3x3) cell-average velocities.
ReconstructedFace reconstruct(const GridField& f, Slopes s, double rho_floor = 1e-10);

struct Speeds {
    double plus = 0;
    double minus = 0;
};

Speeds local_speeds_x(const ConservedState& Uw_right, const ConservedState& Ue_left, double rho_floor);
Speeds local_speeds_y(const ConservedState& Us_upper, const ConservedState& Un_lower, double rho_floor);

template <typename Derived>
ConservedState flux_exact_x(const Eigen::ArrayBase<Derived>& u, double rho_floor) {
    return velocity_of(u, rho_floor).x() * u;
}

template <typename Derived>
ConservedState flux_exact_y(const Eigen::ArrayBase<Derived>& u, double rho_floor) {
    return velocity_of(u, rho_floor).y() * u;
}

// Central-upwind flux between a lower state ul (E or N side of the lower cell)
// and an upper state ur. The corner pairs are (upper-cell corner, lower-cell
// corner) along the two edges of the interface.
ConservedState cu_flux(const ConservedState& ul, const ConservedState& ur, const ConservedState& fl,
                       const ConservedState& fr, const ConservedState& c1r, const ConservedState& c1l,
                       const ConservedState& c2r, const ConservedState& c2l, Speeds a, double eps_speed);

struct XCorners {
    ConservedState nw_right, ne_left, sw_right, se_left;
};
struct YCorners {
    ConservedState sw_upper, nw_lower, se_upper, ne_lower;
};

ConservedState flux_x(const ConservedState& Ue_left, const ConservedState& Uw_right, const XCorners& c, Speeds a,
                      double rho_floor, double eps_speed = 1e-12);
ConservedState flux_y(const ConservedState& Un_lower, const ConservedState& Us_upper, const YCorners& c, Speeds b,
                      double rho_floor, double eps_speed = 1e-12);

struct RhsResult {
    Eigen::Array<double, 4, Eigen::Dynamic> dUdt;
    // Net outflow rate through the domain boundary (amount per unit time).
    Eigen::Array4d outflow = Eigen::Array4d::Zero();
    double a_max = 0;
    double b_max = 0;
    int guarded_cells = 0;
};

// Ghosts of f must be filled.
RhsResult rhs(const GridField& f, const SchemeParams& p);

double compute_dt(const GridField& f, const SchemeParams& p, double dt_cap);

struct StepStats {
    Eigen::Array4d outflow = Eigen::Array4d::Zero();  // integrated over the step
    Eigen::Array4d clipped = Eigen::Array4d::Zero();  // amount removed by the density floor
    long clip_count = 0;
    double max_negative = 0;  // largest pre-clip negative density magnitude
    double max_rho = 0;
    long guarded_cells = 0;

    void add(const StepStats& o);
};

GridField step(const GridField& f, double dt, const SchemeParams& p, StepStats* stats = nullptr);

struct RunResult {
    std::vector<GridField> snapshots;
    Eigen::Array4d initial_totals = Eigen::Array4d::Zero();
    StepStats stats;
    long steps = 0;
};

RunResult run(const GridField& initial, const SchemeParams& p, double t_end, std::vector<double> snapshot_times);
RunResult run(const RiemannData& d, const Grid2D& grid, const SchemeParams& p, double t_end,
              std::vector<double> snapshot_times, bool with_energy = false);

int worker_count(int requested);

} // namespace presshock
