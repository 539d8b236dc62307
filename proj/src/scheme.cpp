#include "presshock/scheme.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "presshock/riemann.hpp"

namespace presshock {

void Grid2D::validate() const {
    if (nx < 4 || ny < 4) throw Error("grid needs at least 4 cells per direction");
    if (!(xmax > xmin) || !(ymax > ymin)) throw Error("grid bounds are empty");
    if (ghost != 2) throw Error("ghost width must be 2");
}

GridField make_field(const Grid2D& grid, bool with_energy) {
    grid.validate();
    GridField f;
    f.grid = grid;
    f.with_energy = with_energy;
    f.U = Eigen::Array<double, 4, Eigen::Dynamic>::Zero(4, f.stride() * f.rows());
    return f;
}

GridField initial_field(const RiemannData& d, const Grid2D& grid, bool with_energy) {
    validate(d);
    GridField f = make_field(grid, with_energy);
    const ConservedState c1 = to_conserved(d.s1, with_energy);
    const ConservedState c2 = to_conserved(d.s2, with_energy);
    const ConservedState c3 = to_conserved(d.s3, with_energy);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.xc(i), y = grid.yc(j);
            f.cell(i, j) = y < 0 ? c3 : (x > 0 ? c1 : c2);
        }
    fill_ghosts(f, Boundary::ZeroGradient);
    return f;
}

void fill_ghosts(GridField& f, Boundary b) {
    const int nx = f.grid.nx, ny = f.grid.ny, g = f.grid.ghost;
    auto src = [&](int k, int n) {
        if (b == Boundary::Periodic) return ((k % n) + n) % n;
        return std::clamp(k, 0, n - 1);
    };
    for (int j = -g; j < ny + g; ++j)
        for (int i = -g; i < nx + g; ++i) {
            if (i >= 0 && i < nx && j >= 0 && j < ny) continue;
            f.cell(i, j) = f.cell(src(i, nx), src(j, ny));
        }
}

Eigen::Array4d totals(const GridField& f) {
    Eigen::Array4d t = Eigen::Array4d::Zero();
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) t += f.cell(i, j);
    return t * (f.grid.dx() * f.grid.dy());
}

int worker_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("PRESSHOCK_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

namespace {

template <typename Fn>
void parallel_rows(int begin, int end, int threads, const Fn& fn) {
    const int n = end - begin;
    if (threads <= 1 || n < 2 * threads) {
        for (int r = begin; r < end; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int b = begin + n * t / threads, e = begin + n * (t + 1) / threads;
        pool.emplace_back([&, b, e] {
            for (int r = b; r < e; ++r) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

Slopes slopes(const GridField& f, double theta) {
    const int nx = f.grid.nx, ny = f.grid.ny;
    const double dx = f.grid.dx(), dy = f.grid.dy();
    Slopes s;
    s.ux = Eigen::Array<double, 4, Eigen::Dynamic>::Zero(4, f.U.cols());
    s.uy = s.ux;
    for (int j = -1; j <= ny; ++j)
        for (int i = -1; i <= nx; ++i) {
            const int k = f.idx(i, j);
            const int kw = f.idx(i - 1, j), ke = f.idx(i + 1, j), ks = f.idx(i, j - 1), kn = f.idx(i, j + 1);
            for (int c = 0; c < 4; ++c) {
                const double u = f.U(c, k);
                s.ux(c, k) = minmod({theta * (f.U(c, ke) - u) / dx, (f.U(c, ke) - f.U(c, kw)) / (2 * dx),
                                     theta * (u - f.U(c, kw)) / dx});
                s.uy(c, k) = minmod({theta * (f.U(c, kn) - u) / dy, (f.U(c, kn) - f.U(c, ks)) / (2 * dy),
                                     theta * (u - f.U(c, ks)) / dy});
            }
        }
    return s;
}

ReconstructedFace reconstruct(const GridField& f, Slopes s, double rho_floor) {
    ReconstructedFace r;
    r.field = &f;
    r.s = std::move(s);
    for (int j = -1; j <= f.grid.ny; ++j)
        for (int i = -1; i <= f.grid.nx; ++i) {
            const int k = f.idx(i, j);
            // Velocity range of the neighbouring averages.
            double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
            for (int b = -1; b <= 1; ++b)
                for (int a = -1; a <= 1; ++a) {
                    const auto c = f.cell(i + a, j + b);
                    if (!(c(0) >= rho_floor) || c(0) <= 0) continue;
                    for (int d = 0; d < 2; ++d) {
                        lo[d] = std::min(lo[d], c(1 + d) / c(0));
                        hi[d] = std::max(hi[d], c(1 + d) / c(0));
                    }
                }
            double tol[2];
            for (int d = 0; d < 2; ++d)
                tol[d] = lo[d] <= hi[d] ? 1e-10 * (1 + std::max(std::abs(lo[d]), std::abs(hi[d]))) : 0;
            bool bad = false;
            for (int b = -1; b <= 1 && !bad; ++b)
                for (int a = -1; a <= 1; ++a) {
                    if (a == 0 && b == 0) continue;
                    const ConservedState u = r.point(i, j, a, b);
                    if (u(0) < 0) {
                        bad = true;
                        break;
                    }
                    if (!(u(0) >= rho_floor) || !(lo[0] <= hi[0])) continue;
                    const double vel[2] = {u(1) / u(0), u(2) / u(0)};
                    if (vel[0] < lo[0] - tol[0] || vel[0] > hi[0] + tol[0] || vel[1] < lo[1] - tol[1] ||
                        vel[1] > hi[1] + tol[1]) {
                        bad = true;
                        break;
                    }
                }
            if (bad) {
                r.s.ux.col(k).setZero();
                r.s.uy.col(k).setZero();
                if (i >= 0 && i < f.grid.nx && j >= 0 && j < f.grid.ny) ++r.guarded_cells;
            }
        }
    return r;
}

Speeds local_speeds_x(const ConservedState& Uw_right, const ConservedState& Ue_left, double rho_floor) {
    const double ur = velocity_of(Uw_right, rho_floor).x(), ul = velocity_of(Ue_left, rho_floor).x();
    return {std::max({ur, ul, 0.0}), std::min({ur, ul, 0.0})};
}

Speeds local_speeds_y(const ConservedState& Us_upper, const ConservedState& Un_lower, double rho_floor) {
    const double vr = velocity_of(Us_upper, rho_floor).y(), vl = velocity_of(Un_lower, rho_floor).y();
    return {std::max({vr, vl, 0.0}), std::min({vr, vl, 0.0})};
}

ConservedState cu_flux(const ConservedState& ul, const ConservedState& ur, const ConservedState& fl,
                       const ConservedState& fr, const ConservedState& c1r, const ConservedState& c1l,
                       const ConservedState& c2r, const ConservedState& c2l, Speeds a, double eps_speed) {
    const double span = a.plus - a.minus;
    if (span < eps_speed) return (fl + fr) / 2;
    const ConservedState mid = (a.plus * ur - a.minus * ul - (fr - fl)) / span;
    ConservedState q;
    for (int c = 0; c < 4; ++c)
        q(c) = minmod({(c1r(c) - mid(c)) / span, (mid(c) - c1l(c)) / span, (c2r(c) - mid(c)) / span,
                       (mid(c) - c2l(c)) / span});
    return (a.plus * fl - a.minus * fr) / span + a.plus * a.minus * ((ur - ul) / span - q);
}

ConservedState flux_x(const ConservedState& Ue_left, const ConservedState& Uw_right, const XCorners& c, Speeds a,
                      double rho_floor, double eps_speed) {
    return cu_flux(Ue_left, Uw_right, flux_exact_x(Ue_left, rho_floor), flux_exact_x(Uw_right, rho_floor),
                   c.nw_right, c.ne_left, c.sw_right, c.se_left, a, eps_speed);
}

ConservedState flux_y(const ConservedState& Un_lower, const ConservedState& Us_upper, const YCorners& c, Speeds b,
                      double rho_floor, double eps_speed) {
    return cu_flux(Un_lower, Us_upper, flux_exact_y(Un_lower, rho_floor), flux_exact_y(Us_upper, rho_floor),
                   c.sw_upper, c.nw_lower, c.se_upper, c.ne_lower, b, eps_speed);
}

namespace {

struct FaceFluxes {
    Eigen::Array<double, 4, Eigen::Dynamic> hx;  // (nx+1) x ny, interface i-1/2 at column i
    Eigen::Array<double, 4, Eigen::Dynamic> hy;  // nx x (ny+1), interface j-1/2 at row j
    std::vector<double> amax_row, bmax_row;
    int guarded = 0;
};

FaceFluxes face_fluxes(const GridField& f, const SchemeParams& p, bool with_flux) {
    const int nx = f.grid.nx, ny = f.grid.ny;
    const ReconstructedFace r = reconstruct(f, slopes(f, p.theta), p.rho_floor);
    FaceFluxes out;
    out.guarded = r.guarded_cells;
    if (with_flux) {
        out.hx.resize(4, (nx + 1) * ny);
        out.hy.resize(4, nx * (ny + 1));
    }
    out.amax_row.assign(ny, 0.0);
    out.bmax_row.assign(ny + 1, 0.0);
    const int threads = worker_count(p.threads);
    parallel_rows(0, ny, threads, [&](int j) {
        double amax = 0;
        for (int i = 0; i <= nx; ++i) {
            const ConservedState ul = r.E(i - 1, j), ur = r.W(i, j);
            const Speeds a = local_speeds_x(ur, ul, p.rho_floor);
            amax = std::max({amax, a.plus, -a.minus});
            if (with_flux)
                out.hx.col(i + j * (nx + 1)) =
                    flux_x(ul, ur, {r.NW(i, j), r.NE(i - 1, j), r.SW(i, j), r.SE(i - 1, j)}, a, p.rho_floor,
                           p.eps_speed);
        }
        out.amax_row[j] = amax;
    });
    parallel_rows(0, ny + 1, threads, [&](int j) {
        double bmax = 0;
        for (int i = 0; i < nx; ++i) {
            const ConservedState ul = r.N(i, j - 1), ur = r.S(i, j);
            const Speeds b = local_speeds_y(ur, ul, p.rho_floor);
            bmax = std::max({bmax, b.plus, -b.minus});
            if (with_flux)
                out.hy.col(i + j * nx) =
                    flux_y(ul, ur, {r.SW(i, j), r.NW(i, j - 1), r.SE(i, j), r.NE(i, j - 1)}, b, p.rho_floor,
                           p.eps_speed);
        }
        out.bmax_row[j] = bmax;
    });
    return out;
}

double ordered_max(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
}

} // namespace

RhsResult rhs(const GridField& f, const SchemeParams& p) {
    const int nx = f.grid.nx, ny = f.grid.ny;
    const double dx = f.grid.dx(), dy = f.grid.dy();
    FaceFluxes h = face_fluxes(f, p, true);
    RhsResult out;
    out.dUdt = Eigen::Array<double, 4, Eigen::Dynamic>::Zero(4, f.U.cols());
    parallel_rows(0, ny, worker_count(p.threads), [&](int j) {
        for (int i = 0; i < nx; ++i)
            out.dUdt.col(f.idx(i, j)) = -(h.hx.col(i + 1 + j * (nx + 1)) - h.hx.col(i + j * (nx + 1))) / dx -
                                        (h.hy.col(i + (j + 1) * nx) - h.hy.col(i + j * nx)) / dy;
    });
    Eigen::Array4d ox = Eigen::Array4d::Zero(), oy = Eigen::Array4d::Zero();
    for (int j = 0; j < ny; ++j) ox += h.hx.col(nx + j * (nx + 1)) - h.hx.col(j * (nx + 1));
    for (int i = 0; i < nx; ++i) oy += h.hy.col(i + ny * nx) - h.hy.col(i);
    out.outflow = ox * dy + oy * dx;
    out.a_max = ordered_max(h.amax_row);
    out.b_max = ordered_max(h.bmax_row);
    out.guarded_cells = h.guarded;
    return out;
}

namespace {

double dt_from_speeds(double amax, double bmax, double dx, double dy, double cfl, double dt_cap) {
    double dt = dt_cap;
    bool any = false;
    if (amax > 0) {
        dt = dx / amax;
        any = true;
    }
    if (bmax > 0) {
        dt = any ? std::min(dt, dy / bmax) : dy / bmax;
        any = true;
    }
    return any ? cfl * dt : dt_cap;
}

} // namespace

double compute_dt(const GridField& f, const SchemeParams& p, double dt_cap) {
    const FaceFluxes h = face_fluxes(f, p, false);
    return dt_from_speeds(ordered_max(h.amax_row), ordered_max(h.bmax_row), f.grid.dx(), f.grid.dy(), p.cfl,
                          dt_cap);
}

void StepStats::add(const StepStats& o) {
    outflow += o.outflow;
    clipped += o.clipped;
    clip_count += o.clip_count;
    max_negative = std::max(max_negative, o.max_negative);
    max_rho = std::max(max_rho, o.max_rho);
    guarded_cells += o.guarded_cells;
}

namespace {

void clip(GridField& f, double weight, StepStats& st) {
    const double area = f.grid.dx() * f.grid.dy();
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            auto u = f.cell(i, j);
            if (!u.allFinite())
                throw Error("non-finite state in cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            st.max_rho = std::max(st.max_rho, u(0));
            if (u(0) < 0) {
                ++st.clip_count;
                st.max_negative = std::max(st.max_negative, -u(0));
                st.clipped += weight * area * u;
                u.setZero();
            }
        }
}

} // namespace

GridField step(const GridField& f, double dt, const SchemeParams& p, StepStats* stats) {
    StepStats st;
    GridField u0 = f;
    fill_ghosts(u0, p.boundary);
    const RhsResult r0 = rhs(u0, p);
    GridField u1 = u0;
    u1.U += dt * r0.dUdt;
    clip(u1, 0.5, st);
    fill_ghosts(u1, p.boundary);
    const RhsResult r1 = rhs(u1, p);
    GridField u2 = u0;
    u2.U = 0.5 * u0.U + 0.5 * (u1.U + dt * r1.dUdt);
    clip(u2, 1.0, st);
    fill_ghosts(u2, p.boundary);
    u2.time = f.time + dt;
    st.outflow = dt / 2 * (r0.outflow + r1.outflow);
    st.guarded_cells = r0.guarded_cells + r1.guarded_cells;
    if (stats) *stats = st;
    return u2;
}

RunResult run(const GridField& initial, const SchemeParams& p, double t_end, std::vector<double> snapshot_times) {
    if (!(t_end >= 0)) throw Error("t_end must be >= 0");
    if (!(p.cfl > 0 && p.cfl < 1)) throw Error("cfl must lie in (0, 1)");
    if (!(p.theta >= 1 && p.theta <= 2)) throw Error("theta must lie in [1, 2]");
    std::vector<double> times;
    for (double t : snapshot_times) {
        if (t < 0 || t > t_end) throw Error("snapshot time outside [0, t_end]");
        times.push_back(t);
    }
    times.push_back(t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    RunResult out;
    GridField f = initial;
    fill_ghosts(f, p.boundary);
    out.initial_totals = totals(f);
    for (double target : times) {
        while (f.time < target) {
            const double remaining = target - f.time;
            double dt = compute_dt(f, p, remaining);
            if (dt < 1e-12 * t_end)
                throw Error("time step underflow: dt = " + std::to_string(dt) + " at t = " + std::to_string(f.time));
            const bool last = dt >= remaining;
            if (last) dt = remaining;
            StepStats st;
            f = step(f, dt, p, &st);
            if (last) f.time = target;
            out.stats.add(st);
            ++out.steps;
        }
        out.snapshots.push_back(f);
    }
    return out;
}

RunResult run(const RiemannData& d, const Grid2D& grid, const SchemeParams& p, double t_end,
              std::vector<double> snapshot_times, bool with_energy) {
    return run(initial_field(d, grid, with_energy), p, t_end, std::move(snapshot_times));
}

} // namespace presshock
