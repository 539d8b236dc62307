#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "datasets.hpp"
#include "presshock/scheme.hpp"

using namespace presshock;

namespace {

Grid2D grid(int nx, int ny, double lo = -0.5, double hi = 0.5) {
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.xmin = g.ymin = lo;
    g.xmax = g.ymax = hi;
    return g;
}

GridField field(const Grid2D& g, const std::function<PrimitiveState(double, double)>& fn,
                Boundary b = Boundary::ZeroGradient) {
    GridField f = make_field(g, false);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.cell(i, j) = to_conserved(fn(g.xc(i), g.yc(j)), false);
    fill_ghosts(f, b);
    return f;
}

ConservedState cs(double r, double mx, double my) {
    ConservedState c;
    c << r, mx, my, 0;
    return c;
}

SchemeParams params(int threads = 1) {
    SchemeParams p;
    p.threads = threads;
    return p;
}

double max_abs_diff(const GridField& a, const GridField& b) {
    double m = 0;
    for (int j = 0; j < a.grid.ny; ++j)
        for (int i = 0; i < a.grid.nx; ++i) m = std::max(m, (a.cell(i, j) - b.cell(i, j)).abs().maxCoeff());
    return m;
}

} // namespace

TEST_SUITE("scheme") {

TEST_CASE("minmod") {
    CHECK(minmod({1.0, 2.0, 3.0}) == 1);
    CHECK(minmod({-1.0, -2.0, -3.0}) == -1);
    CHECK(minmod({1.0, -2.0, 3.0}) == 0);
    CHECK(minmod({0.0, 2.0}) == 0);
}

TEST_CASE("slopes") {
    const Grid2D g = grid(10, 6);
    GridField lin = make_field(g, false);
    for (int j = -2; j < g.ny + 2; ++j)
        for (int i = -2; i < g.nx + 2; ++i) lin.cell(i, j) = cs(g.xc(i), 0, 0);
    for (double theta : {1.0, 1.3, 2.0}) {
        const Slopes s = slopes(lin, theta);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                CHECK(s.ux(0, lin.idx(i, j)) == doctest::Approx(1).epsilon(1e-12));
                CHECK(s.uy(0, lin.idx(i, j)) == 0);
            }
    }
    const GridField c = field(g, [](double, double) { return PrimitiveState{0.4, 1, -2, 0}; });
    const Slopes sc = slopes(c, 1.3);
    CHECK(sc.ux.isZero(0));
    CHECK(sc.uy.isZero(0));
    const GridField bump = field(g, [](double x, double) { return PrimitiveState{std::abs(x) < 0.06 ? 2.0 : 1.0, 0, 0, 0}; });
    const Slopes sb = slopes(bump, 1.3);
    CHECK(sb.ux(0, bump.idx(5, 2)) == 0);
    CHECK(sb.ux(0, bump.idx(4, 2)) == 0);
}

TEST_CASE("reconstruct") {
    const Grid2D g = grid(100, 4, 0, 1);
    GridField f = field(g, [](double, double) { return PrimitiveState{5, 0, 0, 0}; });
    Slopes s = slopes(f, 1.3);
    s.ux.row(0).setConstant(1);
    const ReconstructedFace r = reconstruct(f, s);
    CHECK(r.E(3, 1)(0) == doctest::Approx(5.005).epsilon(1e-15));
    CHECK(r.W(3, 1)(0) == doctest::Approx(4.995).epsilon(1e-15));
    CHECK(r.N(3, 1)(0) == 5);
    CHECK(r.NE(3, 1)(0) == doctest::Approx(5.005).epsilon(1e-15));

    const ReconstructedFace z = reconstruct(f, slopes(f, 1.3));
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) CHECK((z.point(7, 2, sx, sy) - z.avg(7, 2)).isZero(0));

    // A density slope that would make U^E slightly negative is removed.
    GridField t = field(g, [](double, double) { return PrimitiveState{1e-6, 0, 0, 0}; });
    Slopes st = slopes(t, 1.3);
    st.ux(0, t.idx(10, 1)) = -(2e-6 + 2e-4) / g.dx();
    const ReconstructedFace rt = reconstruct(t, st);
    CHECK(rt.s.ux(0, t.idx(10, 1)) == 0);
    CHECK(rt.E(10, 1)(0) == 1e-6);
    CHECK(rt.guarded_cells >= 1);
}

TEST_CASE("local speeds") {
    const Speeds a = local_speeds_x(cs(1, 1, 0), cs(1, 1, 0), 1e-10);
    CHECK(a.plus == 1);
    CHECK(a.minus == 0);
    const Speeds b = local_speeds_x(cs(1, 2, 0), cs(1, -1, 0), 1e-10);
    CHECK(b.plus == 2);
    CHECK(b.minus == -1);
    const Speeds c = local_speeds_y(cs(0, 0, 0), cs(0, 0, 0), 1e-10);
    CHECK(c.plus == 0);
    CHECK(c.minus == 0);
}

TEST_CASE("flux") {
    const ConservedState u = cs(1, 1, 0);
    const XCorners same{u, u, u, u};
    const ConservedState h = flux_x(u, u, same, local_speeds_x(u, u, 1e-10), 1e-10);
    CHECK((h - cs(1, 1, 0)).abs().maxCoeff() == 0);

    const ConservedState z = cs(0, 0, 0);
    CHECK(flux_x(z, z, {z, z, z, z}, local_speeds_x(z, z, 1e-10), 1e-10).isZero(0));

    // Colliding streams: a = (1, -1), U_int = (2, 0, 0), q = (0, -1/2, 0).
    const ConservedState l = cs(1, 1, 0), r = cs(1, -1, 0);
    const Speeds s = local_speeds_x(r, l, 1e-10);
    CHECK(s.plus == 1);
    CHECK(s.minus == -1);
    const ConservedState hc = flux_x(l, r, {r, l, r, l}, s, 1e-10);
    CHECK(hc(0) == 0);
    CHECK(hc(1) == 1.5);
    CHECK(hc(2) == 0);
    // Independent evaluation of the same combination.
    const double ap = 1, am = -1, span = ap - am;
    const double fl = 1, fr = 1;  // x-momentum fluxes u * mx
    const double mid = (ap * -1 - am * 1 - (fr - fl)) / span;
    const double q = minmod({(-1 - mid) / span, (mid - 1) / span});
    CHECK(hc(1) == (ap * fl - am * fr) / span + ap * am * ((-1 - 1) / span - q));

    // Consistency on random single states.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-2, 2), R(0.01, 3);
    for (int k = 0; k < 200; ++k) {
        const ConservedState w = to_conserved(PrimitiveState{R(rng), U(rng), U(rng), 0}, false);
        const ConservedState hx = flux_x(w, w, {w, w, w, w}, local_speeds_x(w, w, 1e-10), 1e-10);
        const ConservedState hy = flux_y(w, w, {w, w, w, w}, local_speeds_y(w, w, 1e-10), 1e-10);
        CHECK((hx - flux_exact_x(w, 1e-10)).abs().maxCoeff() <= 1e-14);
        CHECK((hy - flux_exact_y(w, 1e-10)).abs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("rhs") {
    const Grid2D g = grid(24, 16);
    const GridField c = field(g, [](double, double) { return PrimitiveState{0.7, 0.3, -0.2, 0}; });
    CHECK(rhs(c, params()).dUdt.isZero(0));

    const GridField y = field(g, [](double x, double) {
        return x < 0 ? PrimitiveState{1, 1, 0.2, 0} : PrimitiveState{0.5, -0.4, -0.3, 0};
    });
    const RhsResult ry = rhs(y, params());
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) CHECK((ry.dUdt.col(y.idx(i, j)) == ry.dUdt.col(y.idx(i, 0))).all());

    // Nonzero only next to the interface between i = 11 and i = 12.
    for (int i = 0; i < g.nx; ++i) {
        const bool near = i >= 10 && i <= 13;
        if (!near) CHECK(ry.dUdt.col(y.idx(i, 3)).isZero(0));
    }
    CHECK_FALSE(ry.dUdt.col(y.idx(11, 3)).isZero(0));

    // The one-dimensional operator applied to a row equals the 2-D result.
    Grid2D g1 = g;
    g1.ny = 4;
    const GridField y1 = field(g1, [](double x, double) {
        return x < 0 ? PrimitiveState{1, 1, 0.2, 0} : PrimitiveState{0.5, -0.4, -0.3, 0};
    });
    const RhsResult r1 = rhs(y1, params());
    for (int i = 0; i < g.nx; ++i) CHECK((r1.dUdt.col(y1.idx(i, 0)) == ry.dUdt.col(y.idx(i, 5))).all());
}

TEST_CASE("compute_dt") {
    const Grid2D g = grid(200, 200);
    const GridField f = field(g, [](double, double) { return PrimitiveState{1, 1, 0, 0}; });
    CHECK(compute_dt(f, params(), 1.0) == doctest::Approx(5e-4).epsilon(1e-14));
    const GridField v = field(g, [](double, double) { return PrimitiveState{0, 0, 0, 0}; });
    CHECK(compute_dt(v, params(), 0.125) == 0.125);
    const GridField a = field(grid(30, 20), [](double x, double y) {
        return PrimitiveState{1 + x * x, 0.3 + y, -0.2 + x, 0};
    });
    const GridField b = field(grid(30, 20), [](double x, double y) {
        return PrimitiveState{1 + x * x, 2 * (0.3 + y), 2 * (-0.2 + x), 0};
    });
    CHECK(compute_dt(b, params(), 1.0) == doctest::Approx(compute_dt(a, params(), 1.0) / 2).epsilon(1e-14));
}

TEST_CASE("step") {
    const Grid2D g = grid(20, 20);
    const GridField c = field(g, [](double, double) { return PrimitiveState{0.7, 0.3, -0.2, 0}; });
    GridField s = c;
    for (int k = 0; k < 10; ++k) s = step(s, 1e-3, params());
    CHECK(max_abs_diff(s, c) <= 1e-15);

    // Centre of mass of an advected bump.
    const Grid2D ga = grid(100, 8);
    GridField a = field(ga, [](double x, double) {
        return PrimitiveState{1 + std::exp(-200 * x * x), 1, 0, 0};
    });
    auto com = [&](const GridField& f) {
        double m = 0, mx = 0;
        for (int j = 0; j < ga.ny; ++j)
            for (int i = 0; i < ga.nx; ++i) {
                const double w = f.cell(i, j)(0) - 1;
                m += w;
                mx += w * ga.xc(i);
            }
        return mx / m;
    };
    const double x0 = com(a);
    const double dt = compute_dt(a, params(), 1.0);
    for (int k = 0; k < 10; ++k) a = step(a, dt, params());
    CHECK(std::abs(com(a) - x0 - 10 * dt) <= ga.dx() * ga.dx());

    // Conservation audit for colliding streams.
    const Grid2D gc = grid(40, 6);
    const GridField cc = field(gc, [](double x, double) {
        return x < 0 ? PrimitiveState{1, 1, 0, 0} : PrimitiveState{1, -1, 0, 0};
    });
    StepStats st;
    const GridField n = step(cc, compute_dt(cc, params(), 1.0), params(), &st);
    const Eigen::Array4d bal = totals(n) + st.outflow + st.clipped - totals(cc);
    CHECK(std::abs(bal(0)) <= 1e-13 * totals(cc)(0));
    CHECK(std::abs(bal(1)) <= 1e-13 * totals(cc)(0));
}

TEST_CASE("run") {
    const Grid2D g = grid(24, 24);
    const RiemannData d = testdata::published(1);
    const RunResult z = run(d, g, params(), 0.0, {});
    REQUIRE(z.snapshots.size() == 1);
    CHECK(max_abs_diff(z.snapshots[0], initial_field(d, g, false)) == 0);
    CHECK(z.steps == 0);

    RiemannData u;
    u.s1 = u.s2 = u.s3 = {0.4, 0.2, -0.6, 0};
    const RunResult r = run(u, g, params(), 0.1, {});
    CHECK(max_abs_diff(r.snapshots.back(), initial_field(u, g, false)) == 0);

    const RunResult m = run(d, g, params(), 0.1, {0.05});
    REQUIRE(m.snapshots.size() == 2);
    CHECK(m.snapshots[0].time == 0.05);
    CHECK(m.snapshots[1].time == 0.1);
    CHECK_THROWS_AS(run(d, g, params(), 0.1, {0.2}), Error);
}

TEST_CASE("initial field layout") {
    const Grid2D g = grid(10, 10);
    const RiemannData d = testdata::published(3);
    const GridField f = initial_field(d, g, false);
    CHECK(f.cell(7, 7)(0) == d.s1.rho);
    CHECK(f.cell(2, 7)(0) == d.s2.rho);
    CHECK(f.cell(2, 2)(0) == d.s3.rho);
    CHECK(f.cell(7, 2)(0) == d.s3.rho);
}

TEST_CASE("conservation, symmetry and positivity on a short run") {
    const Grid2D g = grid(40, 40);
    // Symmetric under (x, u) <-> (y, v).
    const PrimitiveState A{0.5, 0.3, 0.3, 0}, B{1.0, -0.4, -0.4, 0}, C{0.2, 0.6, -0.1, 0};
    const PrimitiveState Ct{0.2, -0.1, 0.6, 0};
    GridField f = field(g, [&](double x, double y) {
        if (x > 0 && y > 0) return A;
        if (x < 0 && y < 0) return B;
        return x > 0 ? C : Ct;
    });
    const RunResult r = run(f, params(), 0.15, {});
    const GridField& e = r.snapshots.back();
    double asym = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto a = e.cell(i, j), b = e.cell(j, i);
            asym = std::max({asym, std::abs(a(0) - b(0)), std::abs(a(1) - b(2)), std::abs(a(2) - b(1))});
        }
    CHECK(asym <= 1e-12);
    const Eigen::Array4d bal = totals(e) + r.stats.outflow + r.stats.clipped - r.initial_totals;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(bal(k)) <= 1e-10 * r.initial_totals(0));
    CHECK(r.stats.max_negative <= 1e-12 * r.stats.max_rho);
}

TEST_CASE("results do not depend on the thread count") {
    const Grid2D g = grid(48, 40);
    const RiemannData d = testdata::published(1);
    const RunResult a = run(d, g, params(1), 0.05, {});
    const RunResult b = run(d, g, params(3), 0.05, {});
    const RunResult c = run(d, g, params(7), 0.05, {});
    CHECK((a.snapshots.back().U == b.snapshots.back().U).all());
    CHECK((a.snapshots.back().U == c.snapshots.back().U).all());
    CHECK(a.steps == b.steps);
}

}
