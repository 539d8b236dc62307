#include <algorithm>
#include <cmath>
#include <cstdio>

#include "presshock/riemann.hpp"
#include "sampling.hpp"

namespace presshock {

namespace {

constexpr double kCrossLo = -40.0;
constexpr double kScanStep = 1e-3;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

Weighted weights(const DeltaShockParams& p) { return {p.m, p.n, p.udelta}; }

bool in_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c, double tol) {
    const double d1 = bracket3(a, b, p), d2 = bracket3(b, c, p), d3 = bracket3(c, a, p);
    const bool neg = d1 < -tol || d2 < -tol || d3 < -tol;
    const bool pos = d1 > tol || d2 > tol || d3 > tol;
    return !(neg && pos);
}

void require_case(const RiemannData& d, CaseKind c, bool force) {
    if (force) return;
    const CaseId id = classify(d);
    if (id.kind != c)
        throw Error(case_name(c) + " construction requires " + case_name(c) + " data, classifier gives " +
                    case_name(id.kind) + (id.reason.empty() ? "" : " (" + id.reason + ")"));
}

} // namespace

double case1_distance(const Case1Point& a, const Case1Point& b) {
    return std::max({std::abs(a.eta - b.eta), std::abs(a.m - b.m), std::abs(a.n - b.n),
                     std::abs(a.u.x() - b.u.x()), std::abs(a.u.y() - b.u.y())});
}

Case1Map case1_map(const RiemannData& d, const Case1Point& x) {
    const DeltaShockParams d12 = delta12(d.s1, d.s2);
    const DeltaShockParams d23 = delta23(d.s2, d.s3);
    const DeltaShockParams d31 = delta31(d.s3, d.s1);
    Case1Map map;
    map.xi0[0] = Point2(d12.position, x.eta);
    GrhState g = merge(weights(d12), {x.m, x.n, x.u}, map.xi0[0]);
    const Axis axes[3] = {Axis::Eta, Axis::Eta, Axis::Xi};
    const double targets[3] = {d23.position, d31.position, d12.position};
    for (int k = 0; k < 3; ++k) {
        const PrimitiveState& st = d.state(map.nonvac[k]);
        const Side side = vacuum_curve_side(g, st);
        auto f = [&](double s) { return vacuum_curve(g, st, side, s).xi; };
        const double s = find_crossing(f, axes[k], targets[k], kCrossLo, kScanStep);
        const GrhState h = vacuum_curve(g, st, side, s);
        map.start[k] = g;
        map.sbar_end[k] = s;
        map.xi0[k + 1] = h.xi;
        if (k == 0) {
            if (!(h.xi.x() < d23.udelta.x()))
                throw Error("Case1: delta2 reaches eta = v23 at xi = " + num(h.xi.x()) + ", outside delta23");
            g = merge(weighted_of(h), weights(d23), h.xi);
        } else if (k == 1) {
            if (!(h.xi.x() > d31.udelta.x()))
                throw Error("Case1: delta3 reaches eta = v31 at xi = " + num(h.xi.x()) + ", outside delta31");
            g = merge(weighted_of(h), weights(d31), h.xi);
        } else {
            map.out = {h.xi.y(), h.m, h.n, h.udelta};
        }
    }
    return map;
}

Case1Result fixed_point_case1(const RiemannData& d, double tol_fp, int max_iter,
                              const std::optional<Case1Point>& start, int samples) {
    require_case(d, CaseKind::Case1, false);
    const DeltaShockParams d12 = delta12(d.s1, d.s2);
    const Point2 X1 = d.s1.velocity(), X3 = d.s3.velocity();
    Case1Result r;
    const double t = (d12.position - X1.x()) / (X3.x() - X1.x());
    r.A = Point2(d12.position, X1.y() + t * (X3.y() - X1.y()));
    r.D = Point2(d12.position, X1.y());

    Case1Point x;
    if (start) {
        x = *start;
    } else {
        x.eta = (r.A.y() + r.D.y()) / 2;
        x.u = (r.A + X1 + r.D) / 3;
    }
    const double tol_region = 1e-12;
    for (int it = 1; it <= max_iter; ++it) {
        Case1Map map = case1_map(d, x);
        const Case1Point& y = map.out;
        if (y.eta < r.D.y() - tol_region || y.eta > r.A.y() + tol_region)
            throw Error("Case1: iterate Xi0^4 = (" + num(r.D.x()) + ", " + num(y.eta) + ") left segment AD");
        if (y.m > 0 && !in_triangle(y.u, r.A, X1, r.D, tol_region))
            throw Error("Case1: iterate velocity left triangle A Xi1 D");
        const double res = case1_distance(x, y);
        r.iterations = it;
        r.residual = res;
        r.map = map;
        x = y;
        if (res <= tol_fp) {
            r.fixed = x;
            for (int k = 0; k < 3; ++k) {
                const PrimitiveState& st = d.state(map.nonvac[k]);
                const GrhState g0 = map.start[k];
                const Side side = vacuum_curve_side(g0, st);
                r.curves[k] = detail::sample_uniform(
                    [&](double s) { return vacuum_curve(g0, st, side, s); }, map.sbar_end[k], samples);
                for (size_t i = r.vacuum_polygon.empty() ? 0 : 1; i < r.curves[k].size(); ++i)
                    r.vacuum_polygon.push_back(r.curves[k][i].xi);
            }
            return r;
        }
    }
    throw Error("Case1: fixed-point iteration did not converge in " + std::to_string(max_iter) +
                " iterations, residual " + num(r.residual));
}

Trajectory mach_delta13(const RiemannData& d, CaseKind c, double step, double sbar_min, Point2* A_out) {
    const DeltaShockParams d23 = delta23(d.s2, d.s3);
    GrhState seed;
    Point2 A;
    if (c == CaseKind::Case2) {
        const DeltaShockParams d12 = delta12(d.s1, d.s2);
        A = Point2(d12.position, d23.position);
        seed = merge(weights(d12), weights(d23), A);
    } else if (c == CaseKind::Case6) {
        if (d.s1.u != d.s2.u) throw Error("Case6: requires u1 = u2 (contact J12)");
        A = Point2(d.s1.u, d23.position);
        seed = merge(weights(d23), {}, A);
    } else {
        throw Error("Mach construction applies to Case2 and Case6 only");
    }
    if (A_out) *A_out = A;
    const SidePair sides{d.s1, d.s3};
    if (!entropy_ok(sides, seed.udelta, seed.xi))
        throw Error(case_name(c) + ": entropy condition fails for delta13 at A = (" + num(A.x()) + ", " +
                    num(A.y()) + "), [U1,U,A] = " + num(bracket3(d.s1.velocity(), seed.udelta, A)) +
                    ", [U3,U,A] = " + num(bracket3(d.s3.velocity(), seed.udelta, A)));
    return integrate(seed, sides, {EventSpec::entropy()}, sbar_min, step);
}

namespace {

struct Box {
    double x0, x1, y0, y1;
    bool overlaps(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
};

Box box_of(const std::vector<Point2>& p, size_t i0, size_t i1) {
    Box b{p[i0].x(), p[i0].x(), p[i0].y(), p[i0].y()};
    for (size_t i = i0 + 1; i <= i1; ++i) {
        b.x0 = std::min(b.x0, p[i].x());
        b.x1 = std::max(b.x1, p[i].x());
        b.y0 = std::min(b.y0, p[i].y());
        b.y1 = std::max(b.y1, p[i].y());
    }
    return b;
}

struct Polyline {
    std::vector<Point2> p;
    std::vector<Box> chunk;
    static constexpr size_t kChunk = 32;

    void index() {
        chunk.clear();
        for (size_t i = 0; i + 1 < p.size(); i += kChunk) chunk.push_back(box_of(p, i, std::min(i + kChunk, p.size() - 1)));
    }
};

bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = bracket3(c, d, a), d2 = bracket3(c, d, b);
    const double d3 = bracket3(a, b, c), d4 = bracket3(a, b, d);
    return ((d1 <= 0 && d2 >= 0) || (d1 >= 0 && d2 <= 0)) && ((d3 <= 0 && d4 >= 0) || (d3 >= 0 && d4 <= 0)) &&
           !(d1 == 0 && d2 == 0);
}

struct Hit {
    size_t seg_curve;  // index into curve samples
    size_t seg_poly;   // index into polyline
};

// First crossing along `curve` (in sample order) with `poly`.
std::optional<Hit> first_crossing(const Polyline& curve, const Polyline& poly) {
    for (size_t ci = 0; ci < curve.chunk.size(); ++ci) {
        std::optional<Hit> best;
        for (size_t pi = 0; pi < poly.chunk.size(); ++pi) {
            if (!curve.chunk[ci].overlaps(poly.chunk[pi])) continue;
            const size_t c0 = ci * Polyline::kChunk, c1 = std::min(c0 + Polyline::kChunk, curve.p.size() - 1);
            const size_t p0 = pi * Polyline::kChunk, p1 = std::min(p0 + Polyline::kChunk, poly.p.size() - 1);
            for (size_t i = c0; i < c1; ++i)
                for (size_t k = p0; k < p1; ++k)
                    if (segments_cross(curve.p[i], curve.p[i + 1], poly.p[k], poly.p[k + 1]))
                        if (!best || i < best->seg_curve) best = Hit{i, k};
        }
        if (best) return best;
    }
    return std::nullopt;
}

} // namespace

MachEval mach_map(const RiemannData& d, const Trajectory& delta13, double sbar_b,
                  const std::optional<Weighted>& incoming) {
    MachEval ev;
    ev.sbar_b = sbar_b;
    const DeltaShockParams d31 = delta31(d.s3, d.s1);
    const GrhState gb = delta13.at(sbar_b);

    Polyline poly;
    for (const auto& g : delta13.samples) poly.p.push_back(g.xi);
    poly.index();

    Weighted inc = incoming.value_or(Weighted{});
    const double tau_lo = -30.0, tau_step = 0.005;
    for (int it = 1; it <= 100; ++it) {
        ev.inner_iterations = it;
        try {
            const GrhState seed = merge(weighted_of(gb), inc, gb.xi);
            const Side side3 = vacuum_curve_side(seed, d.s3);
            auto f3 = [&](double s) { return vacuum_curve(seed, d.s3, side3, s).xi; };
            const double sc = find_crossing(f3, Axis::Eta, d31.position, kCrossLo, kScanStep);
            const GrhState gc = vacuum_curve(seed, d.s3, side3, sc);
            if (!(gc.xi.x() > d31.udelta.x())) {
                ev.ok = false;
                ev.why = "delta3^B meets eta = v31 outside delta31";
                return ev;
            }
            const GrhState seed_c = merge(weighted_of(gc), weights(d31), gc.xi);
            const Side side1 = vacuum_curve_side(seed_c, d.s1);
            auto f1 = [&](double s) { return vacuum_curve(seed_c, d.s1, side1, s); };

            Polyline curve;
            const int nc = static_cast<int>(-tau_lo / tau_step);
            std::vector<double> taus;
            for (int i = 0; i <= nc; ++i) {
                taus.push_back(-i * tau_step);
                curve.p.push_back(f1(taus.back()).xi);
            }
            curve.index();
            const auto hit = first_crossing(curve, poly);
            if (!hit) {
                ev.ok = false;
                ev.why = "delta1^C does not meet delta13^A";
                return ev;
            }
            size_t k = hit->seg_poly;
            double lo = taus[hit->seg_curve + 1], hi = taus[hit->seg_curve];
            double tau = 0, mu = 0;
            for (int attempt = 0; attempt < 6; ++attempt) {
                const Point2 P0 = poly.p[k], P1 = poly.p[k + 1];
                auto side_of = [&](double t) { return bracket3(P0, P1, f1(t).xi); };
                double a = lo, b = hi, ga = side_of(a), gb2 = side_of(b);
                if ((ga < 0) == (gb2 < 0) && ga != 0 && gb2 != 0) break;
                while (true) {
                    const double c = (a + b) / 2;
                    if (c <= a || c >= b) break;
                    const double gcv = side_of(c);
                    if (gcv == 0) {
                        a = b = c;
                        break;
                    }
                    if ((gcv < 0) == (ga < 0)) {
                        a = c;
                        ga = gcv;
                    } else {
                        b = c;
                    }
                }
                tau = (a + b) / 2;
                const Point2 D = f1(tau).xi;
                const Point2 t = P1 - P0;
                mu = (D - P0).dot(t) / t.squaredNorm();
                if (mu < 0 && k > 0) --k;
                else if (mu > 1 && k + 2 < poly.p.size()) ++k;
                else break;
            }
            mu = std::clamp(mu, 0.0, 1.0);
            const double s_k = delta13.samples[k].sbar, s_k1 = delta13.samples[k + 1].sbar;
            const GrhState gd = f1(tau);
            const Weighted next = weighted_of(gd);
            const double change = std::max({std::abs(next.m - inc.m), std::abs(next.n - inc.n),
                                            (next.u - inc.u).lpNorm<Eigen::Infinity>() * next.m});
            ev.ok = true;
            ev.at_b = seed;
            ev.sbar_c = sc;
            ev.at_c = seed_c;
            ev.at_d = gd;
            ev.tau_d = tau;
            ev.sbar_d = s_k + mu * (s_k1 - s_k);
            inc = next;
            if (change <= 1e-15 * (1 + next.m + next.n)) break;
        } catch (const Error& e) {
            ev.ok = false;
            ev.why = e.what();
            return ev;
        }
    }
    return ev;
}

MachResult fixed_point_mach(const RiemannData& d, CaseKind c, double tol_fp, int max_iter,
                            const SkeletonOptions& opts) {
    require_case(d, c, opts.force);
    MachResult r;
    r.delta13 = mach_delta13(d, c, opts.grh_step, opts.sbar_min, &r.A);
    const double s_end = r.delta13.event.sbar_at;
    const std::string name = case_name(c);

    auto eval = [&](double sb, const std::optional<Weighted>& warm) { return mach_map(d, r.delta13, sb, warm); };

    const int nscan = 24;
    std::vector<MachEval> scan;
    std::optional<Weighted> warm;
    for (int i = 1; i <= nscan; ++i) {
        MachEval e = eval(s_end * i / (nscan + 1), warm);
        if (e.ok) warm = weighted_of(e.at_d);
        scan.push_back(e);
    }
    int bracket = -1;
    for (int i = 0; i + 1 < nscan; ++i) {
        if (!scan[i].ok || !scan[i + 1].ok) continue;
        const double fa = scan[i].sbar_d - scan[i].sbar_b, fb = scan[i + 1].sbar_d - scan[i + 1].sbar_b;
        if (fa == 0 || fb == 0 || (fa < 0) != (fb < 0)) {
            bracket = i;
            break;
        }
    }
    if (bracket < 0) {
        std::string detail;
        int valid = 0;
        for (const auto& e : scan)
            if (e.ok) ++valid;
        detail = std::to_string(valid) + " of " + std::to_string(nscan) + " scan points admissible";
        for (const auto& e : scan)
            if (!e.ok) {
                detail += "; first failure: " + e.why;
                break;
            }
        throw Error(name + ": no admissible B bracket on delta13^A for sbar in [" + num(s_end) + ", 0] (" +
                    detail + ")");
    }

    MachEval a = scan[bracket], b = scan[bracket + 1];
    double fa = a.sbar_d - a.sbar_b, fb = b.sbar_d - b.sbar_b;
    MachEval best = std::abs(fa) < std::abs(fb) ? a : b;
    double fbest = std::min(std::abs(fa), std::abs(fb));
    int it = 0;
    while (fbest > tol_fp) {
        if (++it > max_iter)
            throw Error(name + ": B iteration did not converge, residual " + num(fbest));
        double sc = b.sbar_b - fb * (b.sbar_b - a.sbar_b) / (fb - fa);
        if (!(sc > std::min(a.sbar_b, b.sbar_b) && sc < std::max(a.sbar_b, b.sbar_b)))
            sc = (a.sbar_b + b.sbar_b) / 2;
        MachEval e = eval(sc, weighted_of(best.at_d));
        if (!e.ok) e = eval((a.sbar_b + b.sbar_b) / 2, weighted_of(best.at_d));
        if (!e.ok) throw Error(name + ": map failed inside the B bracket: " + e.why);
        const double fc = e.sbar_d - e.sbar_b;
        if (std::abs(fc) < fbest) {
            fbest = std::abs(fc);
            best = e;
        }
        if ((fc < 0) != (fb < 0)) {
            a = b;
            fa = fb;
        } else {
            fa /= 2;
        }
        b = e;
        fb = fc;
        if (std::abs(b.sbar_b - a.sbar_b) < 1e-15) break;
    }
    r.eval = best;
    r.iterations = it;
    r.residual = std::abs(best.sbar_d - best.sbar_b);
    if (r.residual > tol_fp)
        throw Error(name + ": B bracket collapsed with residual " + num(r.residual));

    const GrhState seed_b = best.at_b, seed_c = best.at_c;
    const Side side3 = vacuum_curve_side(seed_b, d.s3);
    const Side side1 = vacuum_curve_side(seed_c, d.s1);
    r.curve_b = detail::sample_uniform([&](double s) { return vacuum_curve(seed_b, d.s3, side3, s); }, best.sbar_c,
                                       opts.samples);
    r.curve_c = detail::sample_uniform([&](double s) { return vacuum_curve(seed_c, d.s1, side1, s); }, best.tau_d,
                                       opts.samples);
    r.B = seed_b.xi;
    r.C = seed_c.xi;
    r.D = best.at_d.xi;
    for (const auto& g : r.curve_b) r.vacuum_polygon.push_back(g.xi);
    for (size_t i = 1; i < r.curve_c.size(); ++i) r.vacuum_polygon.push_back(r.curve_c[i].xi);
    return r;
}

} // namespace presshock
