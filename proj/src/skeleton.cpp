#include <cmath>
#include <cstdio>
#include <utility>

#include "presshock/riemann.hpp"
#include "sampling.hpp"

namespace presshock {

using detail::contact_segment;
using detail::curve_segment;
using detail::delta_segment;
using detail::inf;
using detail::sample_uniform;

const char* segment_kind_name(SegmentKind k) {
    switch (k) {
    case SegmentKind::Contact: return "contact";
    case SegmentKind::DeltaTwoState: return "delta-two-state";
    case SegmentKind::DeltaVacuumBoundary: return "delta-vacuum-boundary";
    }
    return "contact";
}

const WaveSegment* Skeleton::find(const std::string& label) const {
    for (const auto& s : segments)
        if (s.label == label) return &s;
    return nullptr;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

Weighted weights(const DeltaShockParams& p) { return {p.m, p.n, p.udelta}; }

// Two-state delta32 from `seed` between state 3 (left) and state 2 (right),
// run until it reaches U*23.
void add_delta32(Skeleton& sk, const RiemannData& d, const GrhState& seed, const std::string& label,
                 const SkeletonOptions& opts) {
    const Point2 target = weighted_avg_velocity(d.s2.rho, d.s2.velocity(), d.s3.rho, d.s3.velocity());
    const SidePair sides{d.s3, d.s2};
    const Trajectory t = integrate(seed, sides, {EventSpec::entropy(), EventSpec::approach(target, opts.tol_end)},
                                   opts.sbar_min, opts.grh_step);
    if (t.event.kind != EventKind::ApproachedPoint)
        throw Error(label + ": stopped at sbar = " + num(t.event.sbar_at) + " before reaching U*23 (" +
                    (t.event.kind == EventKind::EntropyViolated ? "entropy violated" : "sbar_min reached") + ")");
    sk.segments.push_back(curve_segment(label, SegmentKind::DeltaTwoState,
                                        sample_uniform([&](double s) { return t.at(s); }, t.event.sbar_at,
                                                       opts.samples),
                                        3, 2));
    sk.points[label + "_end"] = t.event.state_at.xi;
    sk.points["U*23"] = target;
}

// Vacuum-boundary curve ending at the singular point of `nonvac` (Lemma 3.1).
std::vector<GrhState> curve_to_singular_point(const GrhState& seed, const PrimitiveState& nonvac,
                                              const std::string& label, const SkeletonOptions& opts) {
    const Side side = vacuum_curve_side(seed, nonvac);
    auto s = sample_uniform([&](double t) { return vacuum_curve(seed, nonvac, side, t); }, opts.sbar_min,
                            opts.samples);
    const Point2 end = nonvac.velocity();
    if ((s.back().xi - end).norm() > opts.tol_end)
        throw Error(label + ": does not approach its singular point");
    GrhState last;
    last.sbar = -inf;
    last.xi = end;
    last.udelta = end;
    s.push_back(last);
    return s;
}

// A representative interior point and its delta velocity.
std::pair<Point2, Velocity2> probe(const WaveSegment& w) {
    if (w.curve) {
        const size_t i = w.points.size() / 2;
        return {w.points[i], w.udelta[i]};
    }
    const Point2 &a = w.points[0], &b = w.points[1];
    if (a.allFinite() && b.allFinite()) return {(a + b) / 2, w.udelta[0]};
    const Point2& fin = a.allFinite() ? a : b;
    const Point2& far = a.allFinite() ? b : a;
    Point2 dir = Point2::Zero();
    for (int k = 0; k < 2; ++k)
        if (std::isinf(far(k))) dir(k) = far(k) > 0 ? 1 : -1;
    return {fin + dir, w.udelta[0]};
}

// Orders side_a / side_b as (left, right) in the entropy sense.
void orient_sides(Skeleton& sk, const RiemannData& d) {
    auto st = [&](int k) { return k ? d.state(k) : PrimitiveState{}; };
    for (auto& w : sk.segments) {
        if (!w.is_delta()) continue;
        const auto [x, u] = probe(w);
        if (!entropy_ok({st(w.side_a), st(w.side_b)}, u, x) && entropy_ok({st(w.side_b), st(w.side_a)}, u, x))
            std::swap(w.side_a, w.side_b);
    }
}

void check_on_line(double value, double target, const std::string& what) {
    if (std::abs(value - target) > 1e-9) throw Error(what + " is off its line by " + num(value - target));
}

} // namespace

Skeleton build_skeleton(const RiemannData& d, CaseKind c, const SkeletonOptions& opts) {
    validate(d);
    if (c == CaseKind::OutOfScope) throw Error("cannot build a skeleton for out-of-scope data");
    if (!opts.force) {
        const CaseId id = classify(d);
        if (id.kind != c)
            throw Error("requested " + case_name(c) + " but the data classify as " + case_name(id.kind));
    }
    Skeleton sk;
    sk.id = {c, ""};
    const Point2 X1 = d.s1.velocity(), X2 = d.s2.velocity(), X3 = d.s3.velocity();
    sk.points["Xi1"] = X1;
    sk.points["Xi2"] = X2;
    sk.points["Xi3"] = X3;
    const double u1 = d.s1.u, v1 = d.s1.v;

    switch (c) {
    case CaseKind::Case1: {
        const auto d12 = delta12(d.s1, d.s2);
        const auto d23 = delta23(d.s2, d.s3);
        const auto d31 = delta31(d.s3, d.s1);
        const Case1Result r = fixed_point_case1(d, opts.tol_fp, opts.max_iter, std::nullopt, opts.samples);
        const auto& xi = r.map.xi0;
        sk.segments.push_back(delta_segment("delta12", d12, {d12.position, inf}, xi[0], 1, 2));
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, xi[1], 2, 3));
        sk.segments.push_back(delta_segment("delta31", d31, {inf, d31.position}, xi[2], 3, 1));
        const char* labels[3] = {"delta2", "delta3", "delta1"};
        for (int k = 0; k < 3; ++k)
            sk.segments.push_back(curve_segment(labels[k], SegmentKind::DeltaVacuumBoundary, r.curves[k],
                                                r.map.nonvac[k], 0));
        sk.vacuum_regions.push_back(r.vacuum_polygon);
        sk.fixed_point = FixedPointInfo{r.iterations, r.residual};
        for (int k = 0; k < 4; ++k) sk.points["Xi0_" + std::to_string(k + 1)] = xi[k];
        sk.points["A"] = r.A;
        sk.points["D"] = r.D;
        check_on_line(xi[1].y(), d23.position, "Xi0^2");
        check_on_line(xi[2].y(), d31.position, "Xi0^3");
        check_on_line(xi[3].x(), d12.position, "Xi0^4");
        break;
    }
    case CaseKind::Case2:
    case CaseKind::Case6: {
        const auto d23 = delta23(d.s2, d.s3);
        const auto d31 = delta31(d.s3, d.s1);
        const MachResult r = fixed_point_mach(d, c, opts.tol_fp, opts.max_iter, opts);
        if (c == CaseKind::Case2) {
            const auto d12 = delta12(d.s1, d.s2);
            sk.segments.push_back(delta_segment("delta12", d12, {d12.position, inf}, r.A, 1, 2));
        } else {
            sk.segments.push_back(contact_segment("J12", {u1, inf}, r.A, 1, 2));
        }
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, r.A, 2, 3));
        sk.segments.push_back(curve_segment(
            "delta13_A", SegmentKind::DeltaTwoState,
            sample_uniform([&](double s) { return r.delta13.at(s); }, r.eval.sbar_b, opts.samples), 1, 3));
        sk.segments.push_back(curve_segment("delta3_B", SegmentKind::DeltaVacuumBoundary, r.curve_b, 3, 0));
        sk.segments.push_back(delta_segment("delta31", d31, {inf, d31.position}, r.C, 3, 1));
        sk.segments.push_back(curve_segment("delta1_C", SegmentKind::DeltaVacuumBoundary, r.curve_c, 1, 0));
        sk.vacuum_regions.push_back(r.vacuum_polygon);
        sk.fixed_point = FixedPointInfo{r.iterations, r.residual};
        sk.points["A"] = r.A;
        sk.points["B"] = r.B;
        sk.points["C"] = r.C;
        sk.points["D"] = r.D;
        check_on_line(r.C.y(), d31.position, "C");
        break;
    }
    case CaseKind::Case3: {
        const auto d12 = delta12(d.s1, d.s2);
        const auto d23 = delta23(d.s2, d.s3);
        const auto d31 = delta31(d.s3, d.s1);
        const Point2 A(d12.position, d31.position);
        sk.points["A"] = A;
        sk.segments.push_back(delta_segment("delta12", d12, {d12.position, inf}, A, 1, 2));
        sk.segments.push_back(delta_segment("delta31", d31, {inf, d31.position}, A, 3, 1));
        const Point2 U23 = weighted_avg_velocity(d.s2.rho, X2, d.s3.rho, X3);
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, U23, 2, 3));
        add_delta32(sk, d, merge(weights(d12), weights(d31), A), "delta32_A", opts);
        break;
    }
    case CaseKind::Case4: {
        const auto d23 = delta23(d.s2, d.s3);
        const auto d31 = delta31(d.s3, d.s1);
        const Point2 A(u1, d31.position);
        sk.points["A"] = A;
        sk.segments.push_back(contact_segment("J12", {u1, inf}, A, 1, 2));
        sk.segments.push_back(delta_segment("delta31", d31, {inf, d31.position}, A, 3, 1));
        const Point2 U23 = weighted_avg_velocity(d.s2.rho, X2, d.s3.rho, X3);
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, U23, 2, 3));
        add_delta32(sk, d, merge(weights(d31), {}, A), "delta32_A", opts);
        break;
    }
    case CaseKind::Case5:
    case CaseKind::Case9: {
        const auto d23 = delta23(d.s2, d.s3);
        const Point2 A(u1, d23.position);
        sk.points["A"] = A;
        sk.segments.push_back(contact_segment("J12", {u1, inf}, X1, 1, 2));
        sk.segments.push_back(contact_segment("J12_vacuum", X1, A, 0, 2));
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, A, 2, 3));
        const GrhState seed = merge(weights(d23), {}, A);
        std::vector<Point2> poly;
        if (c == CaseKind::Case9) {
            const auto s = curve_to_singular_point(seed, d.s3, "delta3_A", opts);
            sk.segments.push_back(curve_segment("delta3_A", SegmentKind::DeltaVacuumBoundary, s, 3, 0));
            sk.segments.push_back(contact_segment("J31", {inf, v1}, X3, 1, 3));
            sk.segments.push_back(contact_segment("J31_vacuum", X3, X1, 1, 0));
            for (const auto& g : s) poly.push_back(g.xi);
        } else {
            const auto d31 = delta31(d.s3, d.s1);
            const Side side = vacuum_curve_side(seed, d.s3);
            auto f = [&](double s) { return vacuum_curve(seed, d.s3, side, s); };
            const double sb = find_crossing([&](double s) { return f(s).xi; }, Axis::Eta, d31.position, -40.0);
            const GrhState gb = f(sb);
            if (!(gb.xi.x() > d31.udelta.x()))
                throw Error("Case5: delta3_A meets eta = v31 at xi = " + num(gb.xi.x()) + ", outside delta31");
            check_on_line(gb.xi.y(), d31.position, "B");
            sk.points["B"] = gb.xi;
            const auto s3 = sample_uniform(f, sb, opts.samples);
            sk.segments.push_back(curve_segment("delta3_A", SegmentKind::DeltaVacuumBoundary, s3, 3, 0));
            sk.segments.push_back(delta_segment("delta31", d31, {inf, d31.position}, gb.xi, 3, 1));
            const auto s1 = curve_to_singular_point(merge(weighted_of(gb), weights(d31), gb.xi), d.s1,
                                                    "delta1_B", opts);
            sk.segments.push_back(curve_segment("delta1_B", SegmentKind::DeltaVacuumBoundary, s1, 1, 0));
            for (const auto& g : s3) poly.push_back(g.xi);
            for (size_t i = 1; i < s1.size(); ++i) poly.push_back(s1[i].xi);
        }
        poly.push_back(X1);
        poly.push_back(A);
        sk.vacuum_regions.push_back(poly);
        break;
    }
    case CaseKind::Case7: {
        const auto d12 = delta12(d.s1, d.s2);
        const Point2 U12 = d12.udelta;
        sk.points["U*12"] = U12;
        sk.segments.push_back(delta_segment("delta12", d12, {d12.position, inf}, U12, 1, 2));
        sk.segments.push_back(contact_segment("J23", {-inf, v1}, U12, 2, 3));
        sk.segments.push_back(contact_segment("J13", U12, X3, 1, 3));
        sk.segments.push_back(contact_segment("J31", X3, {inf, v1}, 1, 3));
        break;
    }
    case CaseKind::Case8: {
        const auto d23 = delta23(d.s2, d.s3);
        sk.segments.push_back(contact_segment("J12", {u1, inf}, X1, 1, 2));
        sk.segments.push_back(contact_segment("J31", {inf, v1}, X1, 1, 3));
        const Point2 U23 = weighted_avg_velocity(d.s2.rho, X2, d.s3.rho, X3);
        sk.segments.push_back(delta_segment("delta23", d23, {-inf, d23.position}, U23, 2, 3));
        GrhState seed;
        seed.xi = X1;
        seed.m = opts.eps_m;
        seed.udelta = U23;
        add_delta32(sk, d, seed, "delta32_Xi1", opts);
        break;
    }
    case CaseKind::OutOfScope: break;
    }
    orient_sides(sk, d);
    return sk;
}

} // namespace presshock
