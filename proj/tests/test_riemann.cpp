#include <doctest.h>

#include <random>

#include "datasets.hpp"
#include "presshock/riemann.hpp"

using namespace presshock;
using testdata::published;

namespace {

double closure(const std::vector<Point2>& poly) { return (poly.front() - poly.back()).norm(); }

void check_entropy_along_deltas(const RiemannData& d, const Skeleton& sk) {
    for (const auto& s : sk.segments) {
        if (!s.is_delta() || !s.curve) continue;
        const SidePair sides{s.side_a ? d.state(s.side_a) : PrimitiveState{},
                             s.side_b ? d.state(s.side_b) : PrimitiveState{}};
        // Interior samples only; endpoints sit on interaction points or singular points.
        for (size_t i = 1; i + 1 < s.points.size(); i += 7) {
            INFO(s.label << " sample " << i);
            CHECK(entropy_ok(sides, s.udelta[i], s.points[i]));
        }
    }
}

} // namespace

TEST_SUITE("riemann") {

TEST_CASE("classify published datasets") {
    const auto c1 = classify_traced(published(1));
    CHECK(c1.id.kind == CaseKind::Case1);
    REQUIRE(c1.trace.size() >= 3);
    bool saw = false;
    for (const auto& t : c1.trace) saw = saw || t.find("u12 < u13") != std::string::npos;
    CHECK(saw);
    CHECK(classify(published(3)).kind == CaseKind::Case3);
    CHECK(classify(published(4)).kind == CaseKind::Case4);
    CHECK(classify(published(5)).kind == CaseKind::Case9);
    CHECK(classify(published(7)).kind == CaseKind::Case7);
    CHECK(classify(published(8)).kind == CaseKind::Case8);
    CHECK(classify(published(9)).kind == CaseKind::Case9);
    CHECK(classify(testdata::case6_synthetic()).kind == CaseKind::Case6);
    CHECK(classify(testdata::case2_synthetic_a()).kind == CaseKind::Case2);
    CHECK(classify(testdata::case2_synthetic_b()).kind == CaseKind::Case2);
}

TEST_CASE("out of scope names the failing predicate") {
    RiemannData d = published(1);
    d.s1.u = 0.5;  // u1 > u2: vacuum fan between states 1 and 2
    const CaseId c = classify(d);
    CHECK(c.kind == CaseKind::OutOfScope);
    CHECK_FALSE(c.reason.empty());
    const CaseId e = classify(published(2));
    CHECK(e.kind == CaseKind::OutOfScope);
    CHECK(e.reason.find("[Xi1,Xi3,A]") != std::string::npos);
}

TEST_CASE("equality tolerance") {
    RiemannData d = published(8);
    d.s2.u += 1e-9;
    CHECK(classify(d).kind != CaseKind::Case8);
    CHECK(classify(d, 1e-8).kind == CaseKind::Case8);
}

TEST_CASE("classification is total and density-scale invariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1, 1), R(0.05, 2), L(0.1, 10);
    std::uniform_int_distribution<int> pick(0, 4);
    const double grid[5] = {-0.5, -0.2, 0.0, 0.3, 0.6};
    for (int k = 0; k < 3000; ++k) {
        RiemannData d;
        for (int i = 1; i <= 3; ++i) {
            PrimitiveState& s = i == 1 ? d.s1 : i == 2 ? d.s2 : d.s3;
            // Coarse values make the equality cases reachable.
            s = {R(rng), k % 2 ? grid[pick(rng)] : U(rng), k % 3 ? grid[pick(rng)] : U(rng), 0};
        }
        const CaseId a = classify(d);
        const double lam = L(rng);
        RiemannData e = d;
        e.s1.rho *= lam;
        e.s2.rho *= lam;
        e.s3.rho *= lam;
        CHECK(classify(e).kind == a.kind);
    }
}

TEST_CASE("Case 3 skeleton") {
    const RiemannData d = published(3);
    const Skeleton sk = build_skeleton(d, CaseKind::Case3);
    const Point2 star = weighted_avg_velocity(d.s2.rho, d.s2.velocity(), d.s3.rho, d.s3.velocity());
    const WaveSegment* w = sk.find("delta32_A");
    REQUIRE(w != nullptr);
    CHECK((w->points.back() - star).norm() <= 1e-4);
    const Point2 A = sk.points.at("A");
    CHECK(A.x() == delta12(d.s1, d.s2).position);
    CHECK(A.y() == delta31(d.s3, d.s1).position);
    check_entropy_along_deltas(d, sk);
}

TEST_CASE("Case 7 skeleton") {
    const Skeleton sk = build_skeleton(published(7), CaseKind::Case7);
    CHECK(sk.segments.size() == 4);
    for (const auto& s : sk.segments) CHECK_FALSE(s.curve);
    CHECK(sk.vacuum_regions.empty());
    for (const auto& s : sk.segments)
        if (s.label[0] == 'J')
            for (const auto& p : s.points) CHECK(p.y() == 0.018);
}

TEST_CASE("Case 9 skeleton") {
    const RiemannData d = published(9);
    const Skeleton sk = build_skeleton(d, CaseKind::Case9);
    REQUIRE(sk.vacuum_regions.size() == 1);
    CHECK(closure(sk.vacuum_regions[0]) <= 1e-6);
    const WaveSegment* w = sk.find("delta3_A");
    REQUIRE(w != nullptr);
    CHECK(w->kind == SegmentKind::DeltaVacuumBoundary);
    CHECK((w->points.back() - Point2(0.051, 0.415)).norm() <= 1e-4);
    CHECK(w->points.front().x() == d.s1.u);
    CHECK(std::abs(w->points.front().y() - delta23(d.s2, d.s3).position) <= 1e-9);
    check_entropy_along_deltas(d, sk);
}

TEST_CASE("Case 4, 5, 8 skeletons") {
    const RiemannData d4 = published(4);
    const Skeleton s4 = build_skeleton(d4, CaseKind::Case4);
    const Point2 star = weighted_avg_velocity(d4.s2.rho, d4.s2.velocity(), d4.s3.rho, d4.s3.velocity());
    CHECK((s4.find("delta32_A")->points.back() - star).norm() <= 1e-4);
    CHECK(s4.find("delta32_A")->m.front() == doctest::Approx(delta31(d4.s3, d4.s1).m).epsilon(1e-15));
    check_entropy_along_deltas(d4, s4);

    const RiemannData d5 = published(6);  // satisfies the Case 5 conditions
    const Skeleton s5 = build_skeleton(d5, CaseKind::Case5);
    CHECK(std::abs(s5.points.at("B").y() - delta31(d5.s3, d5.s1).position) <= 1e-9);
    CHECK((s5.find("delta1_B")->points.back() - d5.s1.velocity()).norm() <= 1e-4);
    REQUIRE(s5.vacuum_regions.size() == 1);
    CHECK(closure(s5.vacuum_regions[0]) <= 1e-6);
    check_entropy_along_deltas(d5, s5);

    const RiemannData d8 = published(8);
    const Skeleton s8 = build_skeleton(d8, CaseKind::Case8);
    const Point2 star8 = weighted_avg_velocity(d8.s2.rho, d8.s2.velocity(), d8.s3.rho, d8.s3.velocity());
    CHECK((s8.find("delta32_Xi1")->points.front() - d8.s1.velocity()).norm() == 0);
    CHECK((s8.find("delta32_Xi1")->points.back() - star8).norm() <= 1e-4);
    check_entropy_along_deltas(d8, s8);
}

TEST_CASE("Case 1 fixed point") {
    const RiemannData d = published(1);
    const Case1Result r = fixed_point_case1(d, 1e-11, 200);
    CHECK(r.residual <= 1e-10);
    const Case1Map again = case1_map(d, r.fixed);
    CHECK(case1_distance(again.out, r.fixed) <= 1e-10);
    CHECK(std::abs(r.map.xi0[1].y() - delta23(d.s2, d.s3).position) <= 1e-9);
    CHECK(std::abs(r.map.xi0[2].y() - delta31(d.s3, d.s1).position) <= 1e-9);
    CHECK(std::abs(r.map.xi0[3].x() - delta12(d.s1, d.s2).position) <= 1e-9);
    CHECK(closure(r.vacuum_polygon) <= 1e-6);

    const Case1Result s = fixed_point_case1(d, 1e-11, 200, r.fixed);
    CHECK(s.iterations <= 1);
    CHECK(s.residual <= 1e-11);

    CHECK_THROWS_AS(fixed_point_case1(published(3), 1e-11, 200), Error);

    const Skeleton sk = build_skeleton(d, CaseKind::Case1);
    REQUIRE(sk.vacuum_regions.size() == 1);
    REQUIRE(sk.fixed_point.has_value());
    check_entropy_along_deltas(d, sk);
    for (const auto& seg : sk.segments)
        if (seg.kind == SegmentKind::DeltaVacuumBoundary) CHECK((seg.side_a == 0) != (seg.side_b == 0));
}

TEST_CASE("Mach fixed points") {
    struct Item {
        RiemannData d;
        CaseKind c;
    };
    for (const Item& it : {Item{testdata::case6_synthetic(), CaseKind::Case6},
                           Item{testdata::case2_synthetic_a(), CaseKind::Case2},
                           Item{testdata::case2_synthetic_b(), CaseKind::Case2}}) {
        const MachResult r = fixed_point_mach(it.d, it.c, 1e-11, 100);
        CHECK(r.residual <= 1e-10);
        CHECK((r.B - r.D).norm() <= 1e-6);
        CHECK(std::abs(r.C.y() - delta31(it.d.s3, it.d.s1).position) <= 1e-9);
        const MachEval e = mach_map(it.d, r.delta13, r.eval.sbar_b, weighted_of(r.eval.at_d));
        REQUIRE(e.ok);
        CHECK(std::abs(e.sbar_d - e.sbar_b) <= 1e-10);
        CHECK(closure(r.vacuum_polygon) <= 1e-6);

        const Skeleton sk = build_skeleton(it.d, it.c);
        CHECK(sk.vacuum_regions.size() == 1);
        check_entropy_along_deltas(it.d, sk);
    }
}

TEST_CASE("Mach failure contract") {
    SkeletonOptions o;
    o.force = true;
    try {
        build_skeleton(published(2), CaseKind::Case2, o);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("bracket") != std::string::npos);
    }
    CHECK_THROWS_AS(build_skeleton(published(2), CaseKind::Case2), Error);
    CHECK_THROWS_AS(build_skeleton(published(1), CaseKind::OutOfScope), Error);
}

TEST_CASE("skeleton structure") {
    for (int k : {1, 3, 4, 5, 6, 7, 8, 9}) {
        const RiemannData d = published(k);
        const Skeleton sk = build_skeleton(d, classify(d).kind);
        for (const auto& s : sk.segments) {
            INFO("dataset " << k << " " << s.label);
            CHECK(s.side_a >= 0);
            CHECK(s.side_a <= 3);
            CHECK(s.side_b <= 3);
            if (s.kind == SegmentKind::DeltaTwoState) CHECK((s.side_a > 0 && s.side_b > 0));
            if (s.is_delta()) {
                CHECK(s.udelta.size() == s.points.size());
                for (double m : s.m) CHECK(m >= 0);
            }
            if (s.curve) CHECK(s.points.size() >= 400);
            for (const auto& p : s.points) CHECK(!std::isnan(p.x()));
        }
    }
}

}
