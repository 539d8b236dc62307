#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "presshock/grh.hpp"
#include "presshock/waves.hpp"

namespace presshock {

// s1: x > 0, y > 0; s2: x < 0, y > 0; s3: y < 0.
struct RiemannData {
    PrimitiveState s1;
    PrimitiveState s2;
    PrimitiveState s3;

    const PrimitiveState& state(int i) const { return i == 1 ? s1 : i == 2 ? s2 : s3; }
};

void validate(const RiemannData& d);

enum class CaseKind { Case1 = 1, Case2, Case3, Case4, Case5, Case6, Case7, Case8, Case9, OutOfScope };

struct CaseId {
    CaseKind kind = CaseKind::OutOfScope;
    std::string reason;
};

std::string case_name(CaseKind k);

struct Classification {
    CaseId id;
    std::vector<std::string> trace;
};

Classification classify_traced(const RiemannData& d, double tol_eq = 0);
inline CaseId classify(const RiemannData& d, double tol_eq = 0) { return classify_traced(d, tol_eq).id; }

enum class SegmentKind { Contact, DeltaTwoState, DeltaVacuumBoundary };

const char* segment_kind_name(SegmentKind k);

// Straight segments hold two points; an endpoint at infinity has the
// corresponding coordinate set to +-inf. Delta segments carry per-point
// (udelta, m, n); contacts leave those vectors empty.
struct WaveSegment {
    SegmentKind kind = SegmentKind::Contact;
    std::string label;
    bool curve = false;
    std::vector<Point2> points;
    std::vector<Velocity2> udelta;
    std::vector<double> m;
    std::vector<double> n;
    // Side states by quadrant index 1..3; 0 marks vacuum. For deltas,
    // side_a is the left state in the entropy sense.
    int side_a = 0;
    int side_b = 0;

    bool is_delta() const { return kind != SegmentKind::Contact; }
};

struct FixedPointInfo {
    int iterations = 0;
    double residual = 0;
};

struct Skeleton {
    CaseId id;
    std::vector<WaveSegment> segments;
    std::vector<std::vector<Point2>> vacuum_regions;
    std::optional<FixedPointInfo> fixed_point;
    std::map<std::string, Point2> points;

    const WaveSegment* find(const std::string& label) const;
};

struct SkeletonOptions {
    double tol_fp = 1e-11;
    int max_iter = 200;
    double grh_step = -1e-3;
    double sbar_min = -30;
    double tol_end = 1e-4;
    int samples = 400;
    double eps_m = 1e-12;
    // Build the requested case even when the classifier disagrees.
    bool force = false;
};

Skeleton build_skeleton(const RiemannData& d, CaseKind c, const SkeletonOptions& opts = {});

struct Case1Point {
    double eta = 0;
    double m = 0;
    double n = 0;
    Velocity2 u = Velocity2::Zero();
};

struct Case1Map {
    Case1Point out;
    std::array<GrhState, 4> start{}; // seeds at Xi0^1, Xi0^2, Xi0^3 (index 0..2)
    std::array<double, 3> sbar_end{};
    std::array<Point2, 4> xi0{};     // Xi0^1 .. Xi0^4
    std::array<int, 3> nonvac{2, 3, 1};
};

Case1Map case1_map(const RiemannData& d, const Case1Point& x);

struct Case1Result {
    Case1Point fixed;
    Case1Map map;
    int iterations = 0;
    double residual = 0;
    std::array<std::vector<GrhState>, 3> curves;
    std::vector<Point2> vacuum_polygon;
    Point2 A = Point2::Zero();
    Point2 D = Point2::Zero();
};

Case1Result fixed_point_case1(const RiemannData& d, double tol_fp, int max_iter,
                              const std::optional<Case1Point>& start = std::nullopt, int samples = 400);

double case1_distance(const Case1Point& a, const Case1Point& b);

struct MachEval {
    bool ok = false;
    std::string why;
    double sbar_b = 0;
    double sbar_d = 0;
    GrhState at_b;      // seed of delta3^B after merging
    GrhState at_c;      // seed of delta1^C after merging
    GrhState at_d;      // delta1^C state at D
    double sbar_c = 0;  // delta3^B parameter at C
    double tau_d = 0;   // delta1^C parameter at D
    int inner_iterations = 0;
};

struct MachResult {
    Trajectory delta13;
    MachEval eval;
    Point2 A = Point2::Zero();
    Point2 B = Point2::Zero();
    Point2 C = Point2::Zero();
    Point2 D = Point2::Zero();
    int iterations = 0;
    double residual = 0;
    std::vector<GrhState> curve_b;  // delta3^B from B to C
    std::vector<GrhState> curve_c;  // delta1^C from C to D
    std::vector<Point2> vacuum_polygon;
};

// delta13^A for a Mach case; throws if the entropy condition fails at A.
Trajectory mach_delta13(const RiemannData& d, CaseKind c, double step, double sbar_min, Point2* A = nullptr);

// One application of the Mach map at B = delta13(sbar_b).
MachEval mach_map(const RiemannData& d, const Trajectory& delta13, double sbar_b,
                  const std::optional<Weighted>& incoming = std::nullopt);

MachResult fixed_point_mach(const RiemannData& d, CaseKind c, double tol_fp, int max_iter,
                            const SkeletonOptions& opts = {});

} // namespace presshock
