#pragma once

#include <limits>

#include "presshock/core.hpp"

namespace presshock {

enum class Orientation { Vertical, Horizontal };

// Straight exterior delta shock. left/right follow the entropy convention
// on the part of the support line that reaches the singular point:
// [U_left, U_delta, Xi] > 0 and [U_right, U_delta, Xi] < 0 there.
struct DeltaShockParams {
    Orientation orientation = Orientation::Vertical;
    double position = 0;
    Velocity2 udelta = Velocity2::Zero();
    double m = 0;
    double n = 0;
    PrimitiveState left;
    PrimitiveState right;
    // Unit vector pointing from the far end (infinity) toward the singular point.
    Point2 inbound = Point2::Zero();

    Point2 singular_point() const { return udelta; }
};

// Thrown when the generating inequality of a delta shock fails.
class NotADeltaShock : public Error {
public:
    enum class Reason { Contact, VacuumFan };
    NotADeltaShock(Reason r, const std::string& what) : Error(what), reason(r) {}
    Reason reason;
};

enum class Interface { X, YLeft, YRight };

struct ContactLine {
    Point2 through = Point2::Zero();
    Point2 direction = Point2::UnitX();
    double sigma = 0; // d(eta)/d(xi); infinite for vertical lines
    bool degenerate = false;
    PrimitiveState left;
    PrimitiveState right;
};

DeltaShockParams delta12(const PrimitiveState& s1, const PrimitiveState& s2);
DeltaShockParams delta23(const PrimitiveState& s2, const PrimitiveState& s3);
DeltaShockParams delta31(const PrimitiveState& s3, const PrimitiveState& s1);

ContactLine contact_line(const PrimitiveState& si, const PrimitiveState& sj, Interface boundary);

inline bool entropy_ok(const Velocity2& UL, const Velocity2& UR, const Velocity2& Udelta,
                       const Point2& xi) {
    return bracket3(UL, Udelta, xi) > 0 && bracket3(UR, Udelta, xi) < 0;
}

} // namespace presshock
