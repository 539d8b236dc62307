#include "presshock/waves.hpp"

#include <cmath>

namespace presshock {

namespace {

// Delta shock between a (lower/left side of the generating inequality) and b,
// with d = normal velocity jump b - a along the wave normal.
DeltaShockParams straight_delta(const PrimitiveState& a, const PrimitiveState& b, double d,
                                const char* name) {
    validate(a);
    validate(b);
    if (a.rho <= 0 || b.rho <= 0)
        throw Error(std::string(name) + ": both side densities must be positive");
    if (d == 0)
        throw NotADeltaShock(NotADeltaShock::Reason::Contact,
                             std::string(name) + ": equal normal velocities, contact expected");
    if (d < 0)
        throw NotADeltaShock(NotADeltaShock::Reason::VacuumFan,
                             std::string(name) + ": diverging velocities, vacuum fan expected");
    const double sa = std::sqrt(a.rho), sb = std::sqrt(b.rho);
    DeltaShockParams p;
    p.udelta = weighted_avg_velocity(a.rho, a.velocity(), b.rho, b.velocity());
    p.m = std::sqrt(a.rho * b.rho) * d;
    const double du2 = (a.velocity() - b.velocity()).squaredNorm();
    p.n = (a.rho * b.rho * du2 / (2 * (sa + sb)) + sb * a.H + sa * b.H) * d / (sa + sb);
    return p;
}

} // namespace

DeltaShockParams delta12(const PrimitiveState& s1, const PrimitiveState& s2) {
    DeltaShockParams p = straight_delta(s1, s2, s2.u - s1.u, "delta12");
    p.orientation = Orientation::Vertical;
    p.position = p.udelta.x();
    p.left = s1;
    p.right = s2;
    p.inbound = {0, -1};
    return p;
}

DeltaShockParams delta23(const PrimitiveState& s2, const PrimitiveState& s3) {
    DeltaShockParams p = straight_delta(s2, s3, s3.v - s2.v, "delta23");
    p.orientation = Orientation::Horizontal;
    p.position = p.udelta.y();
    p.left = s2;
    p.right = s3;
    p.inbound = {1, 0};
    return p;
}

DeltaShockParams delta31(const PrimitiveState& s3, const PrimitiveState& s1) {
    DeltaShockParams p = straight_delta(s1, s3, s3.v - s1.v, "delta31");
    p.orientation = Orientation::Horizontal;
    p.position = p.udelta.y();
    p.left = s3;
    p.right = s1;
    p.inbound = {-1, 0};
    return p;
}

ContactLine contact_line(const PrimitiveState& si, const PrimitiveState& sj, Interface boundary) {
    validate(si);
    validate(sj);
    ContactLine c;
    c.left = si;
    c.right = sj;
    c.through = si.velocity();
    const bool x = boundary == Interface::X;
    if (x ? si.u != sj.u : si.v != sj.v)
        throw Error("contact: normal velocities differ across the interface");
    const Point2 d = sj.velocity() - si.velocity();
    if (d.squaredNorm() == 0) {
        c.degenerate = true;
        c.direction = x ? Point2(0, 1) : Point2(1, 0);
    } else {
        c.direction = d.normalized();
    }
    c.sigma = c.direction.x() == 0 ? std::numeric_limits<double>::infinity()
                                   : c.direction.y() / c.direction.x();
    return c;
}

} // namespace presshock
