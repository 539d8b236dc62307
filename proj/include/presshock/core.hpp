#pragma once

#include <Eigen/Core>
#include <cmath>

#include "presshock/error.hpp"

namespace presshock {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2 = Vec2<double>;
using Velocity2 = Vec2<double>;

template <typename Scalar = double>
struct PrimitiveStateT {
    Scalar rho{0};
    Scalar u{0};
    Scalar v{0};
    Scalar H{0};

    Vec2<Scalar> velocity() const { return {u, v}; }
    bool is_vacuum() const { return rho == Scalar(0); }
};

// Conserved variables (rho, mx, my, E). E is carried even when the energy
// equation is disabled; it is then identically zero.
template <typename Scalar = double>
using ConservedStateT = Eigen::Array<Scalar, 4, 1>;

using PrimitiveState = PrimitiveStateT<double>;
using ConservedState = ConservedStateT<double>;

template <typename Scalar>
void validate(const PrimitiveStateT<Scalar>& p) {
    using std::isfinite;
    if (!(isfinite(p.rho) && isfinite(p.u) && isfinite(p.v) && isfinite(p.H)))
        throw Error("state has non-finite component");
    if (p.rho < 0) throw Error("negative density");
    if (p.H < 0) throw Error("negative internal energy");
    if (p.rho == 0 && p.H != 0) throw Error("vacuum state must have H = 0");
}

template <typename Scalar>
ConservedStateT<Scalar> to_conserved(const PrimitiveStateT<Scalar>& p, bool with_energy) {
    validate(p);
    ConservedStateT<Scalar> c;
    if (p.rho == 0) {
        c.setZero();
        return c;
    }
    c << p.rho, p.rho * p.u, p.rho * p.v,
        with_energy ? p.H + p.rho * (p.u * p.u + p.v * p.v) / 2 : Scalar(0);
    return c;
}

template <typename Derived>
Vec2<typename Derived::Scalar> velocity_of(const Eigen::ArrayBase<Derived>& c,
                                           typename Derived::Scalar rho_floor) {
    using Scalar = typename Derived::Scalar;
    if (!(c(0) >= rho_floor) || c(0) <= 0) return Vec2<Scalar>::Zero();
    return {c(1) / c(0), c(2) / c(0)};
}

// Inverse of to_conserved. H is recovered only when the energy component is
// present; below rho_floor the state is reported as vacuum.
template <typename Derived>
PrimitiveStateT<typename Derived::Scalar> to_primitive(const Eigen::ArrayBase<Derived>& c,
                                                       bool with_energy,
                                                       typename Derived::Scalar rho_floor) {
    using Scalar = typename Derived::Scalar;
    PrimitiveStateT<Scalar> p;
    if (!(c(0) >= rho_floor) || c(0) <= 0) return p;
    p.rho = c(0);
    p.u = c(1) / c(0);
    p.v = c(2) / c(0);
    if (with_energy) {
        Scalar h = c(3) - (c(1) * c(1) + c(2) * c(2)) / (2 * c(0));
        p.H = h > 0 ? h : Scalar(0);
    }
    return p;
}

// det [[a.x a.y 1] [b.x b.y 1] [p.x p.y 1]]
template <typename Scalar>
Scalar bracket3(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& p) {
    return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

template <typename Scalar>
Vec2<Scalar> weighted_avg_velocity(Scalar rhoL, const Vec2<Scalar>& UL, Scalar rhoR,
                                   const Vec2<Scalar>& UR) {
    using std::sqrt;
    if (rhoL < 0 || rhoR < 0) throw Error("weighted average: negative density");
    if (rhoL + rhoR <= 0) throw Error("weighted average: both densities are zero");
    if (rhoL == 0) return UR;
    if (rhoR == 0) return UL;
    Scalar sl = sqrt(rhoL), sr = sqrt(rhoR);
    return (sl * UL + sr * UR) / (sl + sr);
}

} // namespace presshock
