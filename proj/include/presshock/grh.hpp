#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "presshock/core.hpp"

namespace presshock {

struct GrhState {
    double sbar = 0;
    Point2 xi = Point2::Zero();
    Velocity2 udelta = Velocity2::Zero();
    double m = 0;
    double n = 0;
};

struct SidePair {
    PrimitiveState left;
    PrimitiveState right;
};

// Integrated variables (xi, eta, m, m*u, m*v, m|U|^2/2 + n).
using GrhVector = Eigen::Matrix<double, 6, 1>;

GrhVector pack(const GrhState& g);
GrhState unpack(const GrhVector& x, double sbar);

// Entropy inequalities for the non-vacuum sides only.
bool entropy_ok(const SidePair& sides, const Velocity2& udelta, const Point2& xi);

GrhVector grh_rhs(const GrhState& g, const SidePair& sides);
GrhVector grh_rhs(const GrhVector& x, double sbar, const SidePair& sides);

enum class EventKind { CrossedHorizontal, CrossedVertical, EntropyViolated, ReachedSbarMin, ApproachedPoint };

struct EventSpec {
    EventKind kind = EventKind::EntropyViolated;
    double value = 0;
    Point2 point = Point2::Zero();
    double tol = 0;

    static EventSpec horizontal(double eta) { return {EventKind::CrossedHorizontal, eta, {}, 0}; }
    static EventSpec vertical(double xi) { return {EventKind::CrossedVertical, xi, {}, 0}; }
    static EventSpec entropy() { return {EventKind::EntropyViolated, 0, {}, 0}; }
    static EventSpec approach(const Point2& p, double tol) {
        return {EventKind::ApproachedPoint, 0, p, tol};
    }
};

struct GrhEvent {
    EventKind kind = EventKind::ReachedSbarMin;
    double sbar_at = 0;
    GrhState state_at;
};

// Samples ordered by decreasing sbar, starting with the initial state and
// ending with the event state.
struct Trajectory {
    std::vector<GrhState> samples;
    GrhEvent event;

    GrhState at(double sbar) const;
    Point2 xi_at(double sbar) const { return at(sbar).xi; }
};

Trajectory integrate(const GrhState& init, const SidePair& sides, const std::vector<EventSpec>& events,
                     std::optional<double> sbar_min, double step = -1e-3);

enum class Side { Left, Right };

// Side of the non-vacuum state implied by the entropy condition at the start.
Side vacuum_curve_side(const GrhState& init, const PrimitiveState& nonvac);

GrhState vacuum_curve(const GrhState& init, const PrimitiveState& nonvac, Side side, double sbar);

struct Weighted {
    double m = 0;
    double n = 0;
    Velocity2 u = Velocity2::Zero();
};

inline Weighted weighted_of(const GrhState& g) { return {g.m, g.n, g.udelta}; }

GrhState merge(const Weighted& a, const Weighted& b, const Point2& at);

enum class Axis { Xi, Eta };

using CurveFn = std::function<Point2(double)>;

// First root of curve(s)[axis] = target scanning from 0 down to sbar_lo,
// refined by bisection.
double find_crossing(const CurveFn& curve, Axis axis, double target, double sbar_lo,
                     double scan_step = 1e-3);
double find_crossing(const Trajectory& t, Axis axis, double target);

enum class LemmaKind { VacuumSide, Collinear, SameSide, OppositeSide };

struct LemmaLimits {
    LemmaKind kind = LemmaKind::VacuumSide;
    std::optional<double> m;
    std::optional<double> n;
    Point2 xi = Point2::Zero();
    Velocity2 udelta = Velocity2::Zero();
    bool entropy_violation_expected = false;
};

LemmaLimits lemma_limits(const SidePair& sides, const GrhState& init, double collinear_tol = 1e-12);

} // namespace presshock
