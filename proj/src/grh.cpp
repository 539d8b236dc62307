#include "presshock/grh.hpp"

#include <algorithm>
#include <cmath>

namespace presshock {

GrhVector pack(const GrhState& g) {
    GrhVector x;
    x << g.xi.x(), g.xi.y(), g.m, g.m * g.udelta.x(), g.m * g.udelta.y(),
        g.m * g.udelta.squaredNorm() / 2 + g.n;
    return x;
}

GrhState unpack(const GrhVector& x, double sbar) {
    GrhState g;
    g.sbar = sbar;
    g.xi = {x(0), x(1)};
    g.m = x(2);
    if (g.m > 0) {
        g.udelta = Velocity2(x(3), x(4)) / g.m;
        g.n = x(5) - g.m * g.udelta.squaredNorm() / 2;
    } else {
        if (x(3) != 0 || x(4) != 0) throw Error("grh: zero mass with nonzero momentum");
        g.n = x(5);
    }
    return g;
}

bool entropy_ok(const SidePair& sides, const Velocity2& udelta, const Point2& xi) {
    if (sides.left.rho > 0 && !(bracket3(sides.left.velocity(), udelta, xi) > 0)) return false;
    if (sides.right.rho > 0 && !(bracket3(sides.right.velocity(), udelta, xi) < 0)) return false;
    return true;
}

GrhVector grh_rhs(const GrhVector& x, double sbar, const SidePair& sides) {
    if (!(x(2) > 0)) {
        if (x(2) == 0 && x(3) == 0 && x(4) == 0) {
            // Massless and motionless: only the trivial homogeneous part survives.
        } else {
            throw Error("grh: zero mass with nonzero momentum");
        }
    }
    const Point2 xi(x(0), x(1));
    const Velocity2 U = x(2) > 0 ? Velocity2(Velocity2(x(3), x(4)) / x(2)) : Velocity2::Zero();
    const PrimitiveState& L = sides.left;
    const PrimitiveState& R = sides.right;
    const double bL = L.rho > 0 ? bracket3(L.velocity(), U, xi) : 0.0;
    const double bR = R.rho > 0 ? bracket3(R.velocity(), U, xi) : 0.0;
    const double e = std::exp(-sbar);
    const double Rm = L.rho * bL - R.rho * bR;
    const Velocity2 RU = L.rho * L.velocity() * bL - R.rho * R.velocity() * bR;
    const double RK = (L.rho / 2 * L.velocity().squaredNorm() + L.H) * bL -
                      (R.rho / 2 * R.velocity().squaredNorm() + R.H) * bR;
    GrhVector d;
    d(0) = xi.x() - U.x();
    d(1) = xi.y() - U.y();
    d(2) = x(2) - Rm * e;
    d(3) = x(3) - RU.x() * e;
    d(4) = x(4) - RU.y() * e;
    d(5) = x(5) - RK * e;
    return d;
}

GrhVector grh_rhs(const GrhState& g, const SidePair& sides) {
    return grh_rhs(pack(g), g.sbar, sides);
}

namespace {

GrhVector rk4(const GrhVector& x, double s, double h, const SidePair& sides) {
    const GrhVector k1 = grh_rhs(x, s, sides);
    const GrhVector k2 = grh_rhs(x + h / 2 * k1, s + h / 2, sides);
    const GrhVector k3 = grh_rhs(x + h / 2 * k2, s + h / 2, sides);
    const GrhVector k4 = grh_rhs(x + h * k3, s + h, sides);
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Signed event function; the event fires where it reaches zero or changes sign
// from its value at the start of the step.
double event_value(const EventSpec& e, const GrhState& g, const SidePair& sides) {
    switch (e.kind) {
    case EventKind::CrossedHorizontal: return g.xi.y() - e.value;
    case EventKind::CrossedVertical: return g.xi.x() - e.value;
    case EventKind::ApproachedPoint: return (g.xi - e.point).norm() - e.tol;
    case EventKind::EntropyViolated: {
        double v = std::numeric_limits<double>::infinity();
        if (sides.left.rho > 0) v = std::min(v, bracket3(sides.left.velocity(), g.udelta, g.xi));
        if (sides.right.rho > 0) v = std::min(v, -bracket3(sides.right.velocity(), g.udelta, g.xi));
        return v;
    }
    case EventKind::ReachedSbarMin: return 1.0;
    }
    return 1.0;
}

bool fired(const EventSpec& e, double before, double after) {
    if (e.kind == EventKind::EntropyViolated || e.kind == EventKind::ApproachedPoint) return after <= 0;
    return after == 0 || (before < 0) != (after < 0);
}

bool finite(const GrhVector& x) { return x.allFinite(); }

} // namespace

GrhState Trajectory::at(double sbar) const {
    if (samples.empty()) throw Error("trajectory has no samples");
    if (sbar >= samples.front().sbar) return samples.front();
    if (sbar <= samples.back().sbar) return samples.back();
    auto it = std::lower_bound(samples.begin(), samples.end(), sbar,
                               [](const GrhState& g, double s) { return g.sbar > s; });
    const GrhState& b = *it;
    const GrhState& a = *(it - 1);
    if (b.sbar == sbar) return b;
    const double w = (a.sbar - sbar) / (a.sbar - b.sbar);
    GrhVector x = (1 - w) * pack(a) + w * pack(b);
    return unpack(x, sbar);
}

Trajectory integrate(const GrhState& init, const SidePair& sides, const std::vector<EventSpec>& events,
                     std::optional<double> sbar_min, double step) {
    if (events.empty() && !sbar_min) throw Error("integrate: no events and no sbar_min");
    if (!(step < 0)) throw Error("integrate: step must be negative");
    if (sides.left.rho <= 0 && sides.right.rho <= 0) throw Error("integrate: both sides are vacuum");
    if (!(init.m > 0)) throw Error("integrate: initial mass must be positive");
    if (!entropy_ok(sides, init.udelta, init.xi))
        throw Error("integrate: initial data violate the entropy condition");
    const double smin = sbar_min.value_or(-60.0);

    Trajectory t;
    t.samples.push_back(init);
    GrhVector x = pack(init);
    double s = init.sbar;
    std::vector<double> before(events.size());
    for (size_t i = 0; i < events.size(); ++i) before[i] = event_value(events[i], init, sides);

    while (s > smin) {
        const double h = std::max(step, smin - s);
        const GrhVector xn = rk4(x, s, h, sides);
        if (!finite(xn)) throw Error("integrate: non-finite state at sbar = " + std::to_string(s + h));
        const double sn = (h == smin - s) ? smin : s + h;
        const GrhState gn = unpack(xn, sn);

        // Earliest event in this step, localized by bisection on the sub-step length.
        int hit = -1;
        double tau_hit = 1.0;
        for (size_t i = 0; i < events.size(); ++i) {
            const double after = event_value(events[i], gn, sides);
            if (!fired(events[i], before[i], after)) continue;
            double lo = 0, hi = 1;
            for (int k = 0; k < 80; ++k) {
                const double mid = (lo + hi) / 2;
                const GrhState gm = unpack(rk4(x, s, mid * h, sides), s + mid * h);
                if (fired(events[i], before[i], event_value(events[i], gm, sides))) hi = mid;
                else lo = mid;
                if (hi - lo < 1e-15) break;
            }
            if (hi < tau_hit || hit < 0) {
                tau_hit = hi;
                hit = static_cast<int>(i);
            }
        }
        if (hit >= 0) {
            const double se = tau_hit == 1.0 ? sn : s + tau_hit * h;
            const GrhState ge = tau_hit == 1.0 ? gn : unpack(rk4(x, s, tau_hit * h, sides), se);
            t.samples.push_back(ge);
            t.event = {events[hit].kind, se, ge};
            return t;
        }
        for (size_t i = 0; i < events.size(); ++i) before[i] = event_value(events[i], gn, sides);
        x = xn;
        s = sn;
        t.samples.push_back(gn);
    }
    t.event = {EventKind::ReachedSbarMin, s, t.samples.back()};
    return t;
}

Side vacuum_curve_side(const GrhState& init, const PrimitiveState& nonvac) {
    const double b = bracket3(nonvac.velocity(), init.udelta, init.xi);
    if (b > 0) return Side::Left;
    if (b < 0) return Side::Right;
    throw Error("vacuum curve: delta velocity, position and side velocity are collinear");
}

GrhState vacuum_curve(const GrhState& init, const PrimitiveState& nonvac, Side side, double sbar) {
    validate(nonvac);
    if (!(nonvac.rho > 0)) throw Error("vacuum curve: non-vacuum side has zero density");
    if (!(init.m > 0)) throw Error("vacuum curve: initial mass must be positive");
    if (sbar > 0) throw Error("vacuum curve: sbar must be <= 0");
    if (sbar == 0) {
        GrhState g = init;
        g.sbar = 0;
        return g;
    }
    const Velocity2 Us = nonvac.velocity();
    const double rho = nonvac.rho;
    const double B0 = bracket3(Us, init.udelta, init.xi);
    const double b0 = side == Side::Right ? B0 : -B0;
    if (!(b0 < 0)) throw Error("vacuum curve: entropy precondition violated on the stated side");
    const double es = std::exp(sbar);
    const double m0 = init.m;
    const double rad = m0 * m0 - 2 * rho * m0 * b0 * (1 / es - 1);
    if (rad < 0) throw Error("vacuum curve: negative radicand");
    GrhState g;
    g.sbar = sbar;
    g.m = std::sqrt(rad) * es;
    const Velocity2 dU0 = init.udelta - Us;
    g.udelta = Us + m0 * dU0 * es / g.m;
    g.xi = Us + es * (init.xi - Us) - dU0 / (rho * b0) * (g.m - m0 * es);
    const double e = Us.squaredNorm() / 2 + nonvac.H / rho;
    g.n = (init.udelta.squaredNorm() / 2 * m0 + init.n - e * m0) * es +
          (e - g.udelta.squaredNorm() / 2) * g.m;
    return g;
}

GrhState merge(const Weighted& a, const Weighted& b, const Point2& at) {
    if (a.m < 0 || b.m < 0) throw Error("merge: negative mass");
    GrhState g;
    g.sbar = 0;
    g.xi = at;
    g.m = a.m + b.m;
    g.n = a.n + b.n;
    if (b.m == 0) {
        g.udelta = a.u;
    } else if (a.m == 0) {
        g.udelta = b.u;
    } else {
        g.udelta = (a.m * a.u + b.m * b.u) / g.m;
    }
    if (g.m == 0 && a.u != b.u) throw Error("merge: both masses zero with distinct velocities");
    return g;
}

namespace {

// Bisection on [a, b] where g(a) and g(b) differ in sign; runs to double resolution.
template <typename G>
double bisect(const G& g, double a, double b, double ga) {
    while (true) {
        const double c = (a + b) / 2;
        if (c <= a || c >= b) break;
        const double gc = g(c);
        if (gc == 0) return c;
        if ((gc < 0) == (ga < 0)) {
            a = c;
            ga = gc;
        } else {
            b = c;
        }
    }
    return (a + b) / 2;
}

} // namespace

double find_crossing(const CurveFn& curve, Axis axis, double target, double sbar_lo, double scan_step) {
    const int k = axis == Axis::Xi ? 0 : 1;
    auto g = [&](double s) { return curve(s)(k) - target; };
    double sp = 0, gp = g(0);
    if (gp == 0) return 0;
    if (!(sbar_lo < 0) || !(scan_step > 0)) throw Error("find_crossing: empty search interval");
    const long nsteps = static_cast<long>(std::ceil(-sbar_lo / scan_step));
    for (long i = 1; i <= nsteps; ++i) {
        const double s = i == nsteps ? sbar_lo : -static_cast<double>(i) * scan_step;
        const double gs = g(s);
        if (!std::isfinite(gs)) throw Error("find_crossing: non-finite curve value");
        if (gs == 0) return s;
        if ((gs < 0) != (gp < 0)) return bisect(g, s, sp, gs);
        sp = s;
        gp = gs;
    }
    throw Error("find_crossing: no sign change in [" + std::to_string(sbar_lo) + ", 0]");
}

double find_crossing(const Trajectory& t, Axis axis, double target) {
    const int k = axis == Axis::Xi ? 0 : 1;
    const auto& S = t.samples;
    if (S.empty()) throw Error("find_crossing: empty trajectory");
    auto g = [&](double s) { return t.xi_at(s)(k) - target; };
    double gp = S[0].xi(k) - target;
    if (gp == 0) return S[0].sbar;
    for (size_t i = 1; i < S.size(); ++i) {
        const double gs = S[i].xi(k) - target;
        if (gs == 0) return S[i].sbar;
        if ((gs < 0) != (gp < 0)) return bisect(g, S[i].sbar, S[i - 1].sbar, gs);
        gp = gs;
    }
    throw Error("find_crossing: trajectory does not reach the target line");
}

LemmaLimits lemma_limits(const SidePair& sides, const GrhState& init, double collinear_tol) {
    const PrimitiveState& L = sides.left;
    const PrimitiveState& R = sides.right;
    LemmaLimits out;
    if (L.rho <= 0 && R.rho <= 0) throw Error("lemma limits: both sides are vacuum");
    if (L.rho <= 0 || R.rho <= 0) {
        const PrimitiveState& s = L.rho > 0 ? L : R;
        out.kind = LemmaKind::VacuumSide;
        out.m = 0;
        out.n = 0;
        out.xi = s.velocity();
        out.udelta = s.velocity();
        return out;
    }
    const Velocity2 UL = L.velocity(), UR = R.velocity();
    const Velocity2 Ustar = weighted_avg_velocity(L.rho, UL, R.rho, UR);
    const double bxi = bracket3(UL, UR, init.xi);
    const double bu = bracket3(UL, UR, init.udelta);
    const double scale = std::max(1.0, (UR - UL).norm() * (init.udelta - UL).norm());
    out.xi = Ustar;
    out.udelta = Ustar;
    if (std::abs(bu) <= collinear_tol * scale) {
        out.kind = LemmaKind::Collinear;
        const double sl = std::sqrt(L.rho), sr = std::sqrt(R.rho);
        const double us2 = Ustar.squaredNorm();
        out.m = std::sqrt(L.rho * R.rho) * bxi;
        out.n = bxi / (sl + sr) *
                (sl * (R.rho / 2 * UR.squaredNorm() + R.H - R.rho / 2 * us2) +
                 sr * (L.rho / 2 * UL.squaredNorm() + L.H - L.rho / 2 * us2));
        return out;
    }
    if ((bu > 0) == (bxi > 0)) {
        out.kind = LemmaKind::SameSide;
        return out;
    }
    out.kind = LemmaKind::OppositeSide;
    out.entropy_violation_expected = true;
    return out;
}

} // namespace presshock
