#include <cmath>
#include <cstdio>

#include "presshock/riemann.hpp"

namespace presshock {

void validate(const RiemannData& d) {
    validate(d.s1);
    validate(d.s2);
    validate(d.s3);
}

std::string case_name(CaseKind k) {
    if (k == CaseKind::OutOfScope) return "OutOfScope";
    return "Case" + std::to_string(static_cast<int>(k));
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Checker {
    double tol;
    std::vector<std::string>& trace;

    bool eq(double a, double b) const { return tol > 0 ? std::abs(a - b) <= tol : a == b; }
    bool lt(double a, double b) const { return a < b && !eq(a, b); }

    // Chain of relations "a op b op c ...", op is '<' or '='.
    bool chain(const std::string& text, std::initializer_list<double> vals, const std::string& ops) {
        const double* v = vals.begin();
        bool ok = true;
        for (size_t i = 0; i < ops.size(); ++i)
            ok = ok && (ops[i] == '<' ? lt(v[i], v[i + 1]) : eq(v[i], v[i + 1]));
        std::string line = text + ":";
        for (size_t i = 0; i < vals.size(); ++i) line += (i ? (ops[i - 1] == '<' ? " < " : " = ") : " ") + fmt(v[i]);
        trace.push_back(line + (ok ? "  true" : "  false"));
        return ok;
    }

    bool sign(const std::string& text, double value, bool positive) {
        const bool ok = positive ? value > 0 : value < 0;
        trace.push_back(text + ": " + fmt(value) + (ok ? "  true" : "  false"));
        return ok;
    }
};

Classification out_of_scope(Classification c, const std::string& why) {
    c.id = {CaseKind::OutOfScope, why};
    return c;
}

Classification found(Classification c, CaseKind k) {
    c.id = {k, ""};
    return c;
}

} // namespace

Classification classify_traced(const RiemannData& d, double tol_eq) {
    Classification c;
    try {
        validate(d);
    } catch (const Error& e) {
        return out_of_scope(c, std::string("invalid state: ") + e.what());
    }
    if (d.s1.rho <= 0 || d.s2.rho <= 0 || d.s3.rho <= 0)
        return out_of_scope(c, "vacuum initial state is outside the nine cases");
    Checker k{tol_eq, c.trace};
    const double u1 = d.s1.u, u2 = d.s2.u, u3 = d.s3.u;
    const double v1 = d.s1.v, v2 = d.s2.v, v3 = d.s3.v;
    const Point2 X1 = d.s1.velocity(), X2 = d.s2.velocity(), X3 = d.s3.velocity();
    const double v23 = weighted_avg_velocity(d.s2.rho, X2, d.s3.rho, X3).y();
    const double v31 = weighted_avg_velocity(d.s1.rho, X1, d.s3.rho, X3).y();
    const double u12 = weighted_avg_velocity(d.s1.rho, X1, d.s2.rho, X2).x();
    const double u13 = weighted_avg_velocity(d.s1.rho, X1, d.s3.rho, X3).x();

    if (k.chain("v1 = v2 = v3", {v1, v2, v3}, "==")) {
        if (k.chain("u1 < u2", {u1, u2}, "<")) return found(c, CaseKind::Case7);
        return out_of_scope(c, "v1 = v2 = v3 requires u1 < u2 (Case7)");
    }
    if (!k.chain("v2 < v1", {v2, v1}, "<"))
        return out_of_scope(c, "predicate v2 < v1 fails; no case applies");

    if (k.chain("u1 < u2 < u3", {u1, u2, u3}, "<<")) {
        if (k.chain("v2 < v23 < v1 < v3", {v2, v23, v1, v3}, "<<<")) {
            if (k.chain("u12 < u13", {u12, u13}, "<")) return found(c, CaseKind::Case1);
            return out_of_scope(c, "Case1 non-interaction predicate u12 < u13 fails");
        }
        if (k.chain("v2 < v1 < v23 < v3", {v2, v1, v23, v3}, "<<<")) {
            const Point2 A(u12, v23);
            if (k.sign("[Xi1,Xi3,A] > 0 with A = (u12, v23)", bracket3(X1, X3, A), true))
                return found(c, CaseKind::Case2);
            return out_of_scope(c, "Case2 predicate [Xi1,Xi3,A] > 0 fails, value " + fmt(bracket3(X1, X3, A)));
        }
        return out_of_scope(c, "u1 < u2 < u3 but neither v2 < v23 < v1 < v3 nor v2 < v1 < v23 < v3 holds");
    }
    if (k.chain("u3 < u1 < u2", {u3, u1, u2}, "<<")) {
        if (!k.chain("v2 < v1 < v3", {v2, v1, v3}, "<<"))
            return out_of_scope(c, "Case3 predicate v2 < v1 < v3 fails");
        if (k.sign("[Xi1,Xi2,Xi3] < 0", bracket3(X1, X2, X3), false)) return found(c, CaseKind::Case3);
        return out_of_scope(c, "Case3 predicate [Xi1,Xi2,Xi3] < 0 fails");
    }
    if (k.chain("u3 < u1 = u2", {u3, u1, u2}, "<=")) {
        if (k.chain("v2 < v1 < v3", {v2, v1, v3}, "<<")) return found(c, CaseKind::Case4);
        if (k.chain("v2 < v1 = v3", {v2, v1, v3}, "<=")) return found(c, CaseKind::Case8);
        return out_of_scope(c, "u3 < u1 = u2 but neither v2 < v1 < v3 nor v2 < v1 = v3 holds");
    }
    if (k.chain("u1 = u2 < u3", {u1, u2, u3}, "=<")) {
        if (k.chain("v2 < v23 < v1 < v3", {v2, v23, v1, v3}, "<<<")) return found(c, CaseKind::Case5);
        if (k.chain("v2 < v1 < v23 < v3", {v2, v1, v23, v3}, "<<<")) {
            if (k.chain("v23 < v31", {v23, v31}, "<")) return found(c, CaseKind::Case6);
            return out_of_scope(c, "Case6 predicate v23 < v31 fails");
        }
        if (k.chain("v2 < v1 = v3", {v2, v1, v3}, "<=")) return found(c, CaseKind::Case9);
        return out_of_scope(c, "u1 = u2 < u3 but no v-ordering of Case5, Case6 or Case9 holds");
    }
    return out_of_scope(c, "velocity ordering matches none of u1<u2<u3, u3<u1<u2, u3<u1=u2, u1=u2<u3");
}

} // namespace presshock
