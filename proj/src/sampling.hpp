#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "presshock/riemann.hpp"

namespace presshock::detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// n samples uniform in sbar over [sbar_end, 0], both ends included.
inline std::vector<GrhState> sample_uniform(const std::function<GrhState(double)>& f, double sbar_end, int n) {
    std::vector<GrhState> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double s = i == n - 1 ? sbar_end : sbar_end * static_cast<double>(i) / (n - 1);
        out.push_back(f(s));
    }
    return out;
}

inline WaveSegment curve_segment(const std::string& label, SegmentKind kind, const std::vector<GrhState>& s,
                                 int a, int b) {
    WaveSegment w;
    w.kind = kind;
    w.label = label;
    w.curve = true;
    w.side_a = a;
    w.side_b = b;
    for (const auto& g : s) {
        w.points.push_back(g.xi);
        w.udelta.push_back(g.udelta);
        w.m.push_back(g.m);
        w.n.push_back(g.n);
    }
    return w;
}

inline WaveSegment delta_segment(const std::string& label, const DeltaShockParams& p, const Point2& from,
                                 const Point2& to, int a, int b) {
    WaveSegment w;
    w.kind = SegmentKind::DeltaTwoState;
    w.label = label;
    w.side_a = a;
    w.side_b = b;
    w.points = {from, to};
    w.udelta = {p.udelta, p.udelta};
    w.m = {p.m, p.m};
    w.n = {p.n, p.n};
    return w;
}

inline WaveSegment contact_segment(const std::string& label, const Point2& from, const Point2& to, int a, int b) {
    WaveSegment w;
    w.kind = SegmentKind::Contact;
    w.label = label;
    w.side_a = a;
    w.side_b = b;
    w.points = {from, to};
    return w;
}

} // namespace presshock::detail
