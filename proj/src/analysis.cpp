#include "presshock/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace presshock {

std::vector<CellIndex> extract_ridge(const GridField& f, double kappa, double rho_ref) {
    const Grid2D& g = f.grid;
    const double thr = kappa * rho_ref;
    auto rho = [&](int i, int j) { return f.cell(i, j)(0); };
    auto peak = [](double c, double a, double b, bool ha, bool hb) {
        if (!ha && !hb) return false;
        if ((ha && c < a) || (hb && c < b)) return false;
        return (ha && c > a) || (hb && c > b);
    };
    std::vector<CellIndex> out;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double c = rho(i, j);
            if (!(c >= thr)) continue;
            const bool hw = i > 0, he = i + 1 < g.nx, hs = j > 0, hn = j + 1 < g.ny;
            const bool px = peak(c, hw ? rho(i - 1, j) : 0, he ? rho(i + 1, j) : 0, hw, he);
            const bool py = peak(c, hs ? rho(i, j - 1) : 0, hn ? rho(i, j + 1) : 0, hs, hn);
            if (px || py) out.push_back({i, j});
        }
    return out;
}

VacuumMask vacuum_mask(const GridField& f, double eps_vac) {
    VacuumMask m;
    const Grid2D& g = f.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (f.cell(i, j)(0) <= eps_vac) m.cells.push_back({i, j});
    m.area_fraction = static_cast<double>(m.cells.size()) / (static_cast<double>(g.nx) * g.ny);
    return m;
}

CompareParams compare_params_for(const RiemannData& d) {
    CompareParams p;
    p.rho_max_initial = std::max({d.s1.rho, d.s2.rho, d.s3.rho});
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 3; ++k)
        if (d.state(k).rho > 0) lo = std::min(lo, d.state(k).rho);
    p.eps_vac = std::isfinite(lo) ? 0.02 * lo : 0;
    return p;
}

double point_polyline_distance(const Point2& p, const std::vector<Point2>& line) {
    double best = std::numeric_limits<double>::infinity();
    if (line.size() == 1) return (p - line[0]).norm();
    for (size_t k = 0; k + 1 < line.size(); ++k) {
        const Point2 a = line[k], d = line[k + 1] - a;
        const double len2 = d.squaredNorm();
        double t = len2 > 0 ? (p - a).dot(d) / len2 : 0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (p - (a + t * d)).norm());
    }
    return best;
}

bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly) {
    bool in = false;
    for (size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
        const Point2 &u = poly[a], &v = poly[b];
        if ((u.y() > p.y()) != (v.y() > p.y())) {
            const double x = u.x() + (p.y() - u.y()) * (v.x() - u.x()) / (v.y() - u.y());
            if (p.x() < x) in = !in;
        }
    }
    return in;
}

namespace {

// Infinite coordinates become far finite ones so that rays survive scaling
// and clipping.
std::vector<Point2> scaled(const std::vector<Point2>& pts, double T, double far) {
    auto coord = [&](double c) { return std::isfinite(c) ? c * T : std::copysign(far, c); };
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& q : pts) out.emplace_back(coord(q.x()), coord(q.y()));
    return out;
}

// Liang-Barsky clip of segment a-b to the box; false if outside.
bool clip(Point2& a, Point2& b, double x0, double x1, double y0, double y1) {
    double t0 = 0, t1 = 1;
    const Point2 d = b - a;
    const double pv[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double qv[4] = {a.x() - x0, x1 - a.x(), a.y() - y0, y1 - a.y()};
    for (int k = 0; k < 4; ++k) {
        if (pv[k] == 0) {
            if (qv[k] < 0) return false;
            continue;
        }
        const double r = qv[k] / pv[k];
        if (pv[k] < 0) t0 = std::max(t0, r);
        else t1 = std::min(t1, r);
        if (t0 > t1) return false;
    }
    const Point2 a0 = a;
    a = a0 + t0 * d;
    b = a0 + t1 * d;
    return true;
}

double polygon_boundary_distance(const Point2& p, const std::vector<Point2>& poly) {
    std::vector<Point2> closed = poly;
    if (!poly.empty()) closed.push_back(poly.front());
    return point_polyline_distance(p, closed);
}

} // namespace

CompareReport compare(const GridField& f, const Skeleton& sk, const CompareParams& p) {
    const Grid2D& g = f.grid;
    const double T = f.time;
    if (!(T > 0)) throw Error("compare: snapshot time must be positive");
    CompareReport r;
    r.time = T;
    r.dx = g.dx();
    const double h = std::max(g.dx(), g.dy());
    const double far = 1e3 * std::max({std::abs(g.xmin), std::abs(g.xmax), std::abs(g.ymin), std::abs(g.ymax), 1.0});

    std::vector<std::vector<Point2>> deltas;
    std::vector<std::string> labels;
    for (const auto& s : sk.segments)
        if (s.is_delta() && s.points.size() >= 2) {
            deltas.push_back(scaled(s.points, T, far));
            labels.push_back(s.label);
        }

    const auto ridge = extract_ridge(f, p.kappa, p.rho_max_initial);
    r.ridge_cells = ridge.size();
    if (deltas.empty()) {
        r.ridge_mean_dist = r.ridge_max_dist = std::numeric_limits<double>::quiet_NaN();
        r.ridge_mean_dist_cells = r.ridge_max_dist_cells = r.ridge_mean_dist;
    } else {
        if (ridge.empty()) {
            r.infinite_distance = true;
            r.ridge_mean_dist = r.ridge_max_dist = std::numeric_limits<double>::infinity();
        } else {
            double sum = 0, mx = 0;
            for (const auto& c : ridge) {
                const Point2 x(g.xc(c.i), g.yc(c.j));
                double d = std::numeric_limits<double>::infinity();
                for (const auto& line : deltas) d = std::min(d, point_polyline_distance(x, line));
                sum += d;
                mx = std::max(mx, d);
            }
            r.ridge_mean_dist = sum / static_cast<double>(ridge.size());
            r.ridge_max_dist = mx;
        }
        r.ridge_mean_dist_cells = r.ridge_mean_dist / g.dx();
        r.ridge_max_dist_cells = r.ridge_max_dist / g.dx();
    }

    // Coverage.
    std::vector<char> is_ridge(static_cast<size_t>(g.nx) * g.ny, 0);
    for (const auto& c : ridge) is_ridge[static_cast<size_t>(c.j) * g.nx + c.i] = 1;
    const double radius = p.coverage_radius * h;
    auto covered = [&](const Point2& q) {
        const int i0 = static_cast<int>(std::floor((q.x() - radius - g.xmin) / g.dx()));
        const int i1 = static_cast<int>(std::floor((q.x() + radius - g.xmin) / g.dx()));
        const int j0 = static_cast<int>(std::floor((q.y() - radius - g.ymin) / g.dy()));
        const int j1 = static_cast<int>(std::floor((q.y() + radius - g.ymin) / g.dy()));
        for (int j = std::max(j0, 0); j <= std::min(j1, g.ny - 1); ++j)
            for (int i = std::max(i0, 0); i <= std::min(i1, g.nx - 1); ++i)
                if (is_ridge[static_cast<size_t>(j) * g.nx + i] &&
                    (Point2(g.xc(i), g.yc(j)) - q).norm() <= radius * (1 + 1e-12))
                    return true;
        return false;
    };
    const double mx0 = g.xmin + p.boundary_margin * g.dx(), mx1 = g.xmax - p.boundary_margin * g.dx();
    const double my0 = g.ymin + p.boundary_margin * g.dy(), my1 = g.ymax - p.boundary_margin * g.dy();
    const double ds = 0.5 * std::min(g.dx(), g.dy());
    double total_len = 0, total_cov = 0;
    for (size_t k = 0; k < deltas.size(); ++k) {
        SegmentCoverage sc;
        sc.label = labels[k];
        double len = 0, cov = 0;
        for (size_t e = 0; e + 1 < deltas[k].size(); ++e) {
            Point2 a = deltas[k][e], b = deltas[k][e + 1];
            if (!clip(a, b, mx0, mx1, my0, my1)) continue;
            const double L = (b - a).norm();
            if (L <= 0) continue;
            const int n = std::max(1, static_cast<int>(std::ceil(L / ds)));
            const double w = L / n;
            for (int q = 0; q < n; ++q) {
                const Point2 x = a + (q + 0.5) / n * (b - a);
                len += w;
                if (covered(x)) cov += w;
            }
        }
        sc.length = len;
        sc.coverage = len > 0 ? cov / len : 1;
        total_len += len;
        total_cov += cov;
        r.segments.push_back(sc);
    }
    r.coverage = total_len > 0 ? total_cov / total_len : 1;

    // Vacuum.
    const auto mask = vacuum_mask(f, p.eps_vac);
    r.vacuum_area_fraction = mask.area_fraction;
    std::vector<std::vector<Point2>> polys;
    for (const auto& poly : sk.vacuum_regions) {
        std::vector<Point2> s;
        for (const auto& q : poly) s.push_back(q * T);
        if (s.size() >= 3) polys.push_back(std::move(s));
    }
    r.has_vacuum_polygon = !polys.empty();
    auto inside_any = [&](const Point2& x, double margin, bool need_depth) {
        for (const auto& poly : polys) {
            const bool in = point_in_polygon(x, poly);
            if (need_depth) {
                if (in && polygon_boundary_distance(x, poly) >= margin) return true;
            } else if (in || polygon_boundary_distance(x, poly) <= margin) {
                return true;
            }
        }
        return false;
    };
    if (r.has_vacuum_polygon) {
        double sum = 0, sum_all = 0;
        std::size_t n = 0, n_all = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const Point2 x(g.xc(i), g.yc(j));
                if (!inside_any(x, 0, false)) continue;
                bool strict = false;
                for (const auto& poly : polys) strict = strict || point_in_polygon(x, poly);
                if (!strict) continue;
                sum_all += f.cell(i, j)(0);
                ++n_all;
                if (inside_any(x, p.erosion * h, true)) {
                    sum += f.cell(i, j)(0);
                    ++n;
                }
            }
        if (n > 0) {
            r.vacuum_mean_density = sum / static_cast<double>(n);
            r.vacuum_cells = n;
        } else if (n_all > 0) {
            r.vacuum_mean_density = sum_all / static_cast<double>(n_all);
            r.vacuum_cells = n_all;
        } else {
            r.vacuum_mean_density = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (!mask.cells.empty()) {
        std::size_t outside = 0;
        for (const auto& c : mask.cells)
            if (!inside_any(Point2(g.xc(c.i), g.yc(c.j)), p.dilation * h, false)) ++outside;
        r.vacuum_outside_fraction = static_cast<double>(outside) / static_cast<double>(mask.cells.size());
    }
    return r;
}

Report to_report(const CompareReport& r) {
    Report out;
    auto add = [&](const std::string& k, double v) { out.emplace_back(k, format_number(v)); };
    add("time", r.time);
    add("dx", r.dx);
    out.emplace_back("ridge_cells", std::to_string(r.ridge_cells));
    out.emplace_back("infinite_distance", r.infinite_distance ? "true" : "false");
    add("ridge_mean_dist", r.ridge_mean_dist);
    add("ridge_max_dist", r.ridge_max_dist);
    add("ridge_mean_dist_cells", r.ridge_mean_dist_cells);
    add("ridge_max_dist_cells", r.ridge_max_dist_cells);
    add("coverage", r.coverage);
    for (const auto& s : r.segments) {
        add("coverage." + s.label, s.coverage);
        add("length." + s.label, s.length);
    }
    out.emplace_back("vacuum_polygon", r.has_vacuum_polygon ? "true" : "false");
    out.emplace_back("vacuum_cells", std::to_string(r.vacuum_cells));
    add("vacuum_mean_density", r.vacuum_mean_density);
    add("vacuum_area_fraction", r.vacuum_area_fraction);
    add("vacuum_outside_fraction", r.vacuum_outside_fraction);
    return out;
}

} // namespace presshock
