#include "presshock/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace presshock {

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string join(std::initializer_list<double> v) {
    std::string s;
    for (double x : v) {
        if (!s.empty()) s += ' ';
        s += format_number(x);
    }
    return s;
}

bool content_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        const auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '#') continue;
        return true;
    }
    return false;
}

std::vector<double> numbers(const std::string& line, size_t expected, const char* what) {
    std::istringstream ss(line);
    std::vector<double> v;
    std::string tok;
    while (ss >> tok) {
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end) throw Error(std::string(what) + ": bad number '" + tok + "'");
        v.push_back(x);
    }
    if (expected && v.size() != expected)
        throw Error(std::string(what) + ": expected " + std::to_string(expected) + " columns, got " +
                    std::to_string(v.size()));
    return v;
}

} // namespace

void write_snapshot(std::ostream& os, const GridField& f) {
    const Grid2D& g = f.grid;
    os << "# " << g.nx << ' ' << g.ny << ' ' << join({g.xmin, g.xmax, g.ymin, g.ymax, f.time}) << ' ' << f.ncomp()
       << '\n';
    std::string row;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto c = f.cell(i, j);
            row = join({g.xc(i), g.yc(j), c(0), c(1), c(2)});
            if (f.with_energy) row += ' ' + format_number(c(3));
            os << row << '\n';
        }
}

GridField read_snapshot(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("#", 0) != 0) throw Error("snapshot: missing header");
    const auto h = numbers(line.substr(1), 8, "snapshot header");
    Grid2D g;
    g.nx = static_cast<int>(h[0]);
    g.ny = static_cast<int>(h[1]);
    g.xmin = h[2];
    g.xmax = h[3];
    g.ymin = h[4];
    g.ymax = h[5];
    const int ncomp = static_cast<int>(h[7]);
    if (ncomp != 3 && ncomp != 4) throw Error("snapshot: ncomp must be 3 or 4");
    GridField f = make_field(g, ncomp == 4);
    f.time = h[6];
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!content_line(is, line)) throw Error("snapshot: truncated");
            const auto v = numbers(line, 2 + ncomp, "snapshot row");
            for (int c = 0; c < ncomp; ++c) f.cell(i, j)(c) = v[2 + c];
        }
    fill_ghosts(f, Boundary::ZeroGradient);
    return f;
}

void write_skeleton(std::ostream& os, const Skeleton& sk) {
    os << "# " << case_name(sk.id.kind) << '\n';
    for (const auto& s : sk.segments) {
        os << segment_kind_name(s.kind) << ' ' << s.label << ' ' << s.points.size() << '\n';
        for (size_t i = 0; i < s.points.size(); ++i) {
            os << join({s.points[i].x(), s.points[i].y()});
            if (s.is_delta())
                os << ' ' << join({s.udelta[i].x(), s.udelta[i].y(), s.m[i], s.n[i]});
            os << '\n';
        }
    }
    for (const auto& poly : sk.vacuum_regions) {
        os << "vacuum vacuum " << poly.size() << '\n';
        for (const auto& p : poly) os << join({p.x(), p.y()}) << '\n';
    }
}

Skeleton read_skeleton(std::istream& is) {
    Skeleton sk;
    std::string line;
    if (is.peek() == '#') {
        std::getline(is, line);
        const std::string name = line.size() > 2 ? line.substr(2) : "";
        for (int k = 1; k <= 10; ++k)
            if (case_name(static_cast<CaseKind>(k)) == name) sk.id.kind = static_cast<CaseKind>(k);
    }
    while (content_line(is, line)) {
        std::istringstream ss(line);
        std::string kind, label;
        long n = -1;
        if (!(ss >> kind >> label >> n) || n < 0) throw Error("skeleton: bad record header '" + line + "'");
        if (kind == "vacuum") {
            std::vector<Point2> poly;
            for (long i = 0; i < n; ++i) {
                if (!content_line(is, line)) throw Error("skeleton: truncated vacuum record");
                const auto v = numbers(line, 2, "skeleton vacuum row");
                poly.emplace_back(v[0], v[1]);
            }
            sk.vacuum_regions.push_back(poly);
            continue;
        }
        WaveSegment s;
        if (kind == "contact") s.kind = SegmentKind::Contact;
        else if (kind == "delta-two-state") s.kind = SegmentKind::DeltaTwoState;
        else if (kind == "delta-vacuum-boundary") s.kind = SegmentKind::DeltaVacuumBoundary;
        else throw Error("skeleton: unknown segment kind '" + kind + "'");
        s.label = label;
        s.curve = n > 2;
        for (long i = 0; i < n; ++i) {
            if (!content_line(is, line)) throw Error("skeleton: truncated segment record");
            const auto v = numbers(line, s.is_delta() ? 6 : 2, "skeleton row");
            s.points.emplace_back(v[0], v[1]);
            if (s.is_delta()) {
                s.udelta.emplace_back(v[2], v[3]);
                s.m.push_back(v[4]);
                s.n.push_back(v[5]);
            }
        }
        sk.segments.push_back(std::move(s));
    }
    return sk;
}

void write_report(std::ostream& os, const Report& r) {
    for (const auto& [k, v] : r) os << k << " = " << v << '\n';
}

void write_trajectory(std::ostream& os, const std::vector<GrhState>& samples) {
    os << "# sbar xi eta u_delta v_delta m n\n";
    for (const auto& g : samples)
        os << join({g.sbar, g.xi.x(), g.xi.y(), g.udelta.x(), g.udelta.y(), g.m, g.n}) << '\n';
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << content;
    if (!os) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace presshock
