#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "presshock/analysis.hpp"
#include "presshock/config.hpp"
#include "presshock/io.hpp"
#include "presshock/riemann.hpp"
#include "presshock/scheme.hpp"
#include "presshock/waves.hpp"

namespace fs = std::filesystem;
using namespace presshock;

namespace {

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.6f.txt", t);
    return buf;
}

std::string vec(const Point2& p) { return "(" + format_number(p.x()) + ", " + format_number(p.y()) + ")"; }

std::string classify_text(const RunConfig& c, bool& in_scope) {
    const auto cl = classify_traced(c.states, c.tol_eq);
    std::ostringstream os;
    os << case_name(cl.id.kind);
    if (cl.id.kind == CaseKind::OutOfScope) os << ": " << cl.id.reason;
    os << '\n';
    for (const auto& t : cl.trace) os << "  " << t << '\n';
    in_scope = cl.id.kind != CaseKind::OutOfScope;
    return os.str();
}

std::string waves_text(const RunConfig& c) {
    std::ostringstream os;
    const auto& d = c.states;
    struct Pair {
        const char* name;
        int a, b;
        Interface iface;
    };
    const Pair pairs[3] = {{"12", 1, 2, Interface::X}, {"23", 2, 3, Interface::YLeft}, {"31", 3, 1, Interface::YRight}};
    for (const auto& p : pairs) {
        try {
            DeltaShockParams w = p.a == 1   ? delta12(d.s1, d.s2)
                                 : p.a == 2 ? delta23(d.s2, d.s3)
                                            : delta31(d.s3, d.s1);
            os << "delta" << p.name << ": " << (w.orientation == Orientation::Vertical ? "xi" : "eta") << " = "
               << format_number(w.position) << ", u_delta = " << vec(w.udelta) << ", m = " << format_number(w.m)
               << ", n = " << format_number(w.n) << '\n';
        } catch (const NotADeltaShock& e) {
            if (e.reason == NotADeltaShock::Reason::VacuumFan) {
                os << "wave" << p.name << ": vacuum fan (" << e.what() << ")\n";
                continue;
            }
            const auto cl = contact_line(d.state(p.a), d.state(p.b), p.iface);
            os << "J" << p.name << ": through " << vec(cl.through) << ", direction " << vec(cl.direction)
               << ", sigma = " << format_number(cl.sigma) << (cl.degenerate ? ", degenerate" : "") << '\n';
        }
    }
    return os.str();
}

Skeleton make_skeleton(const RunConfig& c, const std::string& force) {
    SkeletonOptions o;
    o.tol_fp = c.tol_fp;
    CaseKind k = classify(c.states, c.tol_eq).kind;
    if (!force.empty()) {
        bool found = false;
        for (int i = 1; i <= 9; ++i)
            if (case_name(static_cast<CaseKind>(i)) == force) {
                k = static_cast<CaseKind>(i);
                found = true;
            }
        if (!found) throw CLI::ValidationError("--force", "expected Case1..Case9, got " + force);
        o.force = true;
    }
    return build_skeleton(c.states, k, o);
}

std::string out_dir(const RunConfig& c, const std::string& override_dir) {
    const std::string dir = override_dir.empty() ? c.output : override_dir;
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> simulate(const RunConfig& c, const std::string& dir, int threads, RunResult* keep) {
    SchemeParams p = c.scheme();
    if (threads >= 0) p.threads = threads;
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r = run(c.states, c.grid, p, c.t_end, c.snapshots(), c.with_energy);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::string> files;
    for (const auto& s : r.snapshots) {
        std::ostringstream os;
        write_snapshot(os, s);
        const std::string path = (fs::path(dir) / snapshot_name(s.time)).string();
        write_file(path, os.str());
        files.push_back(path);
    }
    const auto last = totals(r.snapshots.back());
    std::fprintf(stderr, "simulate: %ld steps in %.2f s, clipped %ld cells (max %.3g), guarded %ld\n", r.steps, secs,
                 static_cast<long>(r.stats.clip_count), r.stats.max_negative, static_cast<long>(r.stats.guarded_cells));
    const Eigen::Array4d bal = last + r.stats.outflow + r.stats.clipped - r.initial_totals;
    for (int k = 0; k < 3; ++k)
        std::fprintf(stderr, "  balance[%d] = %.3e (initial %.6g)\n", k, bal(k), r.initial_totals(k));
    if (keep) *keep = std::move(r);
    return files;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-state Riemann problems for the 2-D pressureless Euler system"};
    app.require_subcommand(1);
    std::string config, output, force, snapshot, skeleton_path;
    int threads = -1;
    double tol_eq = -1;

    auto* cls = app.add_subcommand("classify", "Print the case and the predicate trace");
    cls->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    cls->add_option("--tol-eq", tol_eq, "Equality tolerance for velocity comparisons");

    auto* wav = app.add_subcommand("waves", "Print exterior wave parameters");
    wav->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

    auto* skel = app.add_subcommand("skeleton", "Write the analytic wave skeleton");
    skel->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    skel->add_option("-o,--output", output, "Skeleton file (default <output>/skeleton.txt)");
    skel->add_option("--force", force, "Build this case regardless of the classifier (Case1..Case9)");

    auto* sim = app.add_subcommand("simulate", "Run the central-upwind scheme and write snapshots");
    sim->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    sim->add_option("-o,--output", output, "Output directory (default from config)");
    sim->add_option("--threads", threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);

    int left = 1, right = 2;
    std::vector<double> xi0, u0;
    double m0 = 0, n0 = 0, sbar_min = -10, step_h = -1e-3;
    auto* grh = app.add_subcommand("grh-curve", "Integrate one delta-shock trajectory");
    grh->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    grh->add_option("--left", left, "Left state index (0 = vacuum)")->check(CLI::Range(0, 3));
    grh->add_option("--right", right, "Right state index (0 = vacuum)")->check(CLI::Range(0, 3));
    grh->add_option("--xi", xi0, "Initial position xi,eta")->required()->expected(2)->delimiter(',');
    grh->add_option("--udelta", u0, "Initial velocity u,v")->required()->expected(2)->delimiter(',');
    grh->add_option("--m", m0, "Initial mass weight")->required();
    grh->add_option("--n", n0, "Initial energy weight");
    grh->add_option("--sbar-min", sbar_min, "Stop at this sbar");
    grh->add_option("--step", step_h, "RK4 step (negative)");
    grh->add_option("-o,--output", output, "Trajectory file (default stdout)");

    auto* cmp = app.add_subcommand("compare", "Compare a snapshot with a skeleton");
    cmp->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    cmp->add_option("--snapshot", snapshot, "Snapshot file")->required()->check(CLI::ExistingFile);
    cmp->add_option("--skeleton", skeleton_path, "Skeleton file")->required()->check(CLI::ExistingFile);
    cmp->add_option("-o,--output", output, "Report file (default stdout)");

    auto* all = app.add_subcommand("all", "Classify, build the skeleton, simulate and compare");
    all->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    all->add_option("-o,--output", output, "Output directory (default from config)");
    all->add_option("--threads", threads, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig c = load_config(config);
        if (tol_eq >= 0) c.tol_eq = tol_eq;
        bool in_scope = false;
        if (*cls) {
            std::cout << classify_text(c, in_scope);
        } else if (*wav) {
            std::cout << waves_text(c);
        } else if (*skel) {
            const Skeleton sk = make_skeleton(c, force);
            const std::string path = output.empty() ? (fs::path(out_dir(c, "")) / "skeleton.txt").string() : output;
            std::ostringstream os;
            write_skeleton(os, sk);
            write_file(path, os.str());
            std::cout << case_name(sk.id.kind) << ": " << sk.segments.size() << " segments, "
                      << sk.vacuum_regions.size() << " vacuum regions -> " << path << '\n';
        } else if (*sim) {
            for (const auto& f : simulate(c, out_dir(c, output), threads, nullptr)) std::cout << f << '\n';
        } else if (*grh) {
            auto side = [&](int k) { return k == 0 ? PrimitiveState{} : c.states.state(k); };
            GrhState g;
            g.xi = Point2(xi0[0], xi0[1]);
            g.udelta = Velocity2(u0[0], u0[1]);
            g.m = m0;
            g.n = n0;
            const Trajectory t = integrate(g, {side(left), side(right)}, {EventSpec::entropy()}, sbar_min, step_h);
            std::ostringstream os;
            write_trajectory(os, t.samples);
            if (output.empty()) std::cout << os.str();
            else write_file(output, os.str());
            const char* kinds[] = {"crossed-horizontal", "crossed-vertical", "entropy-violated", "reached-sbar-min",
                                   "approached-point"};
            std::cerr << "event: " << kinds[static_cast<int>(t.event.kind)] << " at sbar = "
                      << format_number(t.event.sbar_at) << '\n';
        } else if (*cmp) {
            std::istringstream ss(read_file(snapshot)), ks(read_file(skeleton_path));
            const GridField f = read_snapshot(ss);
            const Skeleton sk = read_skeleton(ks);
            std::ostringstream os;
            write_report(os, to_report(compare(f, sk, compare_params_for(c.states))));
            if (output.empty()) std::cout << os.str();
            else write_file(output, os.str());
        } else if (*all) {
            const std::string dir = out_dir(c, output);
            const std::string ctext = classify_text(c, in_scope);
            write_file((fs::path(dir) / "classify.txt").string(), ctext);
            std::cout << ctext;
            const std::string wtext = waves_text(c);
            write_file((fs::path(dir) / "waves.txt").string(), wtext);
            std::cout << wtext;
            Skeleton sk;
            sk.id = classify(c.states, c.tol_eq);
            if (in_scope) sk = make_skeleton(c, "");
            else std::cout << "skeleton: none\n";
            {
                std::ostringstream os;
                write_skeleton(os, sk);
                write_file((fs::path(dir) / "skeleton.txt").string(), os.str());
            }
            RunResult r;
            simulate(c, dir, threads, &r);
            Report rep;
            rep.emplace_back("case", case_name(sk.id.kind));
            for (auto& kv : to_report(compare(r.snapshots.back(), sk, compare_params_for(c.states))))
                rep.push_back(kv);
            std::ostringstream os;
            write_report(os, rep);
            write_file((fs::path(dir) / "report.txt").string(), os.str());
            std::cout << os.str();
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
