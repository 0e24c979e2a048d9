// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mtplan/baseline.hpp"
#include "mtplan/mission.hpp"
#include "mtplan/mtstar.hpp"
#include "mtplan/plan_record.hpp"
#include "mtplan/reduced_graph.hpp"
#include "mtplan/verify.hpp"
#include "support.hpp"

using namespace mtplan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Everything a planner call produced, for verification and rerun comparison.
struct Outcome {
    bool solved = false;
    Run run;
    std::size_t vertices = 0;
    std::size_t edges = 0;
};

struct Audit {
    std::size_t runs = 0;
    std::size_t accepted = 0;
    std::size_t trace_mismatch = 0;
    std::string first_failure;
};

// Canonical text of all outcomes of one pass over criteria 1-4.
struct Transcript {
    std::ostringstream text;
    Audit audit;

    void record(const std::string& tag, const Outcome& o, const GridWorkspace& w, const BuchiAutomaton& b)
    {
        text << tag << ' ';
        if (!o.solved) {
            text << "unsat\n";
            return;
        }
        PlanRecord r;
        r.run = o.run;
        r.robots = w.robot_count();
        r.graph_vertices = o.vertices;
        r.graph_edges = o.edges;
        text << write_record(r);

        const auto report = check_run(o.run, w, b);
        ++audit.runs;
        audit.accepted += report.accepted;
        if (report.trace_accepted != report.certificate_ok)
            ++audit.trace_mismatch;
        if (!report.accepted && audit.first_failure.empty())
            audit.first_failure = tag + ": " + (report.violations.empty() ? "rejected" : report.violations[0].reason);
    }
};

Outcome run_baseline(const GridWorkspace& w, const BuchiAutomaton& b)
{
    Outcome o;
    try {
        auto r = baseline_solve(w, b);
        o = {true, std::move(r.run), r.product_states, r.product_edges};
    } catch (const Unsatisfiable&) {
    }
    return o;
}

Outcome run_mtstar(const GridWorkspace& w, const BuchiAutomaton& b, bool cache)
{
    MtStarOptions options;
    options.use_cache = cache;
    Outcome o;
    try {
        auto r = mtstar_solve(w, b, options);
        o = {true, std::move(r.run), r.graph_nodes, r.graph_edges};
    } catch (const Unsatisfiable&) {
    }
    return o;
}

GridWorkspace gather(int side) { return load_workspace_file(support::fixture("gather" + std::to_string(side) + ".grid")); }

Verdict random_agreement(Transcript& t, bool cache)
{
    const auto t0 = Clock::now();
    int instances = 0, unsat = 0, mismatches = 0, inconsistent = 0;
    std::string first;
    for (unsigned seed = 1; instances < 100; ++seed) {
        const auto w = support::random_workspace(seed, 6);
        if (!w)
            continue;
        ++instances;
        for (std::size_t k = 0; k < support::random_missions().size(); ++k) {
            const auto b = mission_automaton(*w, support::random_missions()[k]);
            const auto base = run_baseline(*w, b);
            const auto mt = run_mtstar(*w, b, cache);
            const std::string tag = "random " + std::to_string(seed) + "/" + std::to_string(k);
            t.record(tag + " baseline", base, *w, b);
            t.record(tag + " mtstar", mt, *w, b);
            if (base.solved != mt.solved) {
                ++inconsistent;
                continue;
            }
            if (!base.solved) {
                ++unsat;
                continue;
            }
            if (base.run.suffix_cost != mt.run.suffix_cost) {
                ++mismatches;
                if (first.empty())
                    first = tag + " baseline " + std::to_string(base.run.suffix_cost) + " mtstar "
                            + std::to_string(mt.run.suffix_cost);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << instances << " workspaces x " << support::random_missions().size() << " missions, " << unsat
      << " unsatisfiable, " << mismatches << " cost mismatches, " << inconsistent << " unsat disagreements, "
      << std::fixed << std::setprecision(2) << elapsed << " s";
    if (!first.empty())
        d << "; first mismatch " << first;
    return {mismatches == 0 && inconsistent == 0 && elapsed < 300, d.str()};
}

Verdict graph_invariance(Transcript& t, bool cache)
{
    std::ostringstream d;
    std::set<std::pair<std::size_t, std::size_t>> sizes;
    bool solved = true;
    for (int side : {9, 15, 30}) {
        const auto w = gather(side);
        const auto b = mission_automaton(w, support::mission("phi2"));
        const auto o = run_mtstar(w, b, cache);
        t.record("phi2 " + std::to_string(side), o, w, b);
        solved = solved && o.solved;
        sizes.insert({o.vertices, o.edges});
        d << side << "x" << side << ": |S_r|=" << o.vertices << " |E_r|=" << o.edges << "; ";
    }
    d << (sizes.size() == 1 ? "identical" : "differ");
    return {solved && sizes.size() == 1, d.str()};
}

Verdict warehouse(Transcript& t, bool cache)
{
    const auto t0 = Clock::now();
    const auto w = load_workspace_file(support::fixture("warehouse.grid"));
    const auto b = mission_automaton(w, "G(F P1 & F P2 & !P3)");
    const auto base = run_baseline(w, b);
    const auto mt = run_mtstar(w, b, cache);
    const double elapsed = seconds_since(t0);
    t.record("warehouse baseline", base, w, b);
    t.record("warehouse mtstar", mt, w, b);
    bool pass = elapsed < 5;
    std::ostringstream d;
    for (const auto* o : {&base, &mt}) {
        const bool valid = o->solved && check_run(o->run, w, b).accepted;
        pass = pass && valid && o->run.suffix_cost == 0;
        d << (o == &base ? "baseline" : "mtstar") << " suffix "
          << (o->solved ? std::to_string(o->run.suffix_cost) : "unsat") << " prefix "
          << (o->solved ? std::to_string(o->run.prefix_cost) : "-") << (valid ? " valid" : " INVALID") << "; ";
    }
    d << std::fixed << std::setprecision(2) << elapsed << " s";
    return {pass, d.str()};
}

Verdict mission_suite(Transcript& t, bool cache)
{
    const long reference[] = {12, 24, 24, 26, 26};
    const auto w = gather(9);
    bool pass = true;
    std::ostringstream d;
    for (int k = 1; k <= 5; ++k) {
        const std::string name = "phi" + std::to_string(k);
        const auto b = mission_automaton(w, support::mission(name));
        const auto base = run_baseline(w, b);
        const auto mt = run_mtstar(w, b, cache);
        t.record(name + " baseline", base, w, b);
        t.record(name + " mtstar", mt, w, b);
        const bool agree = base.solved && mt.solved && base.run.suffix_cost == mt.run.suffix_cost;
        pass = pass && agree;
        d << name << " " << (base.solved ? std::to_string(base.run.suffix_cost) : "unsat") << "/"
          << (mt.solved ? std::to_string(mt.run.suffix_cost) : "unsat") << " (reference " << reference[k - 1]
          << (agree && mt.run.suffix_cost == reference[k - 1] ? ", matches" : ", layout-contingent") << "); ";
    }
    d << "baseline/mtstar suffix costs";
    return {pass, d.str()};
}

double median_of_three(const std::function<void()>& fn)
{
    std::vector<double> t;
    for (int k = 0; k < 3; ++k) {
        const auto t0 = Clock::now();
        fn();
        t.push_back(seconds_since(t0));
    }
    std::sort(t.begin(), t.end());
    return t[1];
}

Verdict scaling()
{
    const std::vector<int> sides{9, 15, 30, 45};
    std::vector<double> x, y;
    std::ostringstream d;
    d << std::fixed << std::setprecision(4) << "mtstar";
    for (int side : sides) {
        const auto w = gather(side);
        const auto b = mission_automaton(w, support::mission("phi2"));
        const double t = median_of_three([&] { mtstar_solve(w, b); });
        x.push_back(side);
        y.push_back(t);
        d << " " << side << ":" << t << "s";
    }

    // Least-squares line time = a + b * side.
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        ss_res += std::pow(y[k] - intercept - slope * x[k], 2);
        ss_tot += std::pow(y[k] - sy / n, 2);
    }
    const double r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1;

    // Least-squares slope of log(time) against log(side).
    double lx = 0, ly = 0, lxx = 0, lxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double a = std::log(x[k]), c = std::log(y[k]);
        lx += a;
        ly += c;
        lxx += a * a;
        lxy += a * c;
    }
    const double log_slope = (n * lxy - lx * ly) / (n * lxx - lx * lx);

    std::vector<double> base;
    for (int side : {9, 15}) {
        const auto w = gather(side);
        const auto b = mission_automaton(w, support::mission("phi2"));
        base.push_back(median_of_three([&] { baseline_solve(w, b); }));
    }
    const double base_slope = std::log(base[1] / base[0]) / std::log(15.0 / 9.0);

    d << "; R^2 " << r2 << ", log-log slope " << log_slope << "; baseline 9:" << base[0] << "s 15:" << base[1]
      << "s, slope " << base_slope;
    return {r2 >= 0.9 && log_slope <= 1.5 && base_slope > 2, d.str()};
}

Verdict abstract_set()
{
    const auto w = load_workspace_file(support::fixture("warehouse.grid"));
    const Alphabet aps({"P1", "P2", "P3"});
    const Labeling labels(w, aps);
    const auto configs = abstract_distant_neighbours(w, labels, parse_condition("P2 & !P3", aps), 2);
    const CellId a = w.id({0, 7}), b = w.id({7, 0});
    std::set<std::vector<CellId>> cells;
    for (const auto& c : configs)
        cells.insert(c.cells);
    const bool exact = configs.size() == 4
                       && cells == std::set<std::vector<CellId>>{{a, kWildcard}, {b, kWildcard}, {kWildcard, a},
                                                                 {kWildcard, b}};
    std::size_t allowed = 0;
    for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c)
        allowed += w.is_free(c) && !w.labels(c).count("P3");
    const auto count = concretization_count(w, labels, configs);
    std::ostringstream d;
    d << configs.size() << " configurations" << (exact ? " as expected" : " UNEXPECTED") << ", concretization "
      << count << " over " << allowed << " allowed cells";
    return {exact && count == 208 && allowed == 52, d.str()};
}

void report(int number, const Verdict& v, bool& all)
{
    std::cout << "criterion " << number << ": " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail << std::endl;
    all = all && v.pass;
}

} // namespace

int main()
{
    bool all = true;
    Transcript first;
    report(1, random_agreement(first, true), all);
    report(2, graph_invariance(first, true), all);
    report(3, warehouse(first, true), all);
    report(4, mission_suite(first, true), all);
    report(5, scaling(), all);

    const Audit& a = first.audit;
    std::ostringstream d;
    d << a.accepted << "/" << a.runs << " runs accepted, " << a.trace_mismatch
      << " trace/certificate disagreements";
    if (!a.first_failure.empty())
        d << "; first failure " << a.first_failure;
    report(6, {a.runs > 0 && a.accepted == a.runs && a.trace_mismatch == 0, d.str()}, all);

    report(7, abstract_set(), all);

    Transcript again, uncached;
    for (auto* t : {&again, &uncached}) {
        const bool cache = t == &again;
        random_agreement(*t, cache);
        graph_invariance(*t, cache);
        warehouse(*t, cache);
        mission_suite(*t, cache);
    }
    const auto reference = first.text.str();
    const bool same = again.text.str() == reference && uncached.text.str() == reference;
    std::ostringstream r;
    r << reference.size() << " bytes of outcomes; rerun with cache "
      << (again.text.str() == reference ? "identical" : "DIFFERS") << ", without cache "
      << (uncached.text.str() == reference ? "identical" : "DIFFERS");
    report(8, {same, r.str()}, all);
    return all ? 0 : 1;
}
