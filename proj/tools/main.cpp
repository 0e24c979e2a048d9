// Command-line front end: plan, verify, bench, render, translate.
//
// Exit codes: 0 success, 1 usage/I-O/parse error or exhausted budget,
// 2 unsatisfiable mission or rejected plan (and cost disagreement in bench).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mtplan/bench.hpp"
#include "mtplan/ltl.hpp"
#include "mtplan/mission.hpp"
#include "mtplan/render.hpp"
#include "mtplan/verify.hpp"

using namespace mtplan;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + out);
    f << text;
}

GridWorkspace load(const std::string& path, std::size_t robots)
{
    auto w = load_workspace_file(path);
    if (robots == 0)
        return w;
    if (robots > w.robot_count())
        throw std::runtime_error("workspace declares only " + std::to_string(w.robot_count()) + " robots");
    return w.with_robots(robots);
}

BuchiAutomaton automaton(const GridWorkspace& w, const std::string& ltl, const std::string& hoa)
{
    if (!hoa.empty())
        return mission_automaton_from_hoa(w, read_file(hoa));
    // Records planned from an automaton file name it as "hoa:<path>".
    if (ltl.rfind("hoa:", 0) == 0)
        return mission_automaton_from_hoa(w, read_file(ltl.substr(4)));
    return mission_automaton(w, ltl);
}

struct PlanArgs {
    std::string workspace, ltl, algo = "mtstar", hoa, out;
    std::size_t robots = 0;
    std::size_t max_cycles = 10000;
    bool anytime = false;
    bool no_cache = false;
    unsigned seed = 0;
    double seconds = 0;
    std::size_t max_states = 0;
};

int cmd_plan(const PlanArgs& a)
{
    const auto w = load(a.workspace, a.robots);
    const auto b = automaton(w, a.ltl, a.hoa);
    PlanOptions options;
    options.mtstar.max_cycles = a.max_cycles;
    options.mtstar.anytime = a.anytime;
    options.mtstar.use_cache = !a.no_cache;
    options.mtstar.budget = {a.max_states, a.seconds};
    options.baseline_budget = {a.max_states, a.seconds};
    const Algorithm algo = parse_algorithm(a.algo);

    PlanRecord r;
    int code = 0;
    try {
        r = plan_mission(w, b, algo, options);
    } catch (const Unsatisfiable& e) {
        r.algorithm = to_string(algo);
        r.robots = w.robot_count();
        r.automaton_states = static_cast<std::size_t>(b.state_count());
        r.status = "unsatisfiable";
        r.message = e.what();
        std::cerr << "unsatisfiable: " << e.what() << '\n';
        code = 2;
    }
    r.mission = a.hoa.empty() ? a.ltl : "hoa:" + a.hoa;
    r.workspace = a.workspace;
    emit(write_record(r), a.out);
    return code;
}

struct VerifyArgs {
    std::string record, workspace, hoa;
};

int cmd_verify(const VerifyArgs& a)
{
    const auto r = read_record(read_file(a.record));
    if (r.status != "ok") {
        std::cout << "record holds no plan (" << r.status << ")\n";
        return 2;
    }
    const auto w = load(a.workspace.empty() ? r.workspace : a.workspace, r.robots);
    const auto b = automaton(w, r.mission, a.hoa);
    const auto report = check_run(r.run, w, b);
    std::cout << (report.accepted ? "accepted" : "rejected") << '\n';
    std::cout << "prefix cost " << report.prefix_cost << ", suffix cost " << report.suffix_cost << '\n';
    std::cout << "certificate " << (report.certificate_ok ? "ok" : "failed") << ", trace "
              << (report.trace_accepted ? "accepted" : "rejected") << '\n';
    for (const auto& v : report.violations)
        std::cout << "step " << v.step << ": " << v.reason << '\n';
    if (!report.collision_steps.empty()) {
        std::cout << "collisions at steps";
        for (auto k : report.collision_steps)
            std::cout << ' ' << k;
        std::cout << '\n';
    }
    return report.accepted ? 0 : 2;
}

struct BenchArgs {
    std::string suite, json;
    int repeats = 1;
    double baseline_seconds = 0, mtstar_seconds = 0;
    std::size_t baseline_states = 0;
    bool skip_baseline = false, skip_mtstar = false;
};

int cmd_bench(const BenchArgs& a)
{
    const auto suite = parse_suite(read_file(a.suite), std::filesystem::path(a.suite).parent_path().string());
    BenchOptions options;
    options.baseline = !a.skip_baseline;
    options.mtstar = !a.skip_mtstar;
    options.repeats = a.repeats;
    options.plan.baseline_budget = {a.baseline_states, a.baseline_seconds};
    options.plan.mtstar.budget.max_seconds = a.mtstar_seconds;
    const auto rows = run_bench(suite, options);
    std::cout << bench_table(rows);
    if (!a.json.empty())
        emit(bench_json(rows), a.json);
    for (const auto& r : rows)
        if (!r.costs_agree) {
            std::cerr << "planners disagree on " << r.entry.workspace << " ; " << r.entry.mission << '\n';
            return 2;
        }
    return 0;
}

struct RenderArgs {
    std::string record, workspace, format = "ascii", out;
};

int cmd_render(const RenderArgs& a)
{
    const auto r = read_record(read_file(a.record));
    const auto w = load(a.workspace.empty() ? r.workspace : a.workspace, r.robots);
    emit(a.format == "svg" ? render_svg(r, w) : render_ascii(r, w), a.out);
    return 0;
}

struct TranslateArgs {
    std::string ltl, workspace, out;
};

int cmd_translate(const TranslateArgs& a)
{
    if (!a.workspace.empty()) {
        emit(export_hoa(mission_automaton(load_workspace_file(a.workspace), a.ltl), a.ltl), a.out);
        return 0;
    }
    emit(export_hoa(ltl_to_buchi(ltl::parse_ltl(a.ltl)), a.ltl), a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-robot LTL path planner"};
    app.require_subcommand(1);

    PlanArgs plan;
    auto* p = app.add_subcommand("plan", "Plan a mission and print a plan record");
    p->add_option("--workspace", plan.workspace, "Workspace file")->required();
    p->add_option("--ltl", plan.ltl, "Mission formula");
    p->add_option("--hoa", plan.hoa, "Automaton file, bypassing translation");
    p->add_option("--algo", plan.algo, "mtstar or baseline")->check(CLI::IsMember({"mtstar", "baseline"}));
    p->add_option("--robots", plan.robots, "Use only the first N robots");
    p->add_option("--max-cycles", plan.max_cycles, "Cycles examined per final node (0 = no cap)");
    p->add_flag("--anytime", plan.anytime, "Return the best plan so far when the budget runs out");
    p->add_flag("--no-cache", plan.no_cache, "Disable path memoization");
    p->add_option("--seed", plan.seed, "Reserved");
    p->add_option("--time-limit", plan.seconds, "Wall-clock budget in seconds (0 = none)");
    p->add_option("--max-states", plan.max_states, "Product state budget for the baseline (0 = none)");
    p->add_option("--out", plan.out, "Write the record here instead of stdout");

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Check a plan record");
    v->add_option("--record", verify.record, "Plan record")->required();
    v->add_option("--workspace", verify.workspace, "Override the record's workspace path");
    v->add_option("--hoa", verify.hoa, "Automaton file instead of the record's formula");

    BenchArgs bench;
    auto* bn = app.add_subcommand("bench", "Run both planners over a suite");
    bn->add_option("--suite", bench.suite, "Suite file")->required();
    bn->add_option("--json", bench.json, "Also write machine-readable results here");
    bn->add_option("--repeats", bench.repeats, "Runs per planner; the median time is reported");
    bn->add_option("--baseline-seconds", bench.baseline_seconds, "Baseline time budget");
    bn->add_option("--baseline-states", bench.baseline_states, "Baseline product state budget");
    bn->add_option("--mtstar-seconds", bench.mtstar_seconds, "MT* time budget");
    bn->add_flag("--no-baseline", bench.skip_baseline, "Skip the baseline planner");
    bn->add_flag("--no-mtstar", bench.skip_mtstar, "Skip the MT* planner");

    RenderArgs render;
    auto* r = app.add_subcommand("render", "Draw a plan record");
    r->add_option("--record", render.record, "Plan record")->required();
    r->add_option("--workspace", render.workspace, "Override the record's workspace path");
    r->add_option("--format", render.format, "ascii or svg")->check(CLI::IsMember({"ascii", "svg"}));
    r->add_option("--out", render.out, "Output file");

    TranslateArgs translate;
    auto* t = app.add_subcommand("translate", "Print the automaton of a formula in HOA format");
    t->add_option("--ltl", translate.ltl, "Mission formula")->required();
    t->add_option("--workspace", translate.workspace, "Restrict propositions to this workspace");
    t->add_option("--out", translate.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*p) {
            if (plan.ltl.empty() == plan.hoa.empty())
                throw std::runtime_error("give exactly one of --ltl and --hoa");
            return cmd_plan(plan);
        }
        if (*v)
            return cmd_verify(verify);
        if (*bn)
            return cmd_bench(bench);
        if (*r)
            return cmd_render(render);
        return cmd_translate(translate);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
