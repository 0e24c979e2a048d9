#include "mtplan/mission.hpp"

#include <chrono>
#include <stdexcept>

#include "mtplan/baseline.hpp"
#include "mtplan/ltl.hpp"

namespace mtplan {

BuchiAutomaton mission_automaton(const GridWorkspace& w, std::string_view ltl)
{
    const auto f = ltl::parse_ltl(ltl, [&](std::string_view p) { return w.knows_proposition(p); });
    return ltl_to_buchi(f);
}

BuchiAutomaton mission_automaton_from_hoa(const GridWorkspace& w, std::string_view hoa)
{
    auto b = import_hoa(hoa);
    for (const auto& p : b.alphabet().names())
        if (!w.knows_proposition(p))
            throw HoaError("automaton uses unknown proposition '" + p + "'");
    return b;
}

std::string to_string(Algorithm a)
{
    return a == Algorithm::Baseline ? "baseline" : "mtstar";
}

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "baseline")
        return Algorithm::Baseline;
    if (name == "mtstar")
        return Algorithm::MtStar;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

PlanRecord plan_mission(const GridWorkspace& w, const BuchiAutomaton& b, Algorithm algo, const PlanOptions& options)
{
    PlanRecord r;
    r.algorithm = to_string(algo);
    r.robots = w.robot_count();
    r.automaton_states = static_cast<std::size_t>(b.state_count());
    const auto start = std::chrono::steady_clock::now();
    if (algo == Algorithm::Baseline) {
        auto res = baseline_solve(w, b, options.baseline_budget);
        r.run = std::move(res.run);
        r.graph_vertices = res.product_states;
        r.graph_edges = res.product_edges;
        r.cycles_examined = res.cycle_searches;
    } else {
        auto res = mtstar_solve(w, b, options.mtstar);
        r.run = std::move(res.run);
        r.graph_vertices = res.graph_nodes;
        r.graph_edges = res.graph_edges;
        r.cycles_examined = res.cycles_examined;
        r.incomplete = res.incomplete;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace mtplan
