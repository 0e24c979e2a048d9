#pragma once

#include <optional>
#include <vector>

#include "mtplan/buchi.hpp"
#include "mtplan/completion.hpp"
#include "mtplan/reduced_graph.hpp"
#include "mtplan/run.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

struct MtStarOptions {
    /// Candidate cycles examined per final node before giving up on it
    /// (0 = no cap).
    std::size_t max_cycles = 10000;
    /// Search states expanded per final node or prefix search (0 = no cap).
    std::size_t max_expansions = 2000000;
    /// On budget exhaustion return the best run so far instead of throwing.
    bool anytime = false;
    bool use_cache = true;
    Budget budget;
};

struct MtStarResult {
    Run run;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;
    std::size_t finals = 0;
    std::size_t cycles_examined = 0;
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    /// Set when a cycle cap or the time budget cut the search short.
    bool incomplete = false;
};

/// Automaton states and transitions traversed by a cycle of the reduced
/// graph, including the waiting self-loops its edges allow.
struct SubAutomaton {
    std::vector<BuchiState> states;
    std::vector<BuchiEdge> edges;
};

SubAutomaton extract_buchi_from_cycle(const AbstractReducedGraph& g, const std::vector<int>& cycle);

/// One robot's view of a reduced-graph cycle.
struct RobotProjection {
    /// Cell at each node along the cycle (cells.size() == cycle.size()),
    /// starting with the source of cycle[0]; kWildcard where unknown.
    std::vector<CellId> cells;
    std::vector<BuchiState> states;
    /// The robot's share of each edge condition.
    std::vector<TransitionCondition> split;
    /// Waiting constraint per edge, if the edge allows waiting.
    std::vector<std::optional<TransitionCondition>> dwell;
    /// Wildcard on every node: the robot carries no task on this cycle.
    bool idle = false;
};

RobotProjection project_cycle(const AbstractReducedGraph& g, const std::vector<int>& cycle, std::size_t robot);

/// Per-robot segment constraints for a projection under a mode choice
/// (multi[j] selects waiting on edge j; ignored where waiting is not allowed).
std::vector<SegmentSpec> project_onto_segments(const RobotProjection& p, const std::vector<bool>& multi);

/// Pads per-robot segment arrivals to a common length and zips them into
/// joint steps. `start` holds every robot's cell before segment 0,
/// states[j] / states[j+1] the automaton state before / after segment j.
/// Shorter robots wait at their segment start if `dwell` admits it there,
/// otherwise at their first intermediate cell. Returns nullopt if neither is
/// possible.
std::optional<std::vector<RunStep>> sync_segments(const GridWorkspace& w, const GapSolver& solver,
                                                  const std::vector<CellId>& start,
                                                  const std::vector<std::vector<std::vector<CellId>>>& arrivals,
                                                  const std::vector<BuchiState>& states,
                                                  const std::vector<PropMask>& dwell_neg);

/// MT* planner. For every final node it searches closed walks of the reduced
/// graph best-first, completing each robot's path between consecutive Known
/// cells with constrained single-robot search, then looks for a prefix the
/// same way. Throws Unsatisfiable when a complete search finds no candidate,
/// and BudgetExceeded when the time budget runs out without anytime mode or
/// a search cap cuts the search before any candidate is found.
MtStarResult mtstar_solve(const GridWorkspace& w, const BuchiAutomaton& b, const MtStarOptions& options = {});

} // namespace mtplan
