#pragma once

#include <string>
#include <string_view>

#include "mtplan/buchi.hpp"
#include "mtplan/mtstar.hpp"
#include "mtplan/plan_record.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// Parses `ltl` against the workspace's propositions (cell and robot-scoped)
/// and translates it. Throws ltl::SyntaxError on bad input.
BuchiAutomaton mission_automaton(const GridWorkspace& w, std::string_view ltl);

/// Loads an automaton from HOA text and checks its propositions against the
/// workspace. Throws HoaError.
BuchiAutomaton mission_automaton_from_hoa(const GridWorkspace& w, std::string_view hoa);

enum class Algorithm { Baseline, MtStar };

std::string to_string(Algorithm a);
/// Accepts "baseline" and "mtstar"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

struct PlanOptions {
    MtStarOptions mtstar;
    Budget baseline_budget;
};

/// Runs one planner and packs the result. Mission and workspace text fields
/// are left for the caller. Throws Unsatisfiable or BudgetExceeded.
PlanRecord plan_mission(const GridWorkspace& w, const BuchiAutomaton& b, Algorithm algo,
                        const PlanOptions& options = {});

} // namespace mtplan
