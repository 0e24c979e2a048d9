#pragma once

#include "mtplan/buchi.hpp"
#include "mtplan/product.hpp"
#include "mtplan/run.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

struct BaselineResult {
    Run run;
    std::size_t product_states = 0;
    std::size_t product_edges = 0;
    std::size_t accepting_states = 0;
    std::size_t cycle_searches = 0;
};

/// Reference planner over the explicit product. Computes, for every reachable
/// accepting product state f, the cheapest cycle through f, and returns the
/// cheapest one overall. Ties go to the smaller prefix cost, then to the
/// smaller state. Throws Unsatisfiable if no accepting cycle is reachable and
/// BudgetExceeded if the budget runs out.
BaselineResult baseline_solve(const GridWorkspace& w, const BuchiAutomaton& b, const Budget& budget = {});

} // namespace mtplan
