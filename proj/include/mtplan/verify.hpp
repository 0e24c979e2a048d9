#pragma once

#include <string>
#include <vector>

#include "mtplan/buchi.hpp"
#include "mtplan/run.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// A failed check. `step` indexes prefix steps first, then suffix steps
/// (suffix step k is prefix.size() + k).
struct Violation {
    std::size_t step = 0;
    std::string reason;
};

struct VerifyReport {
    /// Certificate and re-simulation both pass.
    bool accepted = false;
    /// The run's own automaton annotations form an accepting lasso.
    bool certificate_ok = false;
    /// The label trace prefix . suffix^omega is accepted, ignoring annotations.
    bool trace_accepted = false;
    long prefix_cost = 0;
    long suffix_cost = 0;
    std::vector<Violation> violations;
    /// Steps where two robots share a cell or swap cells; informational only.
    std::vector<std::size_t> collision_steps;
};

/// Audits a run against the workspace and automaton. Never throws on bad
/// runs; every finding lands in the report.
VerifyReport check_run(const Run& run, const GridWorkspace& w, const BuchiAutomaton& b);

} // namespace mtplan
