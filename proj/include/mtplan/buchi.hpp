#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtplan/condition.hpp"
#include "mtplan/ltl.hpp"

namespace mtplan {

using BuchiState = int;

struct BuchiEdge {
    BuchiState from;
    TransitionCondition cond;
    BuchiState to;

    auto operator<=>(const BuchiEdge&) const = default;
};

/// State-based nondeterministic Büchi automaton with literal-conjunction
/// edge labels. Edges are kept sorted by (from, to, cond) and deduplicated;
/// inconsistent edges are dropped on construction.
class BuchiAutomaton {
public:
    BuchiAutomaton(Alphabet aps, int state_count, BuchiState initial, std::vector<bool> accepting,
                   std::vector<BuchiEdge> edges);

    const Alphabet& alphabet() const { return aps_; }
    int state_count() const { return static_cast<int>(accepting_.size()); }
    BuchiState initial() const { return initial_; }
    bool accepting(BuchiState q) const { return accepting_.at(q); }
    const std::vector<bool>& accepting_states() const { return accepting_; }

    const std::vector<BuchiEdge>& edges() const { return edges_; }
    std::span<const BuchiEdge> out(BuchiState q) const
    {
        return {edges_.data() + offset_[q], edges_.data() + offset_[q + 1]};
    }

    /// True if `cond` labels a q -> q' edge.
    bool has_edge(BuchiState q, const TransitionCondition& cond, BuchiState q2) const;

    /// Negative-condition self-loops of q, in edge order.
    std::vector<TransitionCondition> negative_self_loops(BuchiState q) const;

    /// Copy over a different alphabet (must contain every proposition used).
    BuchiAutomaton relabel(const Alphabet& target) const;

private:
    Alphabet aps_;
    BuchiState initial_;
    std::vector<bool> accepting_;
    std::vector<BuchiEdge> edges_;
    std::vector<std::size_t> offset_;
};

/// Removes states that are unreachable or cannot reach an accepting cycle,
/// drops edges dominated by a weaker parallel edge, and renumbers states in
/// breadth-first order from the initial state. An empty language yields a
/// single non-accepting initial state without edges.
BuchiAutomaton prune(const BuchiAutomaton& b);

/// Merges states with identical acceptance and outgoing behaviour.
BuchiAutomaton merge_bisimilar(const BuchiAutomaton& b);

/// Translates `f` over the alphabet of its propositions (sorted by name).
BuchiAutomaton ltl_to_buchi(const ltl::FormulaPtr& f);
BuchiAutomaton ltl_to_buchi(const ltl::FormulaPtr& f, const Alphabet& aps);

class HoaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// HOA v1 reader for state-based Büchi (or all-accepting) automata.
/// Labels are expanded to disjunctive normal form, one edge per cube.
BuchiAutomaton import_hoa(std::string_view text);
BuchiAutomaton import_hoa_file(const std::string& path);
std::string export_hoa(const BuchiAutomaton& b, std::string_view name = {});

/// Acceptance of the lasso word prefix . cycle^omega, each letter a label mask
/// over the automaton alphabet. `cycle` must be non-empty.
bool accepts_lasso(const BuchiAutomaton& b, std::span<const PropMask> prefix, std::span<const PropMask> cycle);

} // namespace mtplan
