#pragma once

#include <optional>
#include <vector>

#include "mtplan/buchi.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// Marks a robot whose cell is not fixed by an abstract state.
inline constexpr CellId kWildcard = -1;

/// Per-robot placement plus the literals that robot is responsible for.
struct AbstractConfig {
    std::vector<CellId> cells;                      // kWildcard for untasked robots
    std::vector<TransitionCondition> obligations;   // per robot

    auto operator<=>(const AbstractConfig&) const = default;
};

/// Abstract neighbour set of a positive condition: every total assignment of
/// its positive propositions to robots, and every choice of cells where each
/// tasked robot satisfies its share plus all negative literals. Untasked
/// robots stay Wildcard. Sorted and deduplicated.
std::vector<AbstractConfig> abstract_distant_neighbours(const GridWorkspace& w, const Labeling& labels,
                                                        const TransitionCondition& cond, std::size_t robots);

/// Number of concrete joint states covered by `configs`: each Wildcard robot
/// ranges over the free cells meeting its obligations.
std::size_t concretization_count(const GridWorkspace& w, const Labeling& labels,
                                 const std::vector<AbstractConfig>& configs);

struct AbstractNode {
    std::vector<CellId> cells;
    BuchiState q = 0;
    std::vector<TransitionCondition> obligations;

    bool all_wildcard() const;
    bool known(std::size_t robot) const { return cells[robot] != kWildcard; }
};

struct AbstractEdge {
    int from = 0;
    int to = 0;
    /// Automaton condition satisfied by the joint label on arrival.
    TransitionCondition cond;
    /// Negative self-loop of the source state the robots may wait under
    /// before the arriving step. Without it the edge is a single joint move.
    std::optional<TransitionCondition> dwell;
    /// Endpoints are joint neighbours (no waiting allowed in between).
    bool neighbour = true;
};

/// Abstract reduced graph: nodes mix Known cells and Wildcards, edges defer
/// path realization to constrained single-robot search.
class AbstractReducedGraph {
public:
    AbstractReducedGraph(const GridWorkspace& w, const BuchiAutomaton& b);

    const std::vector<AbstractNode>& nodes() const { return nodes_; }
    const std::vector<AbstractEdge>& edges() const { return edges_; }
    const std::vector<int>& out(int node) const { return out_[node]; }
    int initial() const { return 0; }
    /// Nodes in an accepting automaton state with at least one incoming edge.
    const std::vector<int>& finals() const { return finals_; }

    /// (node, loop) pairs where the node's automaton state is accepting and
    /// has the negative self-loop `loop`: the robots can settle there and
    /// repeat the loop forever at no cost.
    const std::vector<std::pair<int, TransitionCondition>>& stationary() const { return stationary_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

private:
    std::vector<AbstractNode> nodes_;
    std::vector<AbstractEdge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<int> finals_;
    std::vector<std::pair<int, TransitionCondition>> stationary_;
};

} // namespace mtplan
