#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mtplan/buchi.hpp"
#include "mtplan/graph.hpp"
#include "mtplan/run.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// Joint successors of `cells`: the Cartesian product of every robot's
/// moves, enumerated with robot 0 varying slowest. Cost is the sum of the
/// individual move costs.
std::vector<std::pair<std::vector<Cell>, int>> joint_neighbours(const GridWorkspace& w, const std::vector<Cell>& cells);

/// Reachable part of the product between the joint transition system and a
/// Büchi automaton, built breadth-first from (starts, initial). Edge
/// ((s,q),(s',q')) exists iff s' is a joint successor of s and some
/// automaton edge q -> q' accepts the joint label of s'. State 0 is the
/// initial state.
class ProductGraph {
public:
    ProductGraph(const GridWorkspace& w, const BuchiAutomaton& b, const Budget& budget = {});

    std::size_t state_count() const { return q_.size(); }
    std::size_t edge_count() const { return graph_.edge_count(); }
    const CsrGraph& graph() const { return graph_; }
    std::uint8_t cost(std::size_t edge) const { return cost_[edge]; }

    BuchiState q(std::int32_t v) const { return q_[v]; }
    bool accepting(std::int32_t v) const { return accepting_[q_[v]]; }
    std::vector<CellId> cells(std::int32_t v) const;
    RunStep step(std::int32_t v) const;

    /// Index of a product state, or -1 if it is not reachable.
    std::int32_t find(const std::vector<CellId>& cells, BuchiState q) const;

private:
    std::uint64_t key(const CellId* cells, BuchiState q) const;

    const GridWorkspace* w_;
    std::size_t robots_;
    std::size_t cell_count_;
    int buchi_states_;
    std::vector<bool> accepting_;
    std::vector<CellId> cells_; // robots_ entries per state
    std::vector<BuchiState> q_;
    CsrGraph graph_;
    std::vector<std::uint8_t> cost_;
    std::unordered_map<std::uint64_t, std::int32_t> index_;
};

} // namespace mtplan
