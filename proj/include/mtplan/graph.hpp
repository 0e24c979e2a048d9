#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mtplan {

/// Compressed adjacency: successors of v are target[offset[v] .. offset[v+1]).
struct CsrGraph {
    std::vector<std::size_t> offset{0};
    std::vector<std::int32_t> target;

    std::size_t node_count() const { return offset.size() - 1; }
    std::size_t edge_count() const { return target.size(); }
};

/// Strongly connected components (iterative Tarjan). Returns the component id
/// of every node; ids are assigned in reverse topological order.
std::vector<std::int32_t> strongly_connected_components(const CsrGraph& g, std::int32_t& component_count);

/// Nodes reachable from `roots`.
std::vector<bool> reachable_from(const CsrGraph& g, const std::vector<std::int32_t>& roots);

/// Reverses every edge.
CsrGraph transpose(const CsrGraph& g);

} // namespace mtplan
