#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace mtplan {

/// Directed multigraph given by its edge list; edge i runs from
/// edges[i].first to edges[i].second.
struct Digraph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Hooks for a depth-first walk over simple paths.
struct PathSearchHooks {
    /// Called with the partial edge path and a candidate next edge; return
    /// false to skip that extension.
    std::function<bool(const std::vector<int>&, int)> admit;
    /// Successor ordering key (smaller first); ties fall back to edge index.
    std::function<long(const std::vector<int>&, int)> rank;
};

struct EnumerationStats {
    std::size_t emitted = 0;
    bool truncated = false; // stopped by the cap
};

/// Enumerates every simple cycle through `root` (no repeated node except the
/// endpoints) as a sequence of edge indices starting and ending at `root`.
/// `visit` returns false to stop early. At most `cap` cycles are emitted
/// (0 means no cap).
EnumerationStats enumerate_simple_cycles(const Digraph& g, int root,
                                         const std::function<bool(const std::vector<int>&)>& visit,
                                         std::size_t cap = 0, const PathSearchHooks& hooks = {});

/// Same walk for simple paths from `source` to `target` (source != target).
EnumerationStats enumerate_simple_paths(const Digraph& g, int source, int target,
                                        const std::function<bool(const std::vector<int>&)>& visit,
                                        std::size_t cap = 0, const PathSearchHooks& hooks = {});

} // namespace mtplan
