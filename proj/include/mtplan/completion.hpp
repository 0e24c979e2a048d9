#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mtplan/workspace.hpp"

namespace mtplan {

/// One automaton transition as seen by a single robot: the arrival cell must
/// avoid `arrive_neg`; when `multi_step` is set the robot first makes at
/// least one move into cells avoiding `dwell_neg`, otherwise it makes
/// exactly one move.
struct SegmentSpec {
    PropMask arrive_neg = 0;
    PropMask dwell_neg = 0;
    bool multi_step = false;

    auto operator<=>(const SegmentSpec&) const = default;
};

/// Path of one robot across consecutive segments.
struct GapPath {
    long cost = 0;
    /// arrivals[j] lists the cells entered during segment j; the last entry
    /// is the arrival that fires the segment's transition.
    std::vector<std::vector<CellId>> arrivals;
};

/// Cheapest constrained single-robot paths, found with A* (Manhattan
/// heuristic to a fixed target) and optionally memoized.
class GapSolver {
public:
    GapSolver(const GridWorkspace& w, const Labeling& labels, bool use_cache = true);

    /// From `source`, cross `segments` and end on `target`. With
    /// `target == kWildcard`-style free ends, pass `targets` instead: any cell
    /// flagged true is acceptable (results for such queries are not cached).
    std::optional<GapPath> solve(std::size_t robot, CellId source, const std::vector<SegmentSpec>& segments,
                                 CellId target, const std::vector<bool>* targets = nullptr);

    bool admits(std::size_t robot, CellId c, PropMask neg) const { return (labels_.mask(robot, c) & neg) == 0; }

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    std::size_t expansions() const { return expansions_; }

private:
    std::optional<GapPath> search(std::size_t robot, CellId source, const std::vector<SegmentSpec>& segments,
                                  CellId target, const std::vector<bool>* targets);

    const GridWorkspace& w_;
    const Labeling& labels_;
    bool use_cache_;
    using Key = std::tuple<std::size_t, CellId, CellId, std::vector<SegmentSpec>>;
    std::map<Key, std::optional<GapPath>> cache_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    std::size_t expansions_ = 0;
    std::vector<long> g_;
    std::vector<std::int64_t> parent_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t round_ = 0;
};

/// Unconstrained shortest move counts from one cell (-1 where unreachable).
std::vector<int> grid_distances(const GridWorkspace& w, CellId from);

} // namespace mtplan
