#include "mtplan/completion.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>
#include <tuple>

namespace mtplan {

namespace {

constexpr long kInf = std::numeric_limits<long>::max();

} // namespace

GapSolver::GapSolver(const GridWorkspace& w, const Labeling& labels, bool use_cache)
    : w_(w)
    , labels_(labels)
    , use_cache_(use_cache)
{
}

std::optional<GapPath> GapSolver::solve(std::size_t robot, CellId source, const std::vector<SegmentSpec>& segments,
                                        CellId target, const std::vector<bool>* targets)
{
    if (targets || !use_cache_)
        return search(robot, source, segments, target, targets);
    Key key{robot, source, target, segments};
    if (auto it = cache_.find(key); it != cache_.end()) {
        ++hits_;
        return it->second;
    }
    ++misses_;
    auto result = search(robot, source, segments, target, nullptr);
    cache_.emplace(std::move(key), result);
    return result;
}

// States are (cell, layer, phase): layer j means segment j is in progress,
// phase 1 means at least one waiting move of that segment was made.
std::optional<GapPath> GapSolver::search(std::size_t robot, CellId source, const std::vector<SegmentSpec>& segments,
                                         CellId target, const std::vector<bool>* targets)
{
    const std::size_t cells = w_.cell_count();
    const std::size_t layers = segments.size();
    if (layers == 0) {
        const bool ok = targets ? (*targets)[source] : source == target;
        return ok ? std::optional<GapPath>(GapPath{}) : std::nullopt;
    }
    const std::size_t states = (layers + 1) * 2 * cells;
    if (g_.size() < states) {
        g_.resize(states);
        parent_.resize(states);
        stamp_.assign(states, 0);
    }
    ++round_;
    auto g_of = [&](std::size_t s) { return stamp_[s] == round_ ? g_[s] : kInf; };
    auto encode = [&](CellId c, std::size_t layer, int phase) {
        return (layer * 2 + static_cast<std::size_t>(phase)) * cells + static_cast<std::size_t>(c);
    };
    const Cell goal = target >= 0 ? w_.cell(target) : Cell{};
    auto h = [&](CellId c) -> long {
        if (target < 0)
            return 0;
        const Cell x = w_.cell(c);
        return std::abs(x.x - goal.x) + std::abs(x.y - goal.y);
    };
    auto is_goal_cell = [&](CellId c) { return targets ? static_cast<bool>((*targets)[c]) : c == target; };

    // (f, -g, state): larger g first on equal f keeps the search focused.
    using Entry = std::tuple<long, long, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const std::size_t start = encode(source, 0, 0);
    stamp_[start] = round_;
    g_[start] = 0;
    parent_[start] = -1;
    open.emplace(h(source), 0, start);

    std::size_t found = states;
    while (!open.empty()) {
        const auto [f, neg_g, s] = open.top();
        open.pop();
        const long g = -neg_g;
        if (g != g_of(s))
            continue;
        const std::size_t layer = s / (2 * cells);
        const int phase = static_cast<int>((s / cells) % 2);
        const auto c = static_cast<CellId>(s % cells);
        if (layer == layers) {
            found = s;
            break;
        }
        ++expansions_;
        const SegmentSpec& seg = segments[layer];
        const bool last = layer + 1 == layers;
        const bool may_fire = phase == 1 || !seg.multi_step;
        for (const Move& m : w_.moves(c)) {
            const long ng = g + m.cost;
            auto push = [&](std::size_t t, CellId cell) {
                if (ng < g_of(t)) {
                    stamp_[t] = round_;
                    g_[t] = ng;
                    parent_[t] = static_cast<std::int64_t>(s);
                    open.emplace(ng + h(cell), -ng, t);
                }
            };
            if (may_fire && admits(robot, m.to, seg.arrive_neg) && (!last || is_goal_cell(m.to)))
                push(encode(m.to, layer + 1, 0), m.to);
            if (seg.multi_step && admits(robot, m.to, seg.dwell_neg)) {
                const std::size_t t = encode(m.to, layer, 1);
                if (t != s)
                    push(t, m.to);
            }
        }
    }
    if (found == states)
        return std::nullopt;

    std::vector<std::size_t> chain;
    for (std::int64_t s = static_cast<std::int64_t>(found); s != -1; s = parent_[s])
        chain.push_back(static_cast<std::size_t>(s));
    std::reverse(chain.begin(), chain.end());
    GapPath path;
    path.cost = g_[found];
    path.arrivals.resize(layers);
    for (std::size_t k = 1; k < chain.size(); ++k) {
        const std::size_t s = chain[k];
        const std::size_t layer = s / (2 * cells);
        const int phase = static_cast<int>((s / cells) % 2);
        const std::size_t seg = phase == 1 ? layer : layer - 1;
        path.arrivals[seg].push_back(static_cast<CellId>(s % cells));
    }
    return path;
}

std::vector<int> grid_distances(const GridWorkspace& w, CellId from)
{
    std::vector<int> dist(w.cell_count(), -1);
    if (!w.is_free(from))
        return dist;
    std::queue<CellId> todo;
    dist[from] = 0;
    todo.push(from);
    while (!todo.empty()) {
        const CellId c = todo.front();
        todo.pop();
        for (const Move& m : w.moves(c))
            if (dist[m.to] < 0) {
                dist[m.to] = dist[c] + 1;
                todo.push(m.to);
            }
    }
    return dist;
}

} // namespace mtplan
