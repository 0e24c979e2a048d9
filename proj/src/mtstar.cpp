#include "mtplan/mtstar.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace mtplan {

namespace {

constexpr long kInf = std::numeric_limits<long>::max() / 4;

} // namespace

SubAutomaton extract_buchi_from_cycle(const AbstractReducedGraph& g, const std::vector<int>& cycle)
{
    SubAutomaton sub;
    for (int e : cycle) {
        const AbstractEdge& edge = g.edges()[e];
        const BuchiState from = g.nodes()[edge.from].q;
        const BuchiState to = g.nodes()[edge.to].q;
        sub.states.push_back(from);
        sub.states.push_back(to);
        sub.edges.push_back({from, edge.cond, to});
        if (edge.dwell)
            sub.edges.push_back({from, *edge.dwell, from});
    }
    std::sort(sub.states.begin(), sub.states.end());
    sub.states.erase(std::unique(sub.states.begin(), sub.states.end()), sub.states.end());
    std::sort(sub.edges.begin(), sub.edges.end());
    sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
    return sub;
}

RobotProjection project_cycle(const AbstractReducedGraph& g, const std::vector<int>& cycle, std::size_t robot)
{
    RobotProjection p;
    p.idle = true;
    for (int e : cycle) {
        const AbstractEdge& edge = g.edges()[e];
        const AbstractNode& from = g.nodes()[edge.from];
        const AbstractNode& to = g.nodes()[edge.to];
        p.cells.push_back(from.cells[robot]);
        p.states.push_back(from.q);
        p.split.push_back({to.obligations[robot].pos & edge.cond.pos, edge.cond.neg});
        p.dwell.push_back(edge.dwell);
        if (from.cells[robot] != kWildcard)
            p.idle = false;
    }
    return p;
}

std::vector<SegmentSpec> project_onto_segments(const RobotProjection& p, const std::vector<bool>& multi)
{
    std::vector<SegmentSpec> specs;
    for (std::size_t j = 0; j < p.split.size(); ++j) {
        SegmentSpec s;
        s.arrive_neg = p.split[j].neg;
        if (p.dwell[j]) {
            s.dwell_neg = p.dwell[j]->neg;
            s.multi_step = j < multi.size() && multi[j];
        }
        specs.push_back(s);
    }
    return specs;
}

std::optional<std::vector<RunStep>> sync_segments(const GridWorkspace& w, const GapSolver& solver,
                                                  const std::vector<CellId>& start,
                                                  const std::vector<std::vector<std::vector<CellId>>>& arrivals,
                                                  const std::vector<BuchiState>& states,
                                                  const std::vector<PropMask>& dwell_neg)
{
    const std::size_t robots = start.size();
    const std::size_t segments = dwell_neg.size();
    std::vector<CellId> at = start;
    std::vector<RunStep> steps;
    for (std::size_t j = 0; j < segments; ++j) {
        std::size_t longest = 0;
        for (std::size_t i = 0; i < robots; ++i)
            longest = std::max(longest, arrivals[i][j].size());
        std::vector<std::vector<CellId>> padded(robots);
        for (std::size_t i = 0; i < robots; ++i) {
            const auto& mine = arrivals[i][j];
            if (mine.empty())
                return std::nullopt;
            const std::size_t wait = longest - mine.size();
            if (wait == 0) {
                padded[i] = mine;
            } else if (solver.admits(i, at[i], dwell_neg[j])) {
                padded[i].assign(wait, at[i]);
                padded[i].insert(padded[i].end(), mine.begin(), mine.end());
            } else if (mine.size() >= 2) {
                padded[i].push_back(mine.front());
                padded[i].insert(padded[i].end(), wait, mine.front());
                padded[i].insert(padded[i].end(), mine.begin() + 1, mine.end());
            } else {
                return std::nullopt;
            }
        }
        for (std::size_t t = 0; t < longest; ++t) {
            RunStep step;
            for (std::size_t i = 0; i < robots; ++i)
                step.cells.push_back(w.cell(padded[i][t]));
            step.q = t + 1 < longest ? states[j] : states[j + 1];
            steps.push_back(std::move(step));
        }
        for (std::size_t i = 0; i < robots; ++i)
            at[i] = padded[i].back();
    }
    return steps;
}

namespace {

// A robot's walk across a sequence of segments.
struct RobotWalk {
    long cost = 0;
    std::vector<std::vector<CellId>> arrivals;
    // Untasked robot that can rest on any flagged cell for free.
    bool floating = false;
    std::vector<bool> rest;
};

// Concrete goal for a prefix: a reduced-graph node plus, per robot, either a
// pinned cell or a set of acceptable cells. With `settle`, one extra waiting
// segment under that loop follows the node.
struct PrefixGoal {
    int node = 0;
    std::vector<CellId> pinned;
    std::vector<const std::vector<bool>*> allowed;
    std::optional<TransitionCondition> settle;
};

// Cheapest extra cost of being on each cell, as sorted (cell, cost) pairs
// with the minimum cost shifted to zero.
using Field = std::vector<std::pair<CellId, long>>;

// Search view of one robot. A robot with a known starting point carries the
// field of where it can be now. A robot Wildcard at the root of a cycle
// search carries the cost from each possible root cell to each current cell
// (`rel`) until it is first Known; from then on `back` holds the cost from
// each root cell to the anchor cell. Fields and relations are interned and
// referred to by id.
struct Frontier {
    bool rooted = false;
    int here = -1;
    int rel = -1;
    CellId anchor = kWildcard;
    int back = -1;
};

struct Entry {
    int node = 0;
    long g = 0;
    int parent = -1;
    int edge = -1;
    bool multi = false;
    std::size_t depth = 0;
    std::vector<Frontier> robots;
    // Fully closed candidate; g is its exact cost.
    bool goal = false;
    bool settle_multi = false;
};

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const
    {
        std::size_t h = key.size();
        for (auto v : key)
            h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

class Planner {
public:
    Planner(const GridWorkspace& w, const BuchiAutomaton& b, const MtStarOptions& options)
        : w_(w)
        , b_(b)
        , options_(options)
        , labels_(w, b.alphabet())
        , graph_(w, b)
        , solver_(w, labels_, options.use_cache)
        , deadline_(options.budget.max_seconds)
        , robots_(w.robot_count())
    {
        for (std::size_t i = 0; i < robots_; ++i) {
            component_.push_back(w.component(w.id(w.start(i))));
            cells_of_.emplace_back();
            for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c)
                if (component_[i][c])
                    cells_of_[i].push_back(c);
        }
        for (std::size_t i = 0; i < robots_; ++i)
            start_.push_back(w.id(w.start(i)));
        build_search_graph();
    }

    MtStarResult solve()
    {
        MtStarResult result;
        result.graph_nodes = graph_.node_count();
        result.graph_edges = graph_.edge_count();
        result.finals = graph_.finals().size();
        try {
            solve_stationary();
            for (int f : finals_) {
                if (best_cost_ == 0)
                    break;
                search_cycles(f, result);
            }
        } catch (const BudgetExceeded&) {
            if (!options_.anytime || !best_run_)
                throw;
            result.incomplete = true;
        }
        if (!best_run_ && incomplete_)
            throw BudgetExceeded("search caps reached before any candidate was found");
        if (!best_run_)
            throw Unsatisfiable("no candidate cycle admits a valid prefix");
        result.run = *best_run_;
        result.cache_hits = solver_.hits();
        result.cache_misses = solver_.misses();
        result.incomplete = result.incomplete || incomplete_;
        return result;
    }

private:
    // Distance lower bounds between cells.
    int distance(CellId a, CellId c)
    {
        auto it = dist_.find(a);
        if (it == dist_.end())
            it = dist_.emplace(a, grid_distances(w_, a)).first;
        return it->second[c];
    }

    std::vector<SegmentSpec> specs_for(const std::vector<int>& edges, const std::vector<bool>& multi,
                                       const std::optional<TransitionCondition>& settle) const
    {
        std::vector<SegmentSpec> specs;
        for (std::size_t j = 0; j < edges.size(); ++j) {
            const AbstractEdge& e = graph_.edges()[edges[j]];
            SegmentSpec s;
            s.arrive_neg = e.cond.neg;
            if (e.dwell) {
                s.dwell_neg = e.dwell->neg;
                s.multi_step = multi[j];
            }
            specs.push_back(s);
        }
        if (settle)
            specs.push_back({settle->neg, settle->neg, multi[edges.size()]});
        return specs;
    }

    std::vector<PropMask> dwell_masks(const std::vector<int>& edges, const std::optional<TransitionCondition>& settle) const
    {
        std::vector<PropMask> out;
        for (int e : edges) {
            const auto& d = graph_.edges()[e].dwell;
            out.push_back(d ? d->neg : 0);
        }
        if (settle)
            out.push_back(settle->neg);
        return out;
    }

    // Walk of one robot along `cells` (one entry per node, segments between
    // them). The first entry must be Known. A Wildcard last entry ends on any
    // cell flagged in `tail`.
    std::optional<RobotWalk> walk_path(std::size_t robot, const std::vector<CellId>& cells,
                                       const std::vector<SegmentSpec>& specs, const std::vector<bool>* tail)
    {
        RobotWalk walk;
        walk.arrivals.resize(specs.size());
        std::size_t a = 0;
        while (a < specs.size()) {
            std::size_t c = a + 1;
            while (c < cells.size() - 1 && cells[c] == kWildcard)
                ++c;
            const std::vector<SegmentSpec> part(specs.begin() + static_cast<std::ptrdiff_t>(a),
                                                specs.begin() + static_cast<std::ptrdiff_t>(c));
            std::optional<GapPath> gap;
            if (cells[c] != kWildcard)
                gap = solver_.solve(robot, cells[a], part, cells[c]);
            else
                gap = solver_.solve(robot, cells[a], part, kWildcard, tail ? tail : &component_[robot]);
            if (!gap)
                return std::nullopt;
            walk.cost += gap->cost;
            for (std::size_t j = a; j < c; ++j)
                walk.arrivals[j] = std::move(gap->arrivals[j - a]);
            a = c;
        }
        return walk;
    }

    // Closed walk of one robot around a cycle whose node cells are `cells`.
    std::optional<RobotWalk> walk_cycle(std::size_t robot, const std::vector<CellId>& cells,
                                        const std::vector<SegmentSpec>& specs)
    {
        const std::size_t m = specs.size();
        std::size_t first = m;
        for (std::size_t k = 0; k < m && first == m; ++k)
            if (cells[k] != kWildcard)
                first = k;
        if (first == m)
            return idle_walk(robot, specs);

        // Rotate so the walk starts and ends on the first Known node.
        std::vector<CellId> rotated;
        std::vector<SegmentSpec> rspecs;
        for (std::size_t k = 0; k < m; ++k) {
            rotated.push_back(cells[(first + k) % m]);
            rspecs.push_back(specs[(first + k) % m]);
        }
        rotated.push_back(cells[first]);
        auto walk = walk_path(robot, rotated, rspecs, nullptr);
        if (!walk)
            return std::nullopt;
        std::vector<std::vector<CellId>> arrivals(m);
        for (std::size_t k = 0; k < m; ++k)
            arrivals[(first + k) % m] = std::move(walk->arrivals[k]);
        walk->arrivals = std::move(arrivals);
        return walk;
    }

    std::optional<RobotWalk> idle_walk(std::size_t robot, const std::vector<SegmentSpec>& specs)
    {
        RobotWalk walk;
        walk.floating = true;
        walk.rest.assign(w_.cell_count(), false);
        bool any = false;
        for (CellId c = 0; c < static_cast<CellId>(w_.cell_count()); ++c) {
            if (!component_[robot][c])
                continue;
            bool ok = true;
            for (const auto& s : specs)
                ok = ok && solver_.admits(robot, c, s.arrive_neg) && (!s.multi_step || solver_.admits(robot, c, s.dwell_neg));
            walk.rest[c] = ok;
            any = any || ok;
        }
        if (any)
            return walk;

        // No resting cell: anchor the loop on the cheapest cell entered at node 0.
        std::optional<RobotWalk> best;
        for (CellId c = 0; c < static_cast<CellId>(w_.cell_count()); ++c) {
            if (!component_[robot][c] || !solver_.admits(robot, c, specs.back().arrive_neg))
                continue;
            std::vector<CellId> cells(specs.size() + 1, kWildcard);
            cells.front() = cells.back() = c;
            auto wk = walk_path(robot, cells, specs, nullptr);
            if (wk && (!best || wk->cost < best->cost))
                best = std::move(wk);
        }
        return best;
    }

    static SegmentSpec spec_of(const AbstractEdge& e, bool multi)
    {
        SegmentSpec s;
        s.arrive_neg = e.cond.neg;
        if (e.dwell) {
            s.dwell_neg = e.dwell->neg;
            s.multi_step = multi;
        }
        return s;
    }

    // Nodes that differ only in per-robot obligations have the same cells,
    // state and outgoing edges, so the search works on one representative
    // per class. Of parallel edges between two classes, an edge is dropped
    // when another forbids a subset of its propositions both on arrival and
    // while waiting, since any walk along it also fits the other.
    void build_search_graph()
    {
        std::map<std::pair<BuchiState, std::vector<CellId>>, int> classes;
        for (std::size_t v = 0; v < graph_.node_count(); ++v) {
            const AbstractNode& n = graph_.nodes()[v];
            rep_.push_back(classes.try_emplace({n.q, n.cells}, static_cast<int>(v)).first->second);
        }
        // Propositions that can hold on some cell of each robot.
        std::vector<PropMask> seen(robots_, 0);
        for (std::size_t i = 0; i < robots_; ++i)
            for (CellId c = 0; c < static_cast<CellId>(w_.cell_count()); ++c)
                if (w_.is_free(c))
                    seen[i] |= labels_.mask(i, c);
        // A robot Known at the target arrives on a cell that already meets
        // the edge's negative literals.
        auto weaker = [&](const AbstractEdge& a, const AbstractEdge& b) {
            const AbstractNode& to = graph_.nodes()[b.to];
            for (std::size_t i = 0; i < robots_; ++i) {
                const PropMask arrive = to.known(i) ? 0 : seen[i];
                if ((a.cond.neg & ~b.cond.neg & arrive) != 0)
                    return false;
                if (!b.dwell)
                    continue;
                if (!a.dwell || (a.dwell->neg & ~b.dwell->neg & seen[i]) != 0)
                    return false;
            }
            return true;
        };
        search_out_.resize(graph_.node_count());
        std::map<int, std::vector<int>> by_target;
        for (std::size_t v = 0; v < graph_.node_count(); ++v) {
            if (rep_[v] != static_cast<int>(v))
                continue;
            by_target.clear();
            for (int e : graph_.out(static_cast<int>(v)))
                by_target[target_of(e)].push_back(e);
            for (const auto& [to, group] : by_target) {
                for (std::size_t k = 0; k < group.size(); ++k) {
                    const AbstractEdge& b = graph_.edges()[group[k]];
                    bool dominated = false;
                    for (std::size_t j = 0; j < group.size() && !dominated; ++j) {
                        const AbstractEdge& a = graph_.edges()[group[j]];
                        // Equivalent edges: keep the first.
                        dominated = j != k && weaker(a, b) && (!weaker(b, a) || j < k);
                    }
                    if (!dominated)
                        search_out_[v].push_back(group[k]);
                }
            }
            std::sort(search_out_[v].begin(), search_out_[v].end());
        }
        for (int f : graph_.finals())
            if (std::find(finals_.begin(), finals_.end(), rep_[f]) == finals_.end())
                finals_.push_back(rep_[f]);
    }

    int target_of(int e) const { return rep_[graph_.edges()[e].to]; }

    // Scratch costs indexed by cell, reset by bumping a round counter.
    void scratch_reset()
    {
        if (scratch_.size() != w_.cell_count()) {
            scratch_.assign(w_.cell_count(), kInf);
            scratch_stamp_.assign(w_.cell_count(), 0);
        }
        ++scratch_round_;
        touched_.clear();
    }

    long scratch_get(CellId c) const { return scratch_stamp_[c] == scratch_round_ ? scratch_[c] : kInf; }

    bool scratch_relax(CellId c, long v)
    {
        if (v >= scratch_get(c))
            return false;
        if (scratch_stamp_[c] != scratch_round_) {
            scratch_stamp_[c] = scratch_round_;
            touched_.push_back(c);
        }
        scratch_[c] = v;
        return true;
    }

    Field scratch_collect()
    {
        Field out;
        out.reserve(touched_.size());
        if (touched_.size() * 8 > scratch_.size()) {
            for (CellId c = 0; c < static_cast<CellId>(scratch_.size()); ++c)
                if (scratch_stamp_[c] == scratch_round_)
                    out.emplace_back(c, scratch_[c]);
            return out;
        }
        std::sort(touched_.begin(), touched_.end());
        for (CellId c : touched_)
            out.emplace_back(c, scratch_[c]);
        return out;
    }

    // One move from every cell of `from` into cells allowed by `admit`.
    template <class Admit>
    Field step(const Field& from, Admit admit)
    {
        scratch_reset();
        for (const auto& [c, d] : from)
            for (const Move& m : w_.moves(c))
                if (admit(m.to))
                    scratch_relax(m.to, d + m.cost);
        return scratch_collect();
    }

    // Any number of further moves inside cells allowed by `admit`.
    template <class Admit>
    Field spread(const Field& from, Admit admit)
    {
        scratch_reset();
        using Item = std::pair<long, CellId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        for (const auto& [c, d] : from)
            if (scratch_relax(c, d))
                open.emplace(d, c);
        while (!open.empty()) {
            const auto [d, c] = open.top();
            open.pop();
            if (d != scratch_get(c))
                continue;
            for (const Move& m : w_.moves(c))
                if (admit(m.to) && scratch_relax(m.to, d + m.cost))
                    open.emplace(d + m.cost, m.to);
        }
        return scratch_collect();
    }

    int intern(Field f)
    {
        std::vector<std::int64_t> key;
        key.reserve(2 * f.size());
        for (const auto& [c, d] : f) {
            key.push_back(c);
            key.push_back(d);
        }
        auto [it, fresh] = field_ids_.try_emplace(std::move(key), static_cast<int>(fields_.size()));
        if (fresh)
            fields_.push_back(std::move(f));
        return it->second;
    }

    int point(CellId c) { return intern({{c, 0}}); }

    // Where a robot can be after crossing segment `s`: the interned field
    // and the cost offset moved out of it, or -1 when nowhere.
    std::pair<int, long> move(std::size_t robot, int from, const SegmentSpec& s)
    {
        const std::vector<std::int64_t> key{static_cast<std::int64_t>(robot), from,
                                            static_cast<std::int64_t>(s.arrive_neg),
                                            static_cast<std::int64_t>(s.dwell_neg), s.multi_step};
        if (auto it = moved_.find(key); it != moved_.end())
            return it->second;
        auto arrive = [&](CellId c) { return solver_.admits(robot, c, s.arrive_neg); };
        auto dwell = [&](CellId c) { return solver_.admits(robot, c, s.dwell_neg); };
        const Field& f = fields_[from];
        Field out = s.multi_step ? step(spread(step(f, dwell), dwell), arrive) : step(f, arrive);
        const long offset = normalize(out);
        std::pair<int, long> result{-1, kInf};
        if (offset < kInf)
            result = {intern(std::move(out)), offset};
        moved_.emplace(key, result);
        return result;
    }

    // A relation holds one row per cell of the robot's component: the field
    // reachable from that cell and the row's cost offset.
    using Relation = std::vector<std::pair<int, long>>;

    int intern_relation(std::size_t robot, Relation r)
    {
        std::vector<std::int64_t> key{static_cast<std::int64_t>(robot)};
        key.reserve(1 + 2 * r.size());
        for (const auto& [id, d] : r) {
            key.push_back(id);
            key.push_back(d);
        }
        auto [it, fresh] = relation_ids_.try_emplace(std::move(key), static_cast<int>(relations_.size()));
        if (fresh)
            relations_.push_back(std::move(r));
        return it->second;
    }

    int identity(std::size_t robot)
    {
        Relation r;
        for (CellId c : cells_of_[robot])
            r.emplace_back(point(c), 0);
        return intern_relation(robot, std::move(r));
    }

    // Relation after crossing segment `s`, with its minimum moved into the
    // returned offset; -1 when no row survives.
    std::pair<int, long> move_relation(std::size_t robot, int from, const SegmentSpec& s)
    {
        const std::vector<std::int64_t> key{static_cast<std::int64_t>(robot), from,
                                            static_cast<std::int64_t>(s.arrive_neg),
                                            static_cast<std::int64_t>(s.dwell_neg), s.multi_step};
        if (auto it = moved_relations_.find(key); it != moved_relations_.end())
            return it->second;
        Relation out = relations_[from];
        long low = kInf;
        for (auto& [id, d] : out) {
            if (id < 0)
                continue;
            const auto [moved, offset] = move(robot, id, s);
            id = moved;
            d = moved < 0 ? kInf : d + offset;
            low = std::min(low, d);
        }
        std::pair<int, long> result{-1, kInf};
        if (low < kInf) {
            for (auto& row : out)
                if (row.first >= 0)
                    row.second -= low;
            result = {intern_relation(robot, std::move(out)), low};
        }
        moved_relations_.emplace(key, result);
        return result;
    }

    // Cost from each root cell to `target`.
    Field column(std::size_t robot, int rel, CellId target)
    {
        Field f;
        const Relation& r = relations_[rel];
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].first < 0)
                continue;
            const long d = value_at(fields_[r[k].first], target);
            if (d < kInf)
                f.emplace_back(cells_of_[robot][k], r[k].second + d);
        }
        return f;
    }

    // Cheapest loop back to the root cell it started from.
    long diagonal(std::size_t robot, int rel)
    {
        long best = kInf;
        const Relation& r = relations_[rel];
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].first < 0)
                continue;
            const long d = value_at(fields_[r[k].first], cells_of_[robot][k]);
            if (d < kInf)
                best = std::min(best, r[k].second + d);
        }
        return best;
    }

    // Cheapest way from field `id` to `target`, ignoring constraints.
    long reach(int id, CellId target)
    {
        const std::int64_t key = static_cast<std::int64_t>(id) << 32 | static_cast<std::uint32_t>(target);
        auto it = reach_.find(key);
        if (it != reach_.end())
            return it->second;
        long best = kInf;
        for (const auto& [c, d] : fields_[id]) {
            const int dist = distance(target, c);
            if (dist >= 0)
                best = std::min(best, d + dist);
        }
        reach_.emplace(key, best);
        return best;
    }

    long meet(int a, int b)
    {
        const std::int64_t key = static_cast<std::int64_t>(a) << 32 | static_cast<std::uint32_t>(b);
        auto it = meet_.find(key);
        if (it != meet_.end())
            return it->second;
        long best = kInf;
        const Field& x = fields_[a];
        const Field& y = fields_[b];
        std::size_t j = 0;
        for (const auto& [c, d] : x) {
            while (j < y.size() && y[j].first < c)
                ++j;
            if (j < y.size() && y[j].first == c)
                best = std::min(best, d + y[j].second);
        }
        meet_.emplace(key, best);
        return best;
    }

    // Moves the field's minimum into the returned offset.
    static long normalize(Field& f)
    {
        if (f.empty())
            return kInf;
        long low = kInf;
        for (const auto& p : f)
            low = std::min(low, p.second);
        for (auto& p : f)
            p.second -= low;
        return low;
    }

    static long value_at(const Field& f, CellId c)
    {
        auto it = std::lower_bound(f.begin(), f.end(), std::make_pair(c, std::numeric_limits<long>::min()));
        return it != f.end() && it->first == c ? it->second : kInf;
    }

    // Follows edge `e` in the given mode, dropping results that cannot stay
    // below `limit`. A robot Known at the target pays for reaching that cell;
    // a robot seen Known for the first time becomes anchored there.
    std::optional<Entry> advance(const Entry& from, int index, int e, bool multi, long limit)
    {
        const AbstractEdge& edge = graph_.edges()[e];
        const AbstractNode& to = graph_.nodes()[edge.to];
        const SegmentSpec spec = spec_of(edge, multi);
        Entry next;
        next.node = target_of(e);
        next.g = from.g;
        next.parent = index;
        next.edge = e;
        next.multi = multi;
        next.depth = from.depth + 1;
        next.robots = from.robots;
        for (std::size_t i = 0; i < robots_; ++i) {
            Frontier& fr = next.robots[i];
            if ((fr.rooted || fr.anchor != kWildcard) && to.known(i) && fields_[fr.here].size() == 1) {
                // Known to Known: a targeted search is cheaper than the field.
                auto gap = solver_.solve(i, fields_[fr.here].front().first, {spec}, to.cells[i]);
                if (!gap)
                    return std::nullopt;
                next.g += gap->cost;
                fr.here = point(to.cells[i]);
            } else if (fr.rooted || fr.anchor != kWildcard) {
                const auto [moved, offset] = move(i, fr.here, spec);
                if (moved < 0)
                    return std::nullopt;
                next.g += offset;
                if (to.known(i)) {
                    const long cost = value_at(fields_[moved], to.cells[i]);
                    if (cost >= kInf)
                        return std::nullopt;
                    next.g += cost;
                    fr.here = point(to.cells[i]);
                } else {
                    fr.here = moved;
                }
            } else {
                const auto [moved, offset] = move_relation(i, fr.rel, spec);
                if (moved < 0)
                    return std::nullopt;
                next.g += offset;
                fr.rel = moved;
                if (!to.known(i))
                    continue;
                fr.anchor = to.cells[i];
                Field back = column(i, fr.rel, fr.anchor);
                const long low = normalize(back);
                if (low >= kInf)
                    return std::nullopt;
                next.g += low;
                fr.back = intern(std::move(back));
                fr.here = point(fr.anchor);
                fr.rel = -1;
            }
            if (next.g >= limit)
                return std::nullopt;
        }
        return next;
    }

    static std::vector<std::int64_t> key_of(const Entry& e)
    {
        std::vector<std::int64_t> key{e.node};
        for (const auto& fr : e.robots) {
            key.push_back(fr.rooted);
            key.push_back(fr.anchor);
            key.push_back(fr.here);
            key.push_back(fr.back);
            key.push_back(fr.rel);
        }
        return key;
    }

    // Best-first queue shared by the cycle and prefix searches. Entries are
    // ordered by cost plus heuristic, then by insertion.
    class Queue {
    public:
        explicit Queue(std::vector<Entry>& entries) : entries_(entries) {}

        void push(Entry e, long h)
        {
            if (!e.goal) {
                auto [it, fresh] = seen_.try_emplace(key_of(e), e.g);
                if (!fresh && it->second <= e.g)
                    return;
                it->second = e.g;
            }
            const long f = e.g + h;
            entries_.push_back(std::move(e));
            heap_.push({f, seq_++, static_cast<int>(entries_.size() - 1)});
        }

        bool empty() const { return heap_.empty(); }
        long top_priority() const { return std::get<0>(heap_.top()); }

        int pop()
        {
            const int index = std::get<2>(heap_.top());
            heap_.pop();
            return index;
        }

        // Whether a regular entry was superseded by a cheaper one.
        bool stale(const Entry& e) const
        {
            if (e.goal)
                return false;
            auto it = seen_.find(key_of(e));
            return it != seen_.end() && it->second < e.g;
        }

    private:
        using Item = std::tuple<long, std::size_t, int>;
        std::vector<Entry>& entries_;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
        std::unordered_map<std::vector<std::int64_t>, long, KeyHash> seen_;
        std::size_t seq_ = 0;
    };

    // Lower bound on the remaining travel: every robot with a known position
    // still has to reach its target cell, or its anchor.
    long heuristic(const Entry& e, const std::vector<CellId>& targets)
    {
        long h = 0;
        for (std::size_t i = 0; i < robots_; ++i) {
            const Frontier& fr = e.robots[i];
            const CellId target = targets[i] != kWildcard ? targets[i] : fr.anchor;
            if (target == kWildcard || fr.here < 0)
                continue;
            const long best = reach(fr.here, target);
            if (best >= kInf)
                return kInf;
            h += best;
        }
        return h;
    }

    // Edges and modes from the root to entry `index`.
    static void trace(const std::vector<Entry>& entries, int index, std::vector<int>& edges, std::vector<bool>& multi)
    {
        for (int k = index; entries[k].parent >= 0; k = entries[k].parent) {
            edges.push_back(entries[k].edge);
            multi.push_back(entries[k].multi);
        }
        std::reverse(edges.begin(), edges.end());
        std::reverse(multi.begin(), multi.end());
    }

    bool expansion_cap(std::size_t expanded)
    {
        if (options_.max_expansions && expanded >= options_.max_expansions) {
            incomplete_ = true;
            return true;
        }
        return false;
    }

    // Closed walks through final node f, cheapest first. Each candidate
    // that admits a prefix replaces the best run if it is strictly cheaper.
    void search_cycles(int f, MtStarResult& result)
    {
        const AbstractNode& root = graph_.nodes()[f];
        std::vector<Entry> entries;
        Queue queue(entries);
        Entry start;
        start.node = f;
        start.robots.resize(robots_);
        std::vector<CellId> targets(robots_, kWildcard);
        for (std::size_t i = 0; i < robots_; ++i) {
            if (!root.known(i))
                continue;
            start.robots[i].rooted = true;
            start.robots[i].here = point(root.cells[i]);
            targets[i] = root.cells[i];
        }
        for (std::size_t i = 0; i < robots_; ++i)
            if (!root.known(i))
                start.robots[i].rel = identity(i);
        queue.push(std::move(start), 0);

        std::size_t expanded = 0, candidates = 0;
        while (!queue.empty() && queue.top_priority() < best_cost_) {
            deadline_.check("cycle search");
            const int index = queue.pop();
            if (queue.stale(entries[index]))
                continue;
            if (entries[index].goal) {
                ++result.cycles_examined;
                evaluate(f, entries, index);
                if (options_.max_cycles && ++candidates >= options_.max_cycles) {
                    incomplete_ = true;
                    return;
                }
                continue;
            }
            if (expansion_cap(expanded++))
                return;
            if (entries[index].depth >= graph_.node_count())
                continue;
            for (int e : search_out_[entries[index].node]) {
                const AbstractEdge& edge = graph_.edges()[e];
                for (bool multi : {true, false}) {
                    if (multi && !edge.dwell)
                        continue;
                    auto next = advance(entries[index], index, e, multi, best_cost_);
                    if (!next)
                        continue;
                    if (next->node != f) {
                        const long h = heuristic(*next, targets);
                        if (next->g + h < best_cost_)
                            queue.push(std::move(*next), h);
                        continue;
                    }
                    if (close_cycle(root, *next) && next->g < best_cost_) {
                        next->goal = true;
                        queue.push(std::move(*next), 0);
                    }
                }
            }
        }
    }

    // Adds the cost of returning every robot to where it entered the cycle.
    bool close_cycle(const AbstractNode& root, Entry& e)
    {
        for (std::size_t i = 0; i < robots_; ++i) {
            if (root.known(i))
                continue;
            const Frontier& fr = e.robots[i];
            const long cost = fr.anchor != kWildcard ? meet(fr.here, fr.back) : diagonal(i, fr.rel);
            if (cost >= kInf)
                return false;
            e.g += cost;
        }
        return true;
    }

    struct Prefix {
        long cost = kInf;
        std::vector<RunStep> steps;
    };

    // Adds the cost of bringing every robot to its goal cell or goal set,
    // through the optional settling segment.
    bool close_prefix(const PrefixGoal& goal, Entry& e, std::optional<bool> settle_multi)
    {
        for (std::size_t i = 0; i < robots_; ++i) {
            const Frontier& fr = e.robots[i];
            int end = fr.here;
            long offset = 0;
            if (goal.settle)
                std::tie(end, offset) = move(i, fr.here, {goal.settle->neg, goal.settle->neg, *settle_multi});
            if (end < 0)
                return false;
            long cost = kInf;
            if (goal.pinned[i] != kWildcard) {
                cost = value_at(fields_[end], goal.pinned[i]);
            } else {
                for (const auto& [c, d] : fields_[end])
                    if ((*goal.allowed[i])[c])
                        cost = std::min(cost, d);
            }
            if (cost < kInf)
                cost += offset;
            if (cost >= kInf)
                return false;
            e.g += cost;
        }
        e.settle_multi = settle_multi.value_or(false);
        e.goal = true;
        return true;
    }

    void push_prefix_goals(const PrefixGoal& goal, Queue& queue, const Entry& at, long bound)
    {
        std::vector<std::optional<bool>> modes{std::nullopt};
        if (goal.settle)
            modes = {true, false};
        for (auto mode : modes) {
            Entry e = at;
            if (close_prefix(goal, e, mode) && e.g < bound)
                queue.push(std::move(e), 0);
        }
    }

    // Cheapest prefix from the initial node to `goal` costing less than
    // `bound`.
    std::optional<Prefix> find_prefix(const PrefixGoal& goal, long bound)
    {
        const AbstractNode& target = graph_.nodes()[goal.node];

        // The cycle may start right at the initial product state.
        if (!goal.settle && target.q == b_.initial() && goal.node == graph_.initial()) {
            bool here = true;
            for (std::size_t i = 0; i < robots_ && here; ++i)
                here = goal.pinned[i] != kWildcard ? goal.pinned[i] == start_[i] : (*goal.allowed[i])[start_[i]];
            if (here && bound > 0) {
                Prefix p;
                p.cost = 0;
                p.steps.push_back(initial_step());
                return p;
            }
        }

        std::vector<Entry> entries;
        Queue queue(entries);
        Entry root;
        root.node = graph_.initial();
        root.robots.resize(robots_);
        for (std::size_t i = 0; i < robots_; ++i) {
            root.robots[i].rooted = true;
            root.robots[i].here = point(start_[i]);
        }
        if (goal.node == root.node && goal.settle)
            push_prefix_goals(goal, queue, root, bound);
        const long h0 = heuristic(root, goal.pinned);
        queue.push(std::move(root), h0);

        std::size_t expanded = 0;
        while (!queue.empty() && queue.top_priority() < bound) {
            deadline_.check("prefix search");
            const int index = queue.pop();
            if (queue.stale(entries[index]))
                continue;
            if (entries[index].goal) {
                if (auto p = build_prefix(goal, entries, index))
                    return p;
                continue;
            }
            if (expansion_cap(expanded++))
                return std::nullopt;
            if (entries[index].depth >= graph_.node_count())
                continue;
            for (int e : search_out_[entries[index].node]) {
                const AbstractEdge& edge = graph_.edges()[e];
                for (bool multi : {true, false}) {
                    if (multi && !edge.dwell)
                        continue;
                    auto next = advance(entries[index], index, e, multi, bound);
                    if (!next)
                        continue;
                    if (next->node == goal.node)
                        push_prefix_goals(goal, queue, *next, bound);
                    const long h = heuristic(*next, goal.pinned);
                    if (next->g + h < bound)
                        queue.push(std::move(*next), h);
                }
            }
        }
        return std::nullopt;
    }

    // Realizes the prefix found by the search as joint steps.
    std::optional<Prefix> build_prefix(const PrefixGoal& goal, const std::vector<Entry>& entries, int index)
    {
        std::vector<int> edges;
        std::vector<bool> multi;
        trace(entries, index, edges, multi);
        if (goal.settle)
            multi.push_back(entries[index].settle_multi);
        const auto specs = specs_for(edges, multi, goal.settle);
        std::vector<int> nodes{graph_.initial()};
        for (int e : edges)
            nodes.push_back(graph_.edges()[e].to);

        long cost = 0;
        std::vector<std::vector<std::vector<CellId>>> arrivals;
        for (std::size_t i = 0; i < robots_; ++i) {
            std::vector<CellId> cells;
            for (int v : nodes)
                cells.push_back(graph_.nodes()[v].cells[i]);
            if (goal.settle)
                cells.push_back(kWildcard);
            cells.front() = start_[i];
            if (goal.pinned[i] != kWildcard)
                cells.back() = goal.pinned[i];
            auto walk = walk_path(i, cells, specs, goal.allowed[i]);
            if (!walk)
                return std::nullopt;
            cost += walk->cost;
            arrivals.push_back(std::move(walk->arrivals));
        }
        if (cost != entries[index].g)
            return std::nullopt;

        std::vector<BuchiState> states;
        for (int v : nodes)
            states.push_back(graph_.nodes()[v].q);
        if (goal.settle)
            states.push_back(states.back());
        auto steps = sync_segments(w_, solver_, start_, arrivals, states, dwell_masks(edges, goal.settle));
        if (!steps)
            return std::nullopt;
        Prefix p;
        p.cost = cost;
        p.steps.push_back(initial_step());
        for (auto& s : *steps)
            if (!(s == p.steps.back()))
                p.steps.push_back(std::move(s));
        return p;
    }

    RunStep initial_step() const
    {
        RunStep s;
        for (CellId c : start_)
            s.cells.push_back(w_.cell(c));
        s.q = b_.initial();
        return s;
    }

    // Suffix candidates that simply wait forever in an accepting state.
    void solve_stationary()
    {
        std::vector<std::vector<bool>> rest(robots_);
        for (const auto& [node, loop] : graph_.stationary()) {
            deadline_.check("stationary candidates");
            PrefixGoal goal;
            goal.node = rep_[node];
            goal.pinned.assign(robots_, kWildcard);
            goal.settle = loop;
            for (std::size_t i = 0; i < robots_; ++i) {
                rest[i].assign(w_.cell_count(), false);
                for (CellId c = 0; c < static_cast<CellId>(w_.cell_count()); ++c)
                    rest[i][c] = component_[i][c] && solver_.admits(i, c, loop.neg);
            }
            for (std::size_t i = 0; i < robots_; ++i)
                goal.allowed.push_back(&rest[i]);
            const long bound = best_run_ && best_cost_ == 0 ? best_run_->prefix_cost : kInf;
            auto prefix = find_prefix(goal, bound);
            if (!prefix)
                continue;
            Run run;
            run.prefix = prefix->steps;
            run.suffix = {prefix->steps.back(), prefix->steps.back()};
            run.prefix_cost = path_cost(run.prefix);
            run.suffix_cost = 0;
            best_run_ = std::move(run);
            best_cost_ = 0;
        }
    }

    // Turns the cycle ending at goal entry `index` into a run if it admits
    // a prefix.
    void evaluate(int f, const std::vector<Entry>& entries, int index)
    {
        std::vector<int> cycle;
        std::vector<bool> multi;
        trace(entries, index, cycle, multi);
        const auto specs = specs_for(cycle, multi, std::nullopt);
        long total = 0;
        std::vector<RobotWalk> walks;
        for (std::size_t i = 0; i < robots_; ++i) {
            std::vector<CellId> cells;
            for (int e : cycle)
                cells.push_back(graph_.nodes()[graph_.edges()[e].from].cells[i]);
            auto walk = walk_cycle(i, cells, specs);
            if (!walk)
                return;
            total += walk->cost;
            walks.push_back(std::move(*walk));
        }
        if (total != entries[index].g)
            return;

        const auto& fnode = graph_.nodes()[f];
        PrefixGoal goal;
        goal.node = f;
        for (std::size_t i = 0; i < robots_; ++i) {
            const RobotWalk& walk = walks[i];
            if (walk.floating) {
                goal.pinned.push_back(kWildcard);
                goal.allowed.push_back(&walk.rest);
            } else {
                goal.pinned.push_back(fnode.known(i) ? fnode.cells[i] : walk.arrivals.back().back());
                goal.allowed.push_back(nullptr);
            }
        }
        auto prefix = find_prefix(goal, kInf);
        if (!prefix)
            return;

        // Floating robots rest where the prefix left them, one step per
        // segment plus one more on waiting segments.
        const RunStep& entry = prefix->steps.back();
        std::vector<CellId> at;
        for (const Cell c : entry.cells)
            at.push_back(w_.id(c));
        std::vector<std::vector<std::vector<CellId>>> arrivals;
        for (std::size_t i = 0; i < robots_; ++i) {
            if (!walks[i].floating) {
                arrivals.push_back(walks[i].arrivals);
                continue;
            }
            std::vector<std::vector<CellId>> stay;
            for (const auto& s : specs)
                stay.push_back(s.multi_step ? std::vector<CellId>{at[i], at[i]} : std::vector<CellId>{at[i]});
            arrivals.push_back(std::move(stay));
        }
        std::vector<BuchiState> states;
        for (int e : cycle)
            states.push_back(graph_.nodes()[graph_.edges()[e].from].q);
        states.push_back(fnode.q);
        auto suffix = sync_segments(w_, solver_, at, arrivals, states, dwell_masks(cycle, std::nullopt));
        if (!suffix)
            return;
        Run run;
        run.prefix = prefix->steps;
        run.suffix.push_back(entry);
        run.suffix.insert(run.suffix.end(), suffix->begin(), suffix->end());
        run.prefix_cost = path_cost(run.prefix);
        run.suffix_cost = path_cost(run.suffix);
        if (run.suffix_cost != total || !(run.suffix.back() == run.suffix.front()))
            return;
        best_cost_ = run.suffix_cost;
        best_run_ = std::move(run);
    }

    const GridWorkspace& w_;
    const BuchiAutomaton& b_;
    MtStarOptions options_;
    Labeling labels_;
    AbstractReducedGraph graph_;
    GapSolver solver_;
    Deadline deadline_;
    std::size_t robots_;
    std::vector<std::vector<bool>> component_;
    std::vector<CellId> start_;
    std::unordered_map<CellId, std::vector<int>> dist_;
    std::vector<int> rep_;
    std::vector<int> finals_;
    std::vector<std::vector<int>> search_out_;
    std::vector<long> scratch_;
    std::vector<std::uint32_t> scratch_stamp_;
    std::uint32_t scratch_round_ = 0;
    std::vector<CellId> touched_;
    std::vector<Field> fields_;
    std::unordered_map<std::vector<std::int64_t>, int, KeyHash> field_ids_;
    std::unordered_map<std::vector<std::int64_t>, std::pair<int, long>, KeyHash> moved_;
    std::unordered_map<std::int64_t, long> reach_;
    std::unordered_map<std::int64_t, long> meet_;
    std::vector<std::vector<CellId>> cells_of_;
    std::vector<Relation> relations_;
    std::unordered_map<std::vector<std::int64_t>, int, KeyHash> relation_ids_;
    std::unordered_map<std::vector<std::int64_t>, std::pair<int, long>, KeyHash> moved_relations_;

    long best_cost_ = kInf;
    std::optional<Run> best_run_;
    bool incomplete_ = false;
};

} // namespace

MtStarResult mtstar_solve(const GridWorkspace& w, const BuchiAutomaton& b, const MtStarOptions& options)
{
    if (w.robot_count() == 0)
        throw std::invalid_argument("workspace has no robots");
    Planner planner(w, b, options);
    return planner.solve();
}

} // namespace mtplan
