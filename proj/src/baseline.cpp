#include "mtplan/baseline.hpp"

#include <algorithm>
#include <limits>

#include "detail/bucket_queue.hpp"

namespace mtplan {

namespace {

constexpr long kInf = std::numeric_limits<long>::max();

std::vector<RunStep> trace(const ProductGraph& p, const std::vector<std::int32_t>& parent, std::int32_t from,
                           std::int32_t to)
{
    std::vector<std::int32_t> nodes{to};
    for (std::int32_t v = to; v != from;) {
        v = parent[v];
        nodes.push_back(v);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::vector<RunStep> out;
    for (auto v : nodes)
        out.push_back(p.step(v));
    return out;
}

} // namespace

BaselineResult baseline_solve(const GridWorkspace& w, const BuchiAutomaton& b, const Budget& budget)
{
    const Deadline deadline(budget.max_seconds);
    const ProductGraph p(w, b, budget);
    const CsrGraph& g = p.graph();
    const auto n = static_cast<std::int32_t>(p.state_count());
    const int max_weight = static_cast<int>(w.robot_count());

    BaselineResult result;
    result.product_states = p.state_count();
    result.product_edges = p.edge_count();

    // Prefix costs from the initial state.
    std::vector<long> prefix_dist(n, kInf);
    std::vector<std::int32_t> prefix_parent(n, -1);
    detail::BucketQueue queue(max_weight);
    prefix_dist[0] = 0;
    queue.push(0, 0);
    while (!queue.empty()) {
        long d;
        const auto v = queue.pop(d);
        if (d != prefix_dist[v])
            continue;
        for (std::size_t e = g.offset[v]; e < g.offset[v + 1]; ++e) {
            const auto t = g.target[e];
            const long nd = d + p.cost(e);
            if (nd < prefix_dist[t]) {
                prefix_dist[t] = nd;
                prefix_parent[t] = v;
                queue.push(nd, t);
            }
        }
    }

    std::int32_t ncomp = 0;
    const auto comp = strongly_connected_components(g, ncomp);
    std::vector<std::int32_t> comp_size(ncomp, 0);
    std::vector<bool> comp_loop(ncomp, false);
    for (std::int32_t v = 0; v < n; ++v) {
        ++comp_size[comp[v]];
        for (std::size_t e = g.offset[v]; e < g.offset[v + 1]; ++e)
            if (g.target[e] == v)
                comp_loop[comp[v]] = true;
    }

    std::vector<std::pair<std::int32_t, RunStep>> finals;
    for (std::int32_t v = 0; v < n; ++v) {
        if (!p.accepting(v))
            continue;
        ++result.accepting_states;
        if (comp_size[comp[v]] > 1 || comp_loop[comp[v]])
            finals.emplace_back(v, p.step(v));
    }
    // Candidates in tie-break order, so later candidates must strictly improve.
    std::sort(finals.begin(), finals.end(), [&](const auto& a, const auto& c) {
        if (prefix_dist[a.first] != prefix_dist[c.first])
            return prefix_dist[a.first] < prefix_dist[c.first];
        return state_less(a.second, c.second);
    });

    long best = kInf;
    std::int32_t best_f = -1;
    std::vector<RunStep> best_cycle;
    std::vector<long> dist(n, kInf);
    std::vector<std::int32_t> parent(n, -1);
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t round = 0;
    auto distance = [&](std::int32_t v) { return stamp[v] == round ? dist[v] : kInf; };

    for (const auto& [f, step] : finals) {
        deadline.check("baseline cycle search");
        ++result.cycle_searches;
        ++round;
        queue.clear();
        const auto scc = comp[f];
        auto relax = [&](std::int32_t from, long d) {
            for (std::size_t e = g.offset[from]; e < g.offset[from + 1]; ++e) {
                const auto t = g.target[e];
                if (comp[t] != scc)
                    continue;
                const long nd = d + p.cost(e);
                if (nd < best && nd < distance(t)) {
                    stamp[t] = round;
                    dist[t] = nd;
                    parent[t] = from;
                    queue.push(nd, t);
                }
            }
        };
        relax(f, 0);
        while (!queue.empty()) {
            long d;
            const auto v = queue.pop(d);
            if (d != distance(v))
                continue;
            if (d >= best)
                break;
            if (v == f) {
                best = d;
                best_f = f;
                best_cycle = trace(p, parent, f, parent[f]);
                best_cycle.push_back(step);
                break;
            }
            relax(v, d);
        }
    }

    if (best_f < 0)
        throw Unsatisfiable("no accepting cycle is reachable");

    result.run.prefix = trace(p, prefix_parent, 0, best_f);
    result.run.suffix = std::move(best_cycle);
    result.run.prefix_cost = prefix_dist[best_f];
    result.run.suffix_cost = best;
    return result;
}

} // namespace mtplan
