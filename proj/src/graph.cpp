#include "mtplan/graph.hpp"

#include <algorithm>

namespace mtplan {

std::vector<std::int32_t> strongly_connected_components(const CsrGraph& g, std::int32_t& component_count)
{
    const auto n = static_cast<std::int32_t>(g.node_count());
    std::vector<std::int32_t> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<std::int32_t> stack;
    std::vector<std::pair<std::int32_t, std::size_t>> call; // node, next edge position
    std::int32_t counter = 0;
    component_count = 0;

    for (std::int32_t root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        call.push_back({root, g.offset[root]});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < g.offset[v + 1]) {
                const std::int32_t w = g.target[pos++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    call.push_back({w, g.offset[w]});
                } else if (comp[w] == -1) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::int32_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::int32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    comp[w] = component_count;
                } while (w != done);
                ++component_count;
            }
        }
    }
    return comp;
}

std::vector<bool> reachable_from(const CsrGraph& g, const std::vector<std::int32_t>& roots)
{
    std::vector<bool> seen(g.node_count(), false);
    std::vector<std::int32_t> todo;
    for (auto r : roots) {
        if (!seen[r]) {
            seen[r] = true;
            todo.push_back(r);
        }
    }
    while (!todo.empty()) {
        const auto v = todo.back();
        todo.pop_back();
        for (std::size_t e = g.offset[v]; e < g.offset[v + 1]; ++e) {
            const auto w = g.target[e];
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
        }
    }
    return seen;
}

CsrGraph transpose(const CsrGraph& g)
{
    const std::size_t n = g.node_count();
    CsrGraph t;
    t.offset.assign(n + 1, 0);
    for (auto w : g.target)
        ++t.offset[w + 1];
    for (std::size_t v = 0; v < n; ++v)
        t.offset[v + 1] += t.offset[v];
    t.target.resize(g.target.size());
    std::vector<std::size_t> fill(t.offset.begin(), t.offset.end() - 1);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t e = g.offset[v]; e < g.offset[v + 1]; ++e)
            t.target[fill[g.target[e]]++] = static_cast<std::int32_t>(v);
    return t;
}

} // namespace mtplan
