#include "mtplan/buchi.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "mtplan/graph.hpp"

namespace mtplan {

BuchiAutomaton::BuchiAutomaton(Alphabet aps, int state_count, BuchiState initial, std::vector<bool> accepting,
                               std::vector<BuchiEdge> edges)
    : aps_(std::move(aps))
    , initial_(initial)
    , accepting_(std::move(accepting))
{
    if (state_count <= 0)
        throw std::invalid_argument("automaton needs at least one state");
    if (static_cast<int>(accepting_.size()) != state_count)
        throw std::invalid_argument("accepting flags do not match state count");
    if (initial_ < 0 || initial_ >= state_count)
        throw std::invalid_argument("initial state out of range");
    const PropMask used = aps_.size() == 64 ? ~PropMask{0} : (PropMask{1} << aps_.size()) - 1;
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= state_count || e.to < 0 || e.to >= state_count)
            throw std::invalid_argument("edge endpoint out of range");
        if (((e.cond.pos | e.cond.neg) & ~used) != 0)
            throw std::invalid_argument("edge condition uses an undeclared proposition");
        if (e.cond.consistent())
            edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const BuchiEdge& a, const BuchiEdge& b) {
        return std::tie(a.from, a.to, a.cond) < std::tie(b.from, b.to, b.cond);
    });
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    offset_.assign(state_count + 1, 0);
    for (const auto& e : edges_)
        ++offset_[e.from + 1];
    for (int q = 0; q < state_count; ++q)
        offset_[q + 1] += offset_[q];
}

bool BuchiAutomaton::has_edge(BuchiState q, const TransitionCondition& cond, BuchiState q2) const
{
    if (q < 0 || q >= state_count())
        return false;
    for (const auto& e : out(q))
        if (e.to == q2 && e.cond == cond)
            return true;
    return false;
}

std::vector<TransitionCondition> BuchiAutomaton::negative_self_loops(BuchiState q) const
{
    std::vector<TransitionCondition> out_loops;
    for (const auto& e : out(q))
        if (e.to == q && classify(e.cond) == ConditionKind::Negative)
            out_loops.push_back(e.cond);
    return out_loops;
}

BuchiAutomaton BuchiAutomaton::relabel(const Alphabet& target) const
{
    std::vector<PropMask> map(aps_.size());
    for (std::size_t i = 0; i < aps_.size(); ++i)
        map[i] = target.bit(aps_.name(i));
    auto translate = [&](PropMask m) {
        PropMask r = 0;
        for (std::size_t i = 0; i < aps_.size(); ++i)
            if (m & (PropMask{1} << i))
                r |= map[i];
        return r;
    };
    std::vector<BuchiEdge> edges;
    edges.reserve(edges_.size());
    for (const auto& e : edges_)
        edges.push_back({e.from, {translate(e.cond.pos), translate(e.cond.neg)}, e.to});
    return BuchiAutomaton(target, state_count(), initial_, accepting_, std::move(edges));
}

namespace {

CsrGraph state_graph(int n, const std::vector<BuchiEdge>& edges)
{
    CsrGraph g;
    g.offset.assign(n + 1, 0);
    for (const auto& e : edges)
        ++g.offset[e.from + 1];
    for (int q = 0; q < n; ++q)
        g.offset[q + 1] += g.offset[q];
    g.target.resize(edges.size());
    std::vector<std::size_t> fill(g.offset.begin(), g.offset.end() - 1);
    for (const auto& e : edges)
        g.target[fill[e.from]++] = e.to;
    return g;
}

std::vector<BuchiEdge> drop_dominated(const BuchiAutomaton& b)
{
    std::vector<BuchiEdge> kept;
    for (int q = 0; q < b.state_count(); ++q) {
        auto out = b.out(q);
        for (std::size_t i = 0; i < out.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < out.size() && !dominated; ++j)
                dominated = j != i && out[j].to == out[i].to && out[j].cond != out[i].cond
                            && out[i].cond.implies(out[j].cond);
            if (!dominated)
                kept.push_back(out[i]);
        }
    }
    return kept;
}

} // namespace

BuchiAutomaton prune(const BuchiAutomaton& b)
{
    const int n = b.state_count();
    const std::vector<BuchiEdge> edges = drop_dominated(b);
    const CsrGraph g = state_graph(n, edges);
    const std::vector<bool> reach = reachable_from(g, {b.initial()});

    std::int32_t ncomp = 0;
    const auto comp = strongly_connected_components(g, ncomp);
    std::vector<int> comp_size(ncomp, 0);
    std::vector<bool> comp_accepting(ncomp, false), comp_loop(ncomp, false);
    for (int q = 0; q < n; ++q) {
        ++comp_size[comp[q]];
        if (b.accepting(q))
            comp_accepting[comp[q]] = true;
    }
    for (const auto& e : edges)
        if (e.from == e.to)
            comp_loop[comp[e.from]] = true;
    std::vector<std::int32_t> good;
    for (int q = 0; q < n; ++q) {
        const auto c = comp[q];
        if (reach[q] && comp_accepting[c] && (comp_size[c] > 1 || comp_loop[c]))
            good.push_back(q);
    }
    const std::vector<bool> live = reachable_from(transpose(g), good);

    if (!live[b.initial()])
        return BuchiAutomaton(b.alphabet(), 1, 0, {false}, {});

    std::vector<int> rename(n, -1);
    std::vector<int> order;
    std::queue<int> todo;
    rename[b.initial()] = 0;
    order.push_back(b.initial());
    todo.push(b.initial());
    while (!todo.empty()) {
        const int q = todo.front();
        todo.pop();
        for (std::size_t e = g.offset[q]; e < g.offset[q + 1]; ++e) {
            const int t = g.target[e];
            if (live[t] && rename[t] == -1) {
                rename[t] = static_cast<int>(order.size());
                order.push_back(t);
                todo.push(t);
            }
        }
    }
    std::vector<bool> accepting;
    for (int q : order)
        accepting.push_back(b.accepting(q));
    std::vector<BuchiEdge> renamed;
    for (const auto& e : edges)
        if (rename[e.from] != -1 && rename[e.to] != -1)
            renamed.push_back({rename[e.from], e.cond, rename[e.to]});
    return BuchiAutomaton(b.alphabet(), static_cast<int>(order.size()), 0, std::move(accepting), std::move(renamed));
}

BuchiAutomaton merge_bisimilar(const BuchiAutomaton& b)
{
    const int n = b.state_count();
    std::vector<int> cls(n);
    for (int q = 0; q < n; ++q)
        cls[q] = b.accepting(q) ? 1 : 0;
    int classes = -1;
    while (true) {
        using Signature = std::pair<int, std::vector<std::pair<TransitionCondition, int>>>;
        std::map<Signature, int> ids;
        std::vector<int> next(n);
        for (int q = 0; q < n; ++q) {
            Signature sig{cls[q], {}};
            for (const auto& e : b.out(q))
                sig.second.push_back({e.cond, cls[e.to]});
            std::sort(sig.second.begin(), sig.second.end());
            sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
            auto [it, fresh] = ids.emplace(std::move(sig), static_cast<int>(ids.size()));
            next[q] = it->second;
        }
        const int count = static_cast<int>(ids.size());
        cls = std::move(next);
        if (count == classes)
            break;
        classes = count;
    }
    std::vector<bool> accepting(classes, false);
    for (int q = 0; q < n; ++q)
        if (b.accepting(q))
            accepting[cls[q]] = true;
    std::vector<BuchiEdge> edges;
    for (const auto& e : b.edges())
        edges.push_back({cls[e.from], e.cond, cls[e.to]});
    return prune(BuchiAutomaton(b.alphabet(), classes, cls[b.initial()], std::move(accepting), std::move(edges)));
}

bool accepts_lasso(const BuchiAutomaton& b, std::span<const PropMask> prefix, std::span<const PropMask> cycle)
{
    if (cycle.empty())
        throw std::invalid_argument("lasso cycle must be non-empty");
    const std::size_t len = prefix.size() + cycle.size();
    const auto letter = [&](std::size_t pos) { return pos < prefix.size() ? prefix[pos] : cycle[pos - prefix.size()]; };
    const auto advance = [&](std::size_t pos) { return pos + 1 < len ? pos + 1 : prefix.size(); };
    const auto node = [&](int q, std::size_t pos) { return static_cast<std::int32_t>(pos * b.state_count() + q); };

    CsrGraph g;
    const std::size_t nodes = len * b.state_count();
    g.offset.assign(nodes + 1, 0);
    for (std::size_t pos = 0; pos < len; ++pos) {
        for (int q = 0; q < b.state_count(); ++q) {
            for (const auto& e : b.out(q))
                if (e.cond.satisfied_by(letter(pos)))
                    g.target.push_back(node(e.to, advance(pos)));
            g.offset[node(q, pos) + 1] = g.target.size();
        }
    }
    const auto reach = reachable_from(g, {node(b.initial(), 0)});
    std::int32_t ncomp = 0;
    const auto comp = strongly_connected_components(g, ncomp);
    std::vector<int> size(ncomp, 0);
    std::vector<bool> self(ncomp, false), acc(ncomp, false);
    for (std::size_t v = 0; v < nodes; ++v) {
        ++size[comp[v]];
        if (reach[v] && b.accepting(static_cast<int>(v % b.state_count())))
            acc[comp[v]] = true;
        for (std::size_t e = g.offset[v]; e < g.offset[v + 1]; ++e)
            if (g.target[e] == static_cast<std::int32_t>(v))
                self[comp[v]] = true;
    }
    for (std::size_t v = 0; v < nodes; ++v)
        if (reach[v] && acc[comp[v]] && (size[comp[v]] > 1 || self[comp[v]]))
            return true;
    return false;
}

} // namespace mtplan
