#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

using namespace mtplan;

namespace oracle {

namespace {

using Truth = std::vector<bool>;

struct Lasso {
    std::vector<Letter> word;
    std::size_t loop;
    std::size_t next(std::size_t i) const { return i + 1 < word.size() ? i + 1 : loop; }
};

// Least (or greatest) fixpoint of val[i] = base[i] || (keep[i] && val[next(i)]).
Truth fixpoint(const Lasso& l, const Truth& base, const Truth& keep, bool greatest)
{
    Truth val(l.word.size(), greatest);
    for (std::size_t round = 0; round <= 2 * l.word.size() + 2; ++round)
        for (std::size_t i = l.word.size(); i-- > 0;)
            val[i] = base[i] || (keep[i] && val[l.next(i)]);
    return val;
}

Truth eval(const ltl::FormulaPtr& f, const Lasso& l)
{
    const std::size_t n = l.word.size();
    Truth out(n);
    using ltl::Op;
    switch (f->op) {
    case Op::True:
        return Truth(n, true);
    case Op::False:
        return Truth(n, false);
    case Op::Prop:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = l.word[i].count(f->prop) > 0;
        return out;
    case Op::Not: {
        const auto a = eval(f->lhs, l);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = !a[i];
        return out;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
        const auto a = eval(f->lhs, l), b = eval(f->rhs, l);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = f->op == Op::And ? (a[i] && b[i]) : f->op == Op::Or ? (a[i] || b[i]) : (!a[i] || b[i]);
        return out;
    }
    case Op::Next: {
        const auto a = eval(f->lhs, l);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = a[l.next(i)];
        return out;
    }
    case Op::Until:
        return fixpoint(l, eval(f->rhs, l), eval(f->lhs, l), false);
    case Op::Eventually:
        return fixpoint(l, eval(f->lhs, l), Truth(n, true), false);
    case Op::Always: {
        // G a = not F not a
        auto a = eval(f->lhs, l);
        for (std::size_t i = 0; i < n; ++i)
            a[i] = !a[i];
        auto v = fixpoint(l, a, Truth(n, true), false);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = !v[i];
        return v;
    }
    case Op::Release: {
        // a R b = not (not a U not b)
        auto a = eval(f->lhs, l), b = eval(f->rhs, l);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = !a[i];
            b[i] = !b[i];
        }
        auto v = fixpoint(l, b, a, false);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = !v[i];
        return v;
    }
    }
    return out;
}

} // namespace

bool holds(const ltl::FormulaPtr& f, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle)
{
    Lasso l;
    l.word = prefix;
    l.word.insert(l.word.end(), cycle.begin(), cycle.end());
    l.loop = prefix.size();
    return eval(f, l)[0];
}

void for_each_lasso(const std::vector<std::string>& props, std::size_t max_len,
                    const std::function<void(const std::vector<Letter>&, const std::vector<Letter>&)>& fn)
{
    std::vector<Letter> letters;
    for (std::size_t m = 0; m < (std::size_t{1} << props.size()); ++m) {
        Letter l;
        for (std::size_t k = 0; k < props.size(); ++k)
            if (m >> k & 1)
                l.insert(props[k]);
        letters.push_back(l);
    }
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::size_t> pick(len, 0);
        while (true) {
            std::vector<Letter> word;
            for (auto p : pick)
                word.push_back(letters[p]);
            for (std::size_t split = 0; split < len; ++split)
                fn({word.begin(), word.begin() + static_cast<std::ptrdiff_t>(split)},
                   {word.begin() + static_cast<std::ptrdiff_t>(split), word.end()});
            std::size_t k = 0;
            while (k < len && ++pick[k] == letters.size())
                pick[k++] = 0;
            if (k == len)
                break;
        }
    }
}

PropMask mask_of(const Letter& letter, const Alphabet& aps)
{
    PropMask m = 0;
    for (const auto& p : letter)
        if (auto i = aps.index_of(p))
            m |= PropMask{1} << *i;
    return m;
}

std::set<std::vector<int>> simple_cycles(const Digraph& g, int root)
{
    std::set<std::vector<int>> out;
    std::vector<int> others;
    for (int v = 0; v < g.nodes; ++v)
        if (v != root)
            others.push_back(v);
    // Every subset of the other nodes, in every order.
    for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
        std::vector<int> chosen;
        for (std::size_t k = 0; k < others.size(); ++k)
            if (mask >> k & 1)
                chosen.push_back(others[k]);
        std::sort(chosen.begin(), chosen.end());
        do {
            std::vector<int> nodes{root};
            nodes.insert(nodes.end(), chosen.begin(), chosen.end());
            nodes.push_back(root);
            std::vector<std::vector<int>> partial{{}};
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                std::vector<std::vector<int>> grown;
                for (const auto& p : partial)
                    for (std::size_t e = 0; e < g.edges.size(); ++e)
                        if (g.edges[e].first == nodes[k] && g.edges[e].second == nodes[k + 1]) {
                            auto q = p;
                            q.push_back(static_cast<int>(e));
                            grown.push_back(std::move(q));
                        }
                partial = std::move(grown);
            }
            for (auto& p : partial)
                out.insert(p);
        } while (std::next_permutation(chosen.begin(), chosen.end()));
    }
    return out;
}

Letter joint_label(const GridWorkspace& w, const std::vector<Cell>& cells, const Alphabet& aps)
{
    Letter out;
    for (const auto& name : aps.names()) {
        // r<k><p>: robot k (1-based) stands on a cell labeled p.
        std::size_t digits = 1;
        while (digits < name.size() && std::isdigit(static_cast<unsigned char>(name[digits])))
            ++digits;
        const bool scoped = name.size() > 2 && name[0] == 'r' && digits > 1 && digits < name.size()
                            && !w.cell_alphabet().contains(name);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& here = w.labels(w.id(cells[i]));
            if (scoped) {
                const std::size_t k = std::stoul(name.substr(1, digits - 1));
                if (k == i + 1 && here.count(name.substr(digits)))
                    out.insert(name);
            } else if (here.count(name)) {
                out.insert(name);
            }
        }
    }
    return out;
}

std::optional<LassoCost> min_lasso_cost(const GridWorkspace& w, const BuchiAutomaton& b)
{
    using State = std::pair<std::vector<Cell>, BuchiState>;
    std::map<State, int> index;
    std::vector<State> states;
    std::vector<std::vector<std::pair<int, int>>> adj;
    auto id_of = [&](const State& s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(states.size()));
        if (fresh) {
            states.push_back(s);
            adj.emplace_back();
        }
        return it->second;
    };
    id_of({w.starts(), b.initial()});
    for (std::size_t v = 0; v < states.size(); ++v) {
        const auto [cells, q] = states[v];
        // Joint moves by recursion over robots.
        std::vector<std::pair<std::vector<Cell>, int>> joint{{{}, 0}};
        for (const Cell c : cells) {
            std::vector<std::pair<std::vector<Cell>, int>> grown;
            for (const auto& [prefix, cost] : joint)
                for (const auto& [n, mc] : neighbours(w, c)) {
                    auto p = prefix;
                    p.push_back(n);
                    grown.push_back({std::move(p), cost + mc});
                }
            joint = std::move(grown);
        }
        for (const auto& [next, cost] : joint) {
            const PropMask label = mask_of(joint_label(w, next, b.alphabet()), b.alphabet());
            std::set<BuchiState> targets;
            for (const auto& e : b.edges())
                if (e.from == q && e.cond.satisfied_by(label))
                    targets.insert(e.to);
            for (BuchiState t : targets) {
                const int u = id_of({next, t});
                adj[v].push_back({u, cost});
            }
        }
    }

    // 0-1 BFS distances from one source.
    auto distances = [&](const std::vector<std::pair<int, int>>& seeds) {
        std::vector<long> d(states.size(), std::numeric_limits<long>::max());
        std::deque<int> dq;
        for (const auto& [u, c] : seeds)
            if (c < d[u]) {
                d[u] = c;
                c == 0 ? dq.push_front(u) : dq.push_back(u);
            }
        while (!dq.empty()) {
            const int v = dq.front();
            dq.pop_front();
            for (const auto& [u, c] : adj[v])
                if (d[v] + c < d[u]) {
                    d[u] = d[v] + c;
                    c == 0 ? dq.push_front(u) : dq.push_back(u);
                }
        }
        return d;
    };
    const auto from_init = distances({{0, 0}});
    std::optional<LassoCost> best;
    for (std::size_t f = 0; f < states.size(); ++f) {
        if (!b.accepting(states[f].second))
            continue;
        const auto d = distances(adj[f]);
        if (d[f] == std::numeric_limits<long>::max())
            continue;
        const LassoCost c{d[f], from_init[f]};
        if (!best || c.suffix < best->suffix || (c.suffix == best->suffix && c.prefix < best->prefix))
            best = c;
    }
    return best;
}

std::optional<long> constrained_cost(const GridWorkspace& w, const Labeling& labels, std::size_t robot, CellId source,
                                     const std::vector<SegmentSpec>& segments, CellId target)
{
    const long inf = std::numeric_limits<long>::max() / 2;
    const std::size_t cells = w.cell_count();
    const std::size_t m = segments.size();
    // best[j][waited][c]: robot at c, segment j not yet fired.
    std::vector<std::vector<std::vector<long>>> best(m + 1, std::vector<std::vector<long>>(2, std::vector<long>(cells, inf)));
    best[0][0][source] = 0;
    auto ok = [&](CellId c, PropMask neg) { return (labels.mask(robot, c) & neg) == 0; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < m; ++j)
            for (int waited = 0; waited < 2; ++waited)
                for (CellId c = 0; c < static_cast<CellId>(cells); ++c) {
                    const long here = best[j][waited][c];
                    if (here >= inf)
                        continue;
                    for (const auto& [n, cost] : neighbours(w, w.cell(c))) {
                        const CellId t = w.id(n);
                        const SegmentSpec& s = segments[j];
                        auto relax = [&](long& slot) {
                            if (here + cost < slot) {
                                slot = here + cost;
                                changed = true;
                            }
                        };
                        if ((!s.multi_step || waited) && ok(t, s.arrive_neg) && (j + 1 < m || t == target))
                            relax(best[j + 1][0][t]);
                        if (s.multi_step && ok(t, s.dwell_neg))
                            relax(best[j][1][t]);
                    }
                }
    }
    const long v = m == 0 ? (source == target ? 0 : inf) : best[m][0][target];
    if (v >= inf)
        return std::nullopt;
    return v;
}

} // namespace oracle
