#include "mtplan/reduced_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <tuple>

namespace mtplan {

std::vector<AbstractConfig> abstract_distant_neighbours(const GridWorkspace& w, const Labeling& labels,
                                                        const TransitionCondition& cond, std::size_t robots)
{
    std::vector<PropMask> positives;
    for (std::size_t bit = 0; bit < kMaxPropositions; ++bit)
        if (cond.pos & (PropMask{1} << bit))
            positives.push_back(PropMask{1} << bit);

    std::vector<AbstractConfig> out;
    if (robots == 0)
        return out;
    std::vector<std::size_t> owner(positives.size(), 0);
    while (true) {
        std::vector<PropMask> share(robots, 0);
        for (std::size_t k = 0; k < positives.size(); ++k)
            share[owner[k]] |= positives[k];

        // Candidate cells per tasked robot.
        std::vector<std::vector<CellId>> choices(robots);
        bool feasible = true;
        for (std::size_t i = 0; i < robots && feasible; ++i) {
            if (share[i] == 0)
                continue;
            for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c) {
                const PropMask m = labels.mask(i, c);
                if (w.is_free(c) && (m & share[i]) == share[i] && (m & cond.neg) == 0)
                    choices[i].push_back(c);
            }
            feasible = !choices[i].empty();
        }
        if (feasible) {
            std::vector<std::size_t> pick(robots, 0);
            while (true) {
                AbstractConfig cfg;
                for (std::size_t i = 0; i < robots; ++i) {
                    cfg.cells.push_back(share[i] ? choices[i][pick[i]] : kWildcard);
                    cfg.obligations.push_back({share[i], cond.neg});
                }
                out.push_back(std::move(cfg));
                std::size_t i = robots;
                bool done = true;
                while (i-- > 0) {
                    if (share[i] && ++pick[i] < choices[i].size()) {
                        done = false;
                        break;
                    }
                    pick[i] = 0;
                }
                if (done)
                    break;
            }
        }

        std::size_t k = positives.size();
        bool exhausted = true;
        while (k-- > 0) {
            if (++owner[k] < robots) {
                exhausted = false;
                break;
            }
            owner[k] = 0;
        }
        if (exhausted)
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t concretization_count(const GridWorkspace& w, const Labeling& labels,
                                 const std::vector<AbstractConfig>& configs)
{
    std::size_t total = 0;
    for (const auto& cfg : configs) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
            if (cfg.cells[i] != kWildcard)
                continue;
            std::size_t options = 0;
            for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c)
                if (w.is_free(c) && cfg.obligations[i].satisfied_by(labels.mask(i, c)))
                    ++options;
            count *= options;
        }
        total += count;
    }
    return total;
}

bool AbstractNode::all_wildcard() const
{
    return std::all_of(cells.begin(), cells.end(), [](CellId c) { return c == kWildcard; });
}

AbstractReducedGraph::AbstractReducedGraph(const GridWorkspace& w, const BuchiAutomaton& b)
{
    const std::size_t n = w.robot_count();
    const Labeling labels(w, b.alphabet());
    std::vector<std::vector<bool>> reachable;
    for (std::size_t i = 0; i < n; ++i)
        reachable.push_back(w.component(w.id(w.start(i))));

    using Key = std::tuple<std::vector<CellId>, BuchiState, std::vector<TransitionCondition>>;
    std::map<Key, int> index;
    auto node_id = [&](AbstractNode node) {
        Key key{node.cells, node.q, node.obligations};
        auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(nodes_.size()));
        if (fresh) {
            nodes_.push_back(std::move(node));
            out_.emplace_back();
        }
        return it->second;
    };

    AbstractNode init;
    for (std::size_t i = 0; i < n; ++i)
        init.cells.push_back(w.id(w.start(i)));
    init.q = b.initial();
    init.obligations.assign(n, {});
    node_id(std::move(init));

    std::map<TransitionCondition, std::vector<AbstractConfig>> realizations;
    auto realize = [&](const TransitionCondition& cond) -> const std::vector<AbstractConfig>& {
        auto it = realizations.find(cond);
        if (it != realizations.end())
            return it->second;
        auto configs = abstract_distant_neighbours(w, labels, cond, n);
        std::erase_if(configs, [&](const AbstractConfig& cfg) {
            for (std::size_t i = 0; i < n; ++i)
                if (cfg.cells[i] != kWildcard && !reachable[i][cfg.cells[i]])
                    return true;
            return false;
        });
        return realizations.emplace(cond, std::move(configs)).first->second;
    };

    auto adjacent = [&](CellId a, CellId c) {
        const Cell x = w.cell(a), y = w.cell(c);
        return std::abs(x.x - y.x) + std::abs(x.y - y.y) <= 1;
    };

    std::vector<bool> has_incoming;
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
        const BuchiState q = nodes_[u].q;
        const auto loops = b.negative_self_loops(q);
        std::vector<std::optional<TransitionCondition>> dwell_options;
        if (loops.empty())
            dwell_options.push_back(std::nullopt);
        for (const auto& l : loops)
            dwell_options.emplace_back(l);

        if (b.accepting(q))
            for (const auto& l : loops)
                stationary_.emplace_back(static_cast<int>(u), l);

        for (const auto& e : b.out(q)) {
            const bool positive = classify(e.cond) == ConditionKind::Positive;
            if (!positive && e.to == q)
                continue; // waiting is carried by the dwell option
            std::vector<int> targets;
            if (positive) {
                for (const auto& cfg : realize(e.cond))
                    targets.push_back(node_id({cfg.cells, e.to, cfg.obligations}));
            } else {
                targets.push_back(node_id({std::vector<CellId>(n, kWildcard), e.to,
                                           std::vector<TransitionCondition>(n)}));
            }
            for (int v : targets) {
                for (const auto& dwell : dwell_options) {
                    if (!dwell) {
                        bool apart = false;
                        for (std::size_t i = 0; i < n && !apart; ++i)
                            apart = nodes_[u].known(i) && nodes_[v].known(i)
                                    && !adjacent(nodes_[u].cells[i], nodes_[v].cells[i]);
                        if (apart)
                            continue;
                    }
                    const int id = static_cast<int>(edges_.size());
                    edges_.push_back({static_cast<int>(u), v, e.cond, dwell, !dwell.has_value()});
                    out_[u].push_back(id);
                    if (has_incoming.size() < nodes_.size())
                        has_incoming.resize(nodes_.size(), false);
                    has_incoming[v] = true;
                }
            }
        }
    }
    has_incoming.resize(nodes_.size(), false);
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        if (has_incoming[v] && b.accepting(nodes_[v].q))
            finals_.push_back(static_cast<int>(v));
}

} // namespace mtplan
