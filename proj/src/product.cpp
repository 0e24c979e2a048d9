#include "mtplan/product.hpp"

#include <queue>

namespace mtplan {

std::vector<std::pair<std::vector<Cell>, int>> joint_neighbours(const GridWorkspace& w, const std::vector<Cell>& cells)
{
    std::vector<std::pair<std::vector<Cell>, int>> out{{{}, 0}};
    for (const Cell c : cells) {
        const auto moves = neighbours(w, c);
        std::vector<std::pair<std::vector<Cell>, int>> next;
        next.reserve(out.size() * moves.size());
        for (const auto& [partial, cost] : out)
            for (const auto& [to, move_cost] : moves) {
                auto joint = partial;
                joint.push_back(to);
                next.emplace_back(std::move(joint), cost + move_cost);
            }
        out = std::move(next);
    }
    return out;
}

ProductGraph::ProductGraph(const GridWorkspace& w, const BuchiAutomaton& b, const Budget& budget)
    : w_(&w)
    , robots_(w.robot_count())
    , cell_count_(w.cell_count())
    , buchi_states_(b.state_count())
    , accepting_(b.accepting_states())
{
    double space = static_cast<double>(buchi_states_);
    for (std::size_t i = 0; i < robots_; ++i)
        space *= static_cast<double>(cell_count_);
    if (space >= 1.8e19)
        throw std::length_error("product state space too large to index");

    const Labeling labels(w, b.alphabet());
    const Deadline deadline(budget.max_seconds);

    // Automaton successors grouped by target, so each (s', q') is emitted once.
    std::vector<std::vector<std::pair<BuchiState, std::vector<TransitionCondition>>>> by_target(buchi_states_);
    for (int q = 0; q < buchi_states_; ++q)
        for (const auto& e : b.out(q)) {
            auto& groups = by_target[q];
            if (groups.empty() || groups.back().first != e.to)
                groups.push_back({e.to, {}});
            groups.back().second.push_back(e.cond);
        }

    auto intern = [&](const CellId* cells, BuchiState q) {
        const auto k = key(cells, q);
        auto [it, fresh] = index_.emplace(k, static_cast<std::int32_t>(q_.size()));
        if (fresh) {
            if (budget.max_states && q_.size() >= budget.max_states)
                throw BudgetExceeded("product exceeds the state budget");
            cells_.insert(cells_.end(), cells, cells + robots_);
            q_.push_back(q);
        }
        return it->second;
    };

    std::vector<CellId> start;
    for (const Cell c : w.starts())
        start.push_back(w.id(c));
    intern(start.data(), b.initial());

    std::vector<std::size_t> digit(robots_);
    std::vector<CellId> succ(robots_);
    std::vector<std::span<const Move>> moves(robots_);
    for (std::size_t v = 0; v < q_.size(); ++v) {
        if ((v & 0xfff) == 0)
            deadline.check("product construction");
        const BuchiState q = q_[v];
        for (std::size_t i = 0; i < robots_; ++i)
            moves[i] = w.moves(cells_[v * robots_ + i]);
        std::fill(digit.begin(), digit.end(), 0);
        while (true) {
            int cost = 0;
            for (std::size_t i = 0; i < robots_; ++i) {
                succ[i] = moves[i][digit[i]].to;
                cost += moves[i][digit[i]].cost;
            }
            const PropMask label = labels.joint(succ);
            for (const auto& [to, conds] : by_target[q]) {
                bool enabled = false;
                for (const auto& c : conds)
                    if (c.satisfied_by(label)) {
                        enabled = true;
                        break;
                    }
                if (!enabled)
                    continue;
                const auto t = intern(succ.data(), to);
                graph_.target.push_back(t);
                cost_.push_back(static_cast<std::uint8_t>(cost));
            }
            // Odometer with the last robot varying fastest.
            bool exhausted = true;
            for (std::size_t i = robots_; i-- > 0;) {
                if (++digit[i] < moves[i].size()) {
                    exhausted = false;
                    break;
                }
                digit[i] = 0;
            }
            if (exhausted)
                break;
        }
        graph_.offset.push_back(graph_.target.size());
    }
}

std::uint64_t ProductGraph::key(const CellId* cells, BuchiState q) const
{
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < robots_; ++i)
        k = k * cell_count_ + static_cast<std::uint64_t>(cells[i]);
    return k * static_cast<std::uint64_t>(buchi_states_) + static_cast<std::uint64_t>(q);
}

std::vector<CellId> ProductGraph::cells(std::int32_t v) const
{
    return {cells_.begin() + static_cast<std::ptrdiff_t>(v * robots_),
            cells_.begin() + static_cast<std::ptrdiff_t>((v + 1) * robots_)};
}

RunStep ProductGraph::step(std::int32_t v) const
{
    RunStep s;
    for (CellId c : cells(v))
        s.cells.push_back(w_->cell(c));
    s.q = q_[v];
    return s;
}

std::int32_t ProductGraph::find(const std::vector<CellId>& cells, BuchiState q) const
{
    if (cells.size() != robots_)
        return -1;
    auto it = index_.find(key(cells.data(), q));
    return it == index_.end() ? -1 : it->second;
}

} // namespace mtplan
