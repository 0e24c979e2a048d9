// LTL to Büchi translation: formulas are put in negation normal form and
// expanded into (condition, next obligations, postponed eventualities)
// terms, which yields a transition-based generalized Büchi automaton. That
// automaton is then degeneralized and cleaned up.

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

#include "mtplan/buchi.hpp"

namespace mtplan {

namespace {

enum class NOp { True, False, Lit, And, Or, Next, Until, Release };

struct Node {
    NOp op;
    int a = -1;
    int b = -1;
    int prop = -1;
    bool negated = false;
};

struct Term {
    TransitionCondition cond;
    std::vector<int> next; // sorted, unique node ids
    std::uint64_t promises = 0;

    auto operator<=>(const Term&) const = default;
};

bool subset(const std::vector<int>& a, const std::vector<int>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// t1 makes t2 redundant: weaker label, fewer obligations, fewer promises.
bool dominates(const Term& t1, const Term& t2)
{
    return t2.cond.implies(t1.cond) && (t1.promises & ~t2.promises) == 0 && subset(t1.next, t2.next);
}

std::vector<Term> simplify(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    std::vector<Term> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < terms.size() && !redundant; ++j)
            redundant = j != i && dominates(terms[j], terms[i]);
        if (!redundant)
            out.push_back(terms[i]);
    }
    return out;
}

std::vector<Term> conjoin(const std::vector<Term>& xs, const std::vector<Term>& ys)
{
    std::vector<Term> out;
    for (const auto& x : xs) {
        for (const auto& y : ys) {
            Term t;
            t.cond = x.cond & y.cond;
            if (!t.cond.consistent())
                continue;
            std::set_union(x.next.begin(), x.next.end(), y.next.begin(), y.next.end(), std::back_inserter(t.next));
            t.promises = x.promises | y.promises;
            out.push_back(std::move(t));
        }
    }
    return simplify(std::move(out));
}

class Translator {
public:
    explicit Translator(const Alphabet& aps) : aps_(aps)
    {
        true_ = intern({NOp::True});
        false_ = intern({NOp::False});
    }

    BuchiAutomaton run(const ltl::FormulaPtr& f)
    {
        const int root = nnf(f, false);
        for (int id = 0; id < static_cast<int>(nodes_.size()); ++id) {
            if (nodes_[id].op == NOp::Until) {
                if (until_index_.size() >= 64)
                    throw std::length_error("formula has more than 64 until subformulas");
                until_index_.emplace(id, static_cast<int>(until_index_.size()));
            }
        }
        build_generalized(root);
        return degeneralize();
    }

private:
    struct GenEdge {
        int from;
        TransitionCondition cond;
        std::uint64_t acc;
        int to;
        auto operator<=>(const GenEdge&) const = default;
    };

    int intern(Node n)
    {
        const auto key = std::make_tuple(static_cast<int>(n.op), n.a, n.b, n.prop, n.negated);
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        nodes_.push_back(n);
        index_.emplace(key, static_cast<int>(nodes_.size() - 1));
        return static_cast<int>(nodes_.size() - 1);
    }

    int conj(int a, int b)
    {
        if (a == false_ || b == false_)
            return false_;
        if (a == true_)
            return b;
        if (b == true_ || a == b)
            return a;
        if (a > b)
            std::swap(a, b);
        return intern({NOp::And, a, b});
    }

    int disj(int a, int b)
    {
        if (a == true_ || b == true_)
            return true_;
        if (a == false_)
            return b;
        if (b == false_ || a == b)
            return a;
        if (a > b)
            std::swap(a, b);
        return intern({NOp::Or, a, b});
    }

    int temporal(NOp op, int a, int b)
    {
        if (op == NOp::Until && b == true_)
            return true_;
        if (op == NOp::Release && b == false_)
            return false_;
        if (b == false_ && op == NOp::Until)
            return false_;
        if (b == true_ && op == NOp::Release)
            return true_;
        return intern({op, a, b});
    }

    int nnf(const ltl::FormulaPtr& f, bool neg)
    {
        using ltl::Op;
        switch (f->op) {
        case Op::True:
            return neg ? false_ : true_;
        case Op::False:
            return neg ? true_ : false_;
        case Op::Prop: {
            auto idx = aps_.index_of(f->prop);
            if (!idx)
                throw std::invalid_argument("proposition '" + f->prop + "' missing from the alphabet");
            return intern({NOp::Lit, -1, -1, static_cast<int>(*idx), neg});
        }
        case Op::Not:
            return nnf(f->lhs, !neg);
        case Op::And:
            return neg ? disj(nnf(f->lhs, true), nnf(f->rhs, true)) : conj(nnf(f->lhs, false), nnf(f->rhs, false));
        case Op::Or:
            return neg ? conj(nnf(f->lhs, true), nnf(f->rhs, true)) : disj(nnf(f->lhs, false), nnf(f->rhs, false));
        case Op::Implies:
            return neg ? conj(nnf(f->lhs, false), nnf(f->rhs, true)) : disj(nnf(f->lhs, true), nnf(f->rhs, false));
        case Op::Next: {
            const int a = nnf(f->lhs, neg);
            if (a == true_ || a == false_)
                return a;
            return intern({NOp::Next, a});
        }
        case Op::Until:
            return neg ? temporal(NOp::Release, nnf(f->lhs, true), nnf(f->rhs, true))
                       : temporal(NOp::Until, nnf(f->lhs, false), nnf(f->rhs, false));
        case Op::Release:
            return neg ? temporal(NOp::Until, nnf(f->lhs, true), nnf(f->rhs, true))
                       : temporal(NOp::Release, nnf(f->lhs, false), nnf(f->rhs, false));
        case Op::Always:
            return neg ? temporal(NOp::Until, true_, nnf(f->lhs, true)) : temporal(NOp::Release, false_, nnf(f->lhs, false));
        case Op::Eventually:
            return neg ? temporal(NOp::Release, false_, nnf(f->lhs, true)) : temporal(NOp::Until, true_, nnf(f->lhs, false));
        }
        throw std::logic_error("unhandled operator");
    }

    Term next_term(int id, std::uint64_t promise) const
    {
        Term t;
        if (id != true_)
            t.next.push_back(id);
        t.promises = promise;
        return t;
    }

    const std::vector<Term>& expand(int id)
    {
        if (auto it = memo_.find(id); it != memo_.end())
            return it->second;
        const Node n = nodes_[id];
        std::vector<Term> out;
        switch (n.op) {
        case NOp::True:
            out.push_back(Term{});
            break;
        case NOp::False:
            break;
        case NOp::Lit: {
            Term t;
            (n.negated ? t.cond.neg : t.cond.pos) = PropMask{1} << n.prop;
            out.push_back(t);
            break;
        }
        case NOp::And:
            out = conjoin(expand(n.a), expand(n.b));
            break;
        case NOp::Or: {
            out = expand(n.a);
            const auto& rhs = expand(n.b);
            out.insert(out.end(), rhs.begin(), rhs.end());
            out = simplify(std::move(out));
            break;
        }
        case NOp::Next:
            out.push_back(next_term(n.a, 0));
            break;
        case NOp::Until: {
            out = expand(n.b);
            const auto postponed = conjoin(expand(n.a), {next_term(id, std::uint64_t{1} << until_index_.at(id))});
            out.insert(out.end(), postponed.begin(), postponed.end());
            out = simplify(std::move(out));
            break;
        }
        case NOp::Release: {
            out = conjoin(expand(n.a), expand(n.b));
            const auto waiting = conjoin(expand(n.b), {next_term(id, 0)});
            out.insert(out.end(), waiting.begin(), waiting.end());
            out = simplify(std::move(out));
            break;
        }
        }
        return memo_.emplace(id, std::move(out)).first->second;
    }

    std::vector<Term> expand_state(const std::vector<int>& members)
    {
        std::vector<Term> acc{Term{}};
        for (int m : members)
            acc = conjoin(acc, expand(m));
        return acc;
    }

    void build_generalized(int root)
    {
        const std::uint64_t all = until_index_.empty() ? 0 : (~std::uint64_t{0} >> (64 - until_index_.size()));
        std::map<std::vector<int>, int> ids;
        std::vector<std::vector<int>> states;
        auto state_id = [&](std::vector<int> members) {
            auto [it, fresh] = ids.emplace(members, static_cast<int>(states.size()));
            if (fresh)
                states.push_back(std::move(members));
            return it->second;
        };
        state_id(root == true_ ? std::vector<int>{} : std::vector<int>{root});
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto terms = expand_state(states[s]);
            for (const auto& t : terms) {
                const int to = state_id(t.next);
                gen_edges_.push_back({static_cast<int>(s), t.cond, all & ~t.promises, to});
            }
        }
        gen_states_ = static_cast<int>(states.size());
        merge_generalized();
    }

    // Quotient of the generalized automaton by its coarsest bisimulation.
    void merge_generalized()
    {
        std::vector<int> cls(gen_states_, 0);
        int classes = 1;
        while (true) {
            std::vector<std::vector<std::tuple<TransitionCondition, std::uint64_t, int>>> sig(gen_states_);
            for (const auto& e : gen_edges_)
                sig[e.from].emplace_back(e.cond, e.acc, cls[e.to]);
            std::map<std::pair<int, std::vector<std::tuple<TransitionCondition, std::uint64_t, int>>>, int> ids;
            std::vector<int> next(gen_states_);
            for (int s = 0; s < gen_states_; ++s) {
                std::sort(sig[s].begin(), sig[s].end());
                sig[s].erase(std::unique(sig[s].begin(), sig[s].end()), sig[s].end());
                next[s] = ids.emplace(std::make_pair(cls[s], std::move(sig[s])), static_cast<int>(ids.size())).first->second;
            }
            const int count = static_cast<int>(ids.size());
            cls = std::move(next);
            if (count == classes)
                break;
            classes = count;
        }
        std::vector<GenEdge> merged;
        for (const auto& e : gen_edges_)
            merged.push_back({cls[e.from], e.cond, e.acc, cls[e.to]});
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        gen_edges_ = std::move(merged);
        gen_initial_ = cls[0];
        gen_states_ = classes;
    }

    BuchiAutomaton degeneralize()
    {
        const int k = static_cast<int>(until_index_.size());
        std::vector<std::vector<GenEdge>> out(gen_states_);
        for (const auto& e : gen_edges_)
            out[e.from].push_back(e);

        std::map<std::pair<int, int>, int> ids;
        std::vector<std::pair<int, int>> states;
        auto state_id = [&](int s, int level) {
            auto [it, fresh] = ids.emplace(std::make_pair(s, level), static_cast<int>(states.size()));
            if (fresh)
                states.emplace_back(s, level);
            return it->second;
        };
        state_id(gen_initial_, 0);
        std::vector<BuchiEdge> edges;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto [s, level] = states[i];
            const int base = level == k ? 0 : level;
            for (const auto& e : out[s]) {
                int j = base;
                while (j < k && (e.acc >> j & 1))
                    ++j;
                edges.push_back({static_cast<int>(i), e.cond, state_id(e.to, j)});
            }
        }
        std::vector<bool> accepting;
        for (const auto& st : states)
            accepting.push_back(st.second == k);
        BuchiAutomaton b(aps_, static_cast<int>(states.size()), 0, std::move(accepting), std::move(edges));
        return prune(merge_bisimilar(prune(b)));
    }

    const Alphabet& aps_;
    std::vector<Node> nodes_;
    std::map<std::tuple<int, int, int, int, bool>, int> index_;
    std::map<int, std::vector<Term>> memo_;
    std::map<int, int> until_index_;
    int true_ = -1;
    int false_ = -1;

    std::vector<GenEdge> gen_edges_;
    int gen_states_ = 0;
    int gen_initial_ = 0;
};

} // namespace

BuchiAutomaton ltl_to_buchi(const ltl::FormulaPtr& f, const Alphabet& aps)
{
    return Translator(aps).run(f);
}

BuchiAutomaton ltl_to_buchi(const ltl::FormulaPtr& f)
{
    const auto props = ltl::propositions(f);
    return ltl_to_buchi(f, Alphabet(std::vector<std::string>(props.begin(), props.end())));
}

} // namespace mtplan
