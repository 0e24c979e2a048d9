#include "mtplan/verify.hpp"

#include <cstdlib>

namespace mtplan {

namespace {

class Auditor {
public:
    Auditor(const Run& run, const GridWorkspace& w, const BuchiAutomaton& b)
        : run_(run)
        , w_(w)
        , b_(b)
        , labels_(w, b.alphabet())
    {
    }

    VerifyReport check()
    {
        const std::size_t offset = run_.prefix.size();
        if (run_.prefix.empty())
            fail(0, "empty prefix");
        if (run_.suffix.size() < 2)
            fail(offset, "suffix needs at least one transition");
        if (!report_.violations.empty())
            return finish();

        bool shapes = true;
        for (std::size_t k = 0; k < offset; ++k)
            shapes = check_step(k, run_.prefix[k]) && shapes;
        for (std::size_t k = 0; k < run_.suffix.size(); ++k)
            shapes = check_step(offset + k, run_.suffix[k]) && shapes;
        if (!shapes)
            return finish();

        const RunStep& first = run_.prefix.front();
        for (std::size_t i = 0; i < w_.robot_count(); ++i)
            if (first.cells[i] != w_.start(i))
                fail(0, "robot " + std::to_string(i + 1) + " does not begin on its start cell");
        if (first.q != b_.initial())
            fail(0, "prefix does not begin in the initial automaton state");

        for (std::size_t k = 1; k < offset; ++k)
            check_transition(k, run_.prefix[k - 1], run_.prefix[k]);
        if (!(run_.suffix.front() == run_.prefix.back()))
            fail(offset, "suffix does not start where the prefix ends");
        if (!(run_.suffix.back() == run_.suffix.front()))
            fail(offset + run_.suffix.size() - 1, "suffix is not closed");
        for (std::size_t k = 1; k < run_.suffix.size(); ++k)
            check_transition(offset + k, run_.suffix[k - 1], run_.suffix[k]);

        bool accepting = false;
        for (const auto& s : run_.suffix)
            accepting = accepting || b_.accepting(s.q);
        if (!accepting)
            fail(offset, "suffix visits no accepting state");

        report_.prefix_cost = path_cost(run_.prefix);
        report_.suffix_cost = path_cost(run_.suffix);
        if (report_.prefix_cost != run_.prefix_cost)
            fail(0, "reported prefix cost " + std::to_string(run_.prefix_cost) + " differs from "
                        + std::to_string(report_.prefix_cost));
        if (report_.suffix_cost != run_.suffix_cost)
            fail(offset, "reported suffix cost " + std::to_string(run_.suffix_cost) + " differs from "
                             + std::to_string(report_.suffix_cost));

        report_.certificate_ok = report_.violations.empty();
        report_.trace_accepted = simulate();
        if (report_.certificate_ok && !report_.trace_accepted)
            fail(offset, "label trace is rejected by the automaton");
        collisions();
        return finish();
    }

private:
    void fail(std::size_t step, std::string reason) { report_.violations.push_back({step, std::move(reason)}); }

    VerifyReport finish()
    {
        report_.accepted = report_.violations.empty() && report_.certificate_ok && report_.trace_accepted;
        return report_;
    }

    bool check_step(std::size_t index, const RunStep& s)
    {
        if (s.cells.size() != w_.robot_count()) {
            fail(index, "wrong number of robots");
            return false;
        }
        bool ok = true;
        for (const Cell c : s.cells)
            if (!w_.is_free(c)) {
                fail(index, "cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is blocked or off the grid");
                ok = false;
            }
        if (s.q < 0 || s.q >= b_.state_count()) {
            fail(index, "automaton state out of range");
            ok = false;
        }
        return ok;
    }

    PropMask label(const RunStep& s) const
    {
        std::vector<CellId> ids;
        for (const Cell c : s.cells)
            ids.push_back(w_.id(c));
        return labels_.joint(ids);
    }

    void check_transition(std::size_t index, const RunStep& from, const RunStep& to)
    {
        for (std::size_t i = 0; i < from.cells.size(); ++i) {
            const Cell a = from.cells[i], c = to.cells[i];
            if (std::abs(a.x - c.x) + std::abs(a.y - c.y) > 1)
                fail(index, "robot " + std::to_string(i + 1) + " jumps more than one cell");
        }
        const PropMask l = label(to);
        bool found = false;
        for (const auto& e : b_.out(from.q))
            found = found || (e.to == to.q && e.cond.satisfied_by(l));
        if (!found)
            fail(index, "no automaton transition " + std::to_string(from.q) + " -> " + std::to_string(to.q)
                            + " matches the arrival label");
    }

    // Transitions read the label of the state being entered.
    bool simulate() const
    {
        std::vector<PropMask> prefix, cycle;
        for (std::size_t k = 1; k < run_.prefix.size(); ++k)
            prefix.push_back(label(run_.prefix[k]));
        for (std::size_t k = 1; k < run_.suffix.size(); ++k)
            cycle.push_back(label(run_.suffix[k]));
        return accepts_lasso(b_, prefix, cycle);
    }

    void collisions()
    {
        std::vector<const RunStep*> steps;
        for (const auto& s : run_.prefix)
            steps.push_back(&s);
        for (const auto& s : run_.suffix)
            steps.push_back(&s);
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto& cells = steps[k]->cells;
            bool clash = false;
            for (std::size_t i = 0; i < cells.size() && !clash; ++i)
                for (std::size_t j = i + 1; j < cells.size() && !clash; ++j) {
                    clash = cells[i] == cells[j];
                    if (!clash && k > 0) {
                        const auto& prev = steps[k - 1]->cells;
                        clash = prev[i] == cells[j] && prev[j] == cells[i] && cells[i] != cells[j];
                    }
                }
            if (clash)
                report_.collision_steps.push_back(k);
        }
    }

    const Run& run_;
    const GridWorkspace& w_;
    const BuchiAutomaton& b_;
    Labeling labels_;
    VerifyReport report_;
};

} // namespace

VerifyReport check_run(const Run& run, const GridWorkspace& w, const BuchiAutomaton& b)
{
    return Auditor(run, w, b).check();
}

} // namespace mtplan
