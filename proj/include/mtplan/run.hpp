#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtplan/buchi.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// One product state: a cell per robot and the automaton state.
struct RunStep {
    std::vector<Cell> cells;
    BuchiState q = 0;

    auto operator<=>(const RunStep&) const = default;
};

/// Lasso plan: prefix from the initial product state to the cycle entry,
/// then a cycle whose first and last steps equal the prefix's last step.
struct Run {
    std::vector<RunStep> prefix;
    std::vector<RunStep> suffix;
    long prefix_cost = 0;
    long suffix_cost = 0;

    bool operator==(const Run&) const = default;
};

/// Sum of joint move costs (one per robot that changes cell) along `steps`.
long path_cost(const std::vector<RunStep>& steps);

/// Ordering used for deterministic tie-breaking between equally good runs.
bool state_less(const RunStep& a, const RunStep& b);

class Unsatisfiable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Resource limits for a planner call. Zero means unlimited.
struct Budget {
    std::size_t max_states = 0;
    double max_seconds = 0;
};

/// Wall-clock guard for a Budget.
class Deadline {
public:
    explicit Deadline(double seconds)
        : seconds_(seconds)
        , start_(std::chrono::steady_clock::now())
    {
    }
    bool expired() const
    {
        return seconds_ > 0
               && std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > seconds_;
    }
    void check(const char* what) const
    {
        if (expired())
            throw BudgetExceeded(std::string(what) + ": time budget exceeded");
    }

private:
    double seconds_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace mtplan
