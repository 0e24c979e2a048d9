#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mtplan {

/// Bit set over the propositions of an Alphabet. Bit i is proposition i.
using PropMask = std::uint64_t;

inline constexpr std::size_t kMaxPropositions = 64;

/// Ordered set of atomic proposition names. Indices are stable once assigned.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(const std::vector<std::string>& names);

    /// Returns the index of `name`, inserting it if absent.
    std::size_t add(std::string_view name);
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }

    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }

    PropMask bit(std::string_view name) const;

    bool operator==(const Alphabet& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class ConditionKind { Negative, Positive };

/// Conjunction of literals. `pos` holds propositions required true, `neg`
/// those required false.
struct TransitionCondition {
    PropMask pos = 0;
    PropMask neg = 0;

    bool consistent() const { return (pos & neg) == 0; }
    bool satisfied_by(PropMask label) const { return (label & pos) == pos && (label & neg) == 0; }
    bool is_true() const { return pos == 0 && neg == 0; }

    /// True if every label satisfying *this also satisfies `weaker`.
    bool implies(const TransitionCondition& weaker) const
    {
        return (weaker.pos & ~pos) == 0 && (weaker.neg & ~neg) == 0;
    }

    /// Conjunction; the result may be inconsistent.
    TransitionCondition operator&(const TransitionCondition& o) const { return {pos | o.pos, neg | o.neg}; }

    auto operator<=>(const TransitionCondition&) const = default;
};

/// Negative iff no positive literal; the empty (true) condition is Negative.
ConditionKind classify(const TransitionCondition& cond);

/// Renders as `P1 & !P2`, or `true` for the empty condition.
std::string to_string(const TransitionCondition& cond, const Alphabet& aps);

/// Literal-conjunction text parser matching to_string's output.
TransitionCondition parse_condition(std::string_view text, const Alphabet& aps);

struct TransitionConditionHash {
    std::size_t operator()(const TransitionCondition& c) const noexcept
    {
        return std::hash<std::uint64_t>{}(c.pos * 0x9e3779b97f4a7c15ULL ^ c.neg);
    }
};

inline int popcount(PropMask m) { return __builtin_popcountll(m); }

} // namespace mtplan
