#include "mtplan/condition.hpp"

#include <cctype>

namespace mtplan {

Alphabet::Alphabet(const std::vector<std::string>& names)
{
    for (const auto& n : names)
        add(n);
}

std::size_t Alphabet::add(std::string_view name)
{
    if (auto idx = index_of(name))
        return *idx;
    if (names_.size() >= kMaxPropositions)
        throw std::length_error("alphabet exceeds 64 propositions");
    names_.emplace_back(name);
    index_.emplace(names_.back(), names_.size() - 1);
    return names_.size() - 1;
}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

PropMask Alphabet::bit(std::string_view name) const
{
    auto idx = index_of(name);
    if (!idx)
        throw std::out_of_range("unknown proposition '" + std::string(name) + "'");
    return PropMask{1} << *idx;
}

ConditionKind classify(const TransitionCondition& cond)
{
    return cond.pos == 0 ? ConditionKind::Negative : ConditionKind::Positive;
}

std::string to_string(const TransitionCondition& cond, const Alphabet& aps)
{
    if (cond.is_true())
        return "true";
    std::string out;
    for (std::size_t i = 0; i < aps.size(); ++i) {
        const PropMask b = PropMask{1} << i;
        if (!(cond.pos & b) && !(cond.neg & b))
            continue;
        if (!out.empty())
            out += " & ";
        if (cond.neg & b)
            out += '!';
        out += aps.name(i);
    }
    return out;
}

TransitionCondition parse_condition(std::string_view text, const Alphabet& aps)
{
    TransitionCondition c;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (text.substr(i) == "true")
        return c;
    while (i < text.size()) {
        skip();
        bool negated = false;
        if (i < text.size() && text[i] == '!') {
            negated = true;
            ++i;
        }
        std::size_t start = i;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i])))
            ++i;
        if (start == i)
            throw std::invalid_argument("malformed condition: " + std::string(text));
        const PropMask b = aps.bit(text.substr(start, i - start));
        (negated ? c.neg : c.pos) |= b;
        skip();
        if (i < text.size()) {
            if (text[i] != '&')
                throw std::invalid_argument("malformed condition: " + std::string(text));
            ++i;
        }
    }
    return c;
}

} // namespace mtplan
