#pragma once

#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtplan::ltl {

enum class Op { True, False, Prop, Not, And, Or, Implies, Next, Until, Release, Always, Eventually };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable LTL syntax tree node.
struct Formula {
    Op op;
    std::string prop; // Prop only
    FormulaPtr lhs;   // unary operand, or left operand
    FormulaPtr rhs;   // right operand of binary operators
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_prop(std::string name);
FormulaPtr make_unary(Op op, FormulaPtr arg);
FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs);

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t column, const std::string& what)
        : std::runtime_error("column " + std::to_string(column) + ": " + what), column_(column)
    {
    }
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Predicate deciding whether a proposition name is declared.
using PropositionFilter = std::function<bool(std::string_view)>;

/// Parses mission text. Operators: `G F X U R ! & | ->`, `true`, `false`.
/// Precedence from tightest: unary, `U`/`R` (right-assoc), `&`, `|`, `->`
/// (right-assoc). Throws SyntaxError on unknown propositions or bad syntax.
FormulaPtr parse_ltl(std::string_view text, const PropositionFilter& known = {});
FormulaPtr parse_ltl(std::string_view text, const std::set<std::string>& alphabet);

/// Rewrites derived operators into true, prop, !, &, X, U.
FormulaPtr normalize(const FormulaPtr& f);

std::string to_string(const FormulaPtr& f);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::set<std::string> propositions(const FormulaPtr& f);

} // namespace mtplan::ltl
