#include "mtplan/ltl.hpp"

#include <cctype>
#include <vector>

namespace mtplan::ltl {

FormulaPtr make_true() { return std::make_shared<const Formula>(Formula{Op::True, {}, nullptr, nullptr}); }
FormulaPtr make_false() { return std::make_shared<const Formula>(Formula{Op::False, {}, nullptr, nullptr}); }
FormulaPtr make_prop(std::string name)
{
    return std::make_shared<const Formula>(Formula{Op::Prop, std::move(name), nullptr, nullptr});
}
FormulaPtr make_unary(Op op, FormulaPtr arg)
{
    return std::make_shared<const Formula>(Formula{op, {}, std::move(arg), nullptr});
}
FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs)
{
    return std::make_shared<const Formula>(Formula{op, {}, std::move(lhs), std::move(rhs)});
}

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Next, Until, Release, Always, Eventually, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char ch = s[i];
        const std::size_t col = i + 1;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j])))
                ++j;
            std::string word(s.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "G")
                k = Tok::Always;
            else if (word == "F")
                k = Tok::Eventually;
            else if (word == "X")
                k = Tok::Next;
            else if (word == "U")
                k = Tok::Until;
            else if (word == "R")
                k = Tok::Release;
            else if (word == "true")
                k = Tok::True;
            else if (word == "false")
                k = Tok::False;
            out.push_back({k, std::move(word), col});
            i = j;
        } else if (ch == '(') {
            out.push_back({Tok::LParen, "(", col});
            ++i;
        } else if (ch == ')') {
            out.push_back({Tok::RParen, ")", col});
            ++i;
        } else if (ch == '!') {
            out.push_back({Tok::Not, "!", col});
            ++i;
        } else if (ch == '&') {
            i += (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
            out.push_back({Tok::And, "&", col});
        } else if (ch == '|') {
            i += (i + 1 < s.size() && s[i + 1] == '|') ? 2 : 1;
            out.push_back({Tok::Or, "|", col});
        } else if (ch == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            out.push_back({Tok::Implies, "->", col});
            i += 2;
        } else {
            throw SyntaxError(col, std::string("unexpected character '") + ch + "'");
        }
    }
    out.push_back({Tok::End, "", s.size() + 1});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const PropositionFilter& known) : toks_(std::move(toks)), known_(known) {}

    FormulaPtr parse()
    {
        FormulaPtr f = implication();
        if (peek().kind == Tok::RParen)
            throw SyntaxError(peek().column, "unbalanced parentheses: unexpected ')'");
        if (peek().kind != Tok::End)
            throw SyntaxError(peek().column, "trailing tokens starting at '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    FormulaPtr implication()
    {
        FormulaPtr lhs = disjunction();
        if (peek().kind == Tok::Implies) {
            take();
            return make_binary(Op::Implies, lhs, implication());
        }
        return lhs;
    }

    FormulaPtr disjunction()
    {
        FormulaPtr lhs = conjunction();
        if (peek().kind == Tok::Or) {
            take();
            return make_binary(Op::Or, lhs, disjunction());
        }
        return lhs;
    }

    FormulaPtr conjunction()
    {
        FormulaPtr lhs = binary_temporal();
        if (peek().kind == Tok::And) {
            take();
            return make_binary(Op::And, lhs, conjunction());
        }
        return lhs;
    }

    FormulaPtr binary_temporal()
    {
        FormulaPtr lhs = unary();
        if (peek().kind == Tok::Until || peek().kind == Tok::Release) {
            const Op op = take().kind == Tok::Until ? Op::Until : Op::Release;
            return make_binary(op, lhs, binary_temporal());
        }
        return lhs;
    }

    FormulaPtr unary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Not:
            take();
            return make_unary(Op::Not, unary());
        case Tok::Next:
            take();
            return make_unary(Op::Next, unary());
        case Tok::Always:
            take();
            return make_unary(Op::Always, unary());
        case Tok::Eventually:
            take();
            return make_unary(Op::Eventually, unary());
        case Tok::True:
            take();
            return make_true();
        case Tok::False:
            take();
            return make_false();
        case Tok::Ident: {
            take();
            if (known_ && !known_(t.text))
                throw SyntaxError(t.column, "unknown proposition '" + t.text + "'");
            return make_prop(t.text);
        }
        case Tok::LParen: {
            take();
            FormulaPtr inner = implication();
            if (peek().kind != Tok::RParen)
                throw SyntaxError(peek().column, "unbalanced parentheses: expected ')'");
            take();
            return inner;
        }
        case Tok::End:
            throw SyntaxError(t.column, "unexpected end of formula");
        default:
            throw SyntaxError(t.column, "unexpected token '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const PropositionFilter& known_;
};

} // namespace

FormulaPtr parse_ltl(std::string_view text, const PropositionFilter& known)
{
    return Parser(tokenize(text), known).parse();
}

FormulaPtr parse_ltl(std::string_view text, const std::set<std::string>& alphabet)
{
    return parse_ltl(text, [&](std::string_view n) { return alphabet.count(std::string(n)) > 0; });
}

FormulaPtr normalize(const FormulaPtr& f)
{
    auto neg = [](FormulaPtr a) { return make_unary(Op::Not, std::move(a)); };
    auto conj = [](FormulaPtr a, FormulaPtr b) { return make_binary(Op::And, std::move(a), std::move(b)); };
    switch (f->op) {
    case Op::True:
    case Op::Prop:
        return f;
    case Op::False:
        return neg(make_true());
    case Op::Not:
        return neg(normalize(f->lhs));
    case Op::And:
        return conj(normalize(f->lhs), normalize(f->rhs));
    case Op::Or:
        return neg(conj(neg(normalize(f->lhs)), neg(normalize(f->rhs))));
    case Op::Implies:
        return neg(conj(normalize(f->lhs), neg(normalize(f->rhs))));
    case Op::Next:
        return make_unary(Op::Next, normalize(f->lhs));
    case Op::Until:
        return make_binary(Op::Until, normalize(f->lhs), normalize(f->rhs));
    case Op::Release:
        return neg(make_binary(Op::Until, neg(normalize(f->lhs)), neg(normalize(f->rhs))));
    case Op::Eventually:
        return make_binary(Op::Until, make_true(), normalize(f->lhs));
    case Op::Always:
        return neg(make_binary(Op::Until, make_true(), neg(normalize(f->lhs))));
    }
    return f;
}

std::string to_string(const FormulaPtr& f)
{
    switch (f->op) {
    case Op::True:
        return "true";
    case Op::False:
        return "false";
    case Op::Prop:
        return f->prop;
    case Op::Not:
        return "!" + to_string(f->lhs);
    case Op::Next:
        return "X " + to_string(f->lhs);
    case Op::Always:
        return "G " + to_string(f->lhs);
    case Op::Eventually:
        return "F " + to_string(f->lhs);
    case Op::And:
        return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Op::Or:
        return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Op::Implies:
        return "(" + to_string(f->lhs) + " -> " + to_string(f->rhs) + ")";
    case Op::Until:
        return "(" + to_string(f->lhs) + " U " + to_string(f->rhs) + ")";
    case Op::Release:
        return "(" + to_string(f->lhs) + " R " + to_string(f->rhs) + ")";
    }
    return {};
}

bool equal(const FormulaPtr& a, const FormulaPtr& b)
{
    if (!a || !b)
        return a == b;
    if (a->op != b->op || a->prop != b->prop)
        return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::set<std::string> propositions(const FormulaPtr& f)
{
    std::set<std::string> out;
    std::vector<const Formula*> stack{f.get()};
    while (!stack.empty()) {
        const Formula* n = stack.back();
        stack.pop_back();
        if (n->op == Op::Prop)
            out.insert(n->prop);
        if (n->lhs)
            stack.push_back(n->lhs.get());
        if (n->rhs)
            stack.push_back(n->rhs.get());
    }
    return out;
}

} // namespace mtplan::ltl
