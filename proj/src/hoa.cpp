#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "mtplan/buchi.hpp"

namespace mtplan {

namespace {

std::string label_text(const TransitionCondition& c, std::size_t props)
{
    if (c.is_true())
        return "t";
    std::string out;
    for (std::size_t i = 0; i < props; ++i) {
        const PropMask b = PropMask{1} << i;
        if (!((c.pos | c.neg) & b))
            continue;
        if (!out.empty())
            out += '&';
        if (c.neg & b)
            out += '!';
        out += std::to_string(i);
    }
    return out;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out + '"';
}

// Tokenizer over the whole HOA text.
class Lexer {
public:
    explicit Lexer(std::string_view text) : s_(text) {}

    void skip()
    {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            } else if (s_.compare(pos_, 2, "/*") == 0) {
                const auto end = s_.find("*/", pos_ + 2);
                if (end == std::string_view::npos)
                    throw HoaError("unterminated comment");
                pos_ = end + 2;
            } else {
                break;
            }
        }
    }

    bool done()
    {
        skip();
        return pos_ >= s_.size();
    }

    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char ch)
    {
        if (peek() != ch)
            return false;
        ++pos_;
        return true;
    }

    void expect(char ch)
    {
        if (!accept(ch))
            throw HoaError(std::string("expected '") + ch + "' at offset " + std::to_string(pos_));
    }

    // Header names ("States:"), identifiers, and --BODY--/--END-- markers.
    std::string word()
    {
        skip();
        const std::size_t start = pos_;
        if (s_.compare(pos_, 2, "--") == 0) {
            const auto end = s_.find("--", pos_ + 2);
            if (end == std::string_view::npos)
                throw HoaError("malformed marker");
            pos_ = end + 2;
            return std::string(s_.substr(start, pos_ - start));
        }
        while (pos_ < s_.size()
               && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'
                   || s_[pos_] == '@' || s_[pos_] == '.'))
            ++pos_;
        if (pos_ < s_.size() && s_[pos_] == ':')
            ++pos_;
        if (start == pos_)
            throw HoaError("expected a name at offset " + std::to_string(pos_));
        return std::string(s_.substr(start, pos_ - start));
    }

    bool at_integer()
    {
        skip();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    long integer()
    {
        if (!at_integer())
            throw HoaError("expected an integer at offset " + std::to_string(pos_));
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            v = v * 10 + (s_[pos_++] - '0');
        return v;
    }

    bool at_string() { return peek() == '"'; }

    std::string string()
    {
        expect('"');
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size())
                ++pos_;
            out += s_[pos_++];
        }
        if (pos_ >= s_.size())
            throw HoaError("unterminated string");
        ++pos_;
        return out;
    }

    // Skips the remaining tokens of a header item up to the next header name.
    void skip_item()
    {
        while (!done()) {
            const std::size_t save = pos_;
            if (at_string()) {
                string();
                continue;
            }
            if (at_integer()) {
                integer();
                continue;
            }
            const char ch = peek();
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '-') {
                std::string w = word();
                if (w.back() == ':' || w.rfind("--", 0) == 0) {
                    pos_ = save;
                    return;
                }
                continue;
            }
            ++pos_;
        }
    }

    std::size_t offset() const { return pos_; }
    void rewind(std::size_t p) { pos_ = p; }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

using Dnf = std::vector<TransitionCondition>;

Dnf dnf_and(const Dnf& a, const Dnf& b)
{
    Dnf out;
    for (const auto& x : a)
        for (const auto& y : b) {
            const auto c = x & y;
            if (c.consistent())
                out.push_back(c);
        }
    return out;
}

// Label grammar: or := and ('|' and)*; and := unary ('&' unary)*;
// unary := '!' unary | 't' | 'f' | int | '(' or ')'.
class LabelParser {
public:
    LabelParser(Lexer& lex, std::size_t props) : lex_(lex), props_(props) {}

    Dnf parse(bool negate = false) { return disjunction(negate); }

private:
    Dnf disjunction(bool neg)
    {
        Dnf acc = conjunction(neg);
        while (lex_.accept('|')) {
            Dnf rhs = conjunction(neg);
            acc = neg ? dnf_and(acc, rhs) : concat(acc, rhs);
        }
        return acc;
    }

    Dnf conjunction(bool neg)
    {
        Dnf acc = unary(neg);
        while (lex_.accept('&')) {
            Dnf rhs = unary(neg);
            acc = neg ? concat(acc, rhs) : dnf_and(acc, rhs);
        }
        return acc;
    }

    Dnf unary(bool neg)
    {
        if (lex_.accept('!'))
            return unary(!neg);
        if (lex_.accept('(')) {
            Dnf inner = disjunction(neg);
            lex_.expect(')');
            return inner;
        }
        if (lex_.at_integer()) {
            const long ap = lex_.integer();
            if (ap < 0 || static_cast<std::size_t>(ap) >= props_)
                throw HoaError("label references undeclared AP " + std::to_string(ap));
            TransitionCondition c;
            (neg ? c.neg : c.pos) = PropMask{1} << ap;
            return {c};
        }
        const char ch = lex_.peek();
        if (ch == 't' || ch == 'f') {
            const std::string w = lex_.word();
            if (w != "t" && w != "f")
                throw HoaError("unsupported label token '" + w + "'");
            const bool value = (w == "t") != neg;
            return value ? Dnf{TransitionCondition{}} : Dnf{};
        }
        if (ch == '@')
            throw HoaError("aliases are not supported");
        throw HoaError("malformed label at offset " + std::to_string(lex_.offset()));
    }

    static Dnf concat(Dnf a, const Dnf& b)
    {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    Lexer& lex_;
    std::size_t props_;
};

// Parses "Acceptance: <n> <cond>" and reports whether it is plain Büchi
// (true) or trivially all-accepting (false).
bool parse_acceptance(Lexer& lex)
{
    const long sets = lex.integer();
    const std::size_t start = lex.offset();
    if (sets == 0) {
        if (lex.word() == "t")
            return false;
        throw HoaError("unsupported acceptance condition");
    }
    if (sets == 1) {
        if (lex.word() == "Inf") {
            lex.expect('(');
            const long set = lex.integer();
            lex.expect(')');
            const std::size_t after = lex.offset();
            if (set == 0 && (lex.done() || (lex.peek() != '&' && lex.peek() != '|')))
                return true;
            lex.rewind(after);
        }
    }
    lex.rewind(start);
    throw HoaError("unsupported acceptance condition: only state-based Buchi is accepted");
}

} // namespace

std::string export_hoa(const BuchiAutomaton& b, std::string_view name)
{
    std::ostringstream out;
    out << "HOA: v1\n";
    if (!name.empty())
        out << "name: " << quote(std::string(name)) << "\n";
    out << "States: " << b.state_count() << "\n";
    out << "Start: " << b.initial() << "\n";
    out << "AP: " << b.alphabet().size();
    for (const auto& ap : b.alphabet().names())
        out << ' ' << quote(ap);
    out << "\n";
    out << "acc-name: Buchi\n";
    out << "Acceptance: 1 Inf(0)\n";
    out << "properties: trans-labels explicit-labels state-acc\n";
    out << "--BODY--\n";
    for (int q = 0; q < b.state_count(); ++q) {
        out << "State: " << q;
        if (b.accepting(q))
            out << " {0}";
        out << "\n";
        for (const auto& e : b.out(q))
            out << "[" << label_text(e.cond, b.alphabet().size()) << "] " << e.to << "\n";
    }
    out << "--END--\n";
    return out.str();
}

BuchiAutomaton import_hoa(std::string_view text)
{
    Lexer lex(text);
    if (lex.word() != "HOA:")
        throw HoaError("malformed header: missing 'HOA:'");
    if (lex.word() != "v1")
        throw HoaError("malformed header: unsupported HOA version");

    long states = -1;
    std::vector<long> starts;
    std::vector<std::string> aps;
    bool have_aps = false;
    bool have_acceptance = false;
    bool buchi = true;

    while (true) {
        if (lex.done())
            throw HoaError("malformed header: missing --BODY--");
        const std::string item = lex.word();
        if (item == "--BODY--")
            break;
        if (item == "States:") {
            states = lex.integer();
        } else if (item == "Start:") {
            starts.push_back(lex.integer());
            if (lex.peek() == '&')
                throw HoaError("conjunctive start states are not supported");
        } else if (item == "AP:") {
            const long n = lex.integer();
            for (long i = 0; i < n; ++i)
                aps.push_back(lex.string());
            have_aps = true;
        } else if (item == "Acceptance:") {
            buchi = parse_acceptance(lex);
            have_acceptance = true;
        } else if (item == "Alias:") {
            throw HoaError("aliases are not supported");
        } else if (item.back() == ':') {
            lex.skip_item();
        } else {
            throw HoaError("malformed header near '" + item + "'");
        }
    }
    if (!have_acceptance)
        throw HoaError("malformed header: missing Acceptance");
    if (!have_aps)
        aps.clear();
    if (starts.empty())
        throw HoaError("malformed header: missing Start");

    Alphabet alphabet;
    for (const auto& ap : aps) {
        if (alphabet.contains(ap))
            throw HoaError("duplicate AP '" + ap + "'");
        alphabet.add(ap);
    }

    std::vector<bool> accepting;
    std::vector<BuchiEdge> edges;
    auto ensure = [&](long q) {
        if (q < 0 || (states >= 0 && q >= states))
            throw HoaError("state " + std::to_string(q) + " out of range");
        if (static_cast<long>(accepting.size()) <= q)
            accepting.resize(q + 1, !buchi);
    };
    long current = -1;
    while (true) {
        if (lex.done())
            throw HoaError("missing --END--");
        if (lex.peek() == '[') {
            if (current < 0)
                throw HoaError("edge before any State:");
            lex.expect('[');
            const Dnf cubes = LabelParser(lex, alphabet.size()).parse();
            lex.expect(']');
            const long to = lex.integer();
            if (lex.peek() == '&')
                throw HoaError("universal branching is not supported");
            if (lex.peek() == '{')
                throw HoaError("transition-based acceptance marks are not supported");
            ensure(to);
            for (const auto& c : cubes)
                edges.push_back({static_cast<int>(current), c, static_cast<int>(to)});
            continue;
        }
        if (lex.at_integer())
            throw HoaError("implicit labels are not supported");
        const std::string w = lex.word();
        if (w == "--END--")
            break;
        if (w != "State:")
            throw HoaError("unexpected '" + w + "' in body");
        if (lex.peek() == '[')
            throw HoaError("state labels are not supported");
        current = lex.integer();
        ensure(current);
        if (lex.at_string())
            lex.string();
        if (lex.accept('{')) {
            bool marked = false;
            while (!lex.accept('}')) {
                if (lex.integer() != 0)
                    throw HoaError("acceptance set out of range");
                marked = true;
            }
            if (buchi)
                accepting[current] = marked;
        }
    }

    if (states < 0)
        states = static_cast<long>(accepting.size());
    if (states == 0)
        throw HoaError("automaton has no states");
    for (long s : starts)
        ensure(s);
    accepting.resize(states, !buchi);

    int initial = static_cast<int>(starts.front());
    if (starts.size() > 1) {
        // Fresh initial state copying the outgoing edges of every start state.
        initial = static_cast<int>(states);
        accepting.push_back(false);
        std::vector<BuchiEdge> extra;
        for (long s : starts)
            for (const auto& e : edges)
                if (e.from == s)
                    extra.push_back({initial, e.cond, e.to});
        edges.insert(edges.end(), extra.begin(), extra.end());
        ++states;
    }
    return BuchiAutomaton(alphabet, static_cast<int>(states), initial, std::move(accepting), std::move(edges));
}

BuchiAutomaton import_hoa_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return import_hoa(ss.str());
}

} // namespace mtplan
