#include <doctest.h>

#include "mtplan/buchi.hpp"
#include "mtplan/ltl.hpp"
#include "mtplan/mission.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mtplan;

namespace {

// Formulas over {a, b} covering every operator.
const std::vector<std::string> kFormulas{
    "a",
    "!a",
    "X a",
    "a U b",
    "a R b",
    "F a",
    "G a",
    "G F a",
    "F G a",
    "G (F a & F b)",
    "G (a -> X (!a U b))",
    "G (a -> X (!a U b)) & G F a",
    "G (F a & F b & !b) | a",
    "(a -> b) & X X !a",
    "F (a & X b)",
    "true U a",
    "false | G !b",
};

// Checks the automaton of `text` against direct evaluation on every short lasso.
void check_language(const std::string& text)
{
    const auto f = ltl::parse_ltl(text, std::set<std::string>{"a", "b"});
    const Alphabet aps({"a", "b"});
    const auto b = ltl_to_buchi(f, aps);
    oracle::for_each_lasso({"a", "b"}, 4, [&](const auto& prefix, const auto& cycle) {
        std::vector<PropMask> p, c;
        for (const auto& l : prefix)
            p.push_back(oracle::mask_of(l, aps));
        for (const auto& l : cycle)
            c.push_back(oracle::mask_of(l, aps));
        CHECK_MESSAGE(accepts_lasso(b, p, c) == oracle::holds(f, prefix, cycle), text);
    });
}

} // namespace

TEST_CASE("parse and print")
{
    const std::set<std::string> aps{"P1", "P2", "P3"};
    const auto f = ltl::parse_ltl("G(F P1 & F P2 & !P3)", aps);
    CHECK(f->op == ltl::Op::Always);
    CHECK(ltl::propositions(f) == aps);
    CHECK(ltl::equal(ltl::parse_ltl(ltl::to_string(f), aps), f));
    CHECK(ltl::equal(ltl::parse_ltl("a -> b -> a", std::set<std::string>{"a", "b"}),
                     ltl::parse_ltl("a -> (b -> a)", std::set<std::string>{"a", "b"})));
}

TEST_CASE("normalization keeps only the core grammar")
{
    const auto f = ltl::normalize(ltl::parse_ltl("G (a -> F b) | a R b", std::set<std::string>{"a", "b"}));
    std::function<void(const ltl::FormulaPtr&)> walk = [&](const ltl::FormulaPtr& g) {
        if (!g)
            return;
        using ltl::Op;
        CHECK((g->op == Op::True || g->op == Op::Prop || g->op == Op::Not || g->op == Op::And || g->op == Op::Next
               || g->op == Op::Until));
        walk(g->lhs);
        walk(g->rhs);
    };
    walk(f);
}

TEST_CASE("parse errors")
{
    const std::set<std::string> aps{"a"};
    CHECK_THROWS_AS(ltl::parse_ltl("G b", aps), ltl::SyntaxError);
    CHECK_THROWS_AS(ltl::parse_ltl("G (a", aps), ltl::SyntaxError);
    CHECK_THROWS_AS(ltl::parse_ltl("a)", aps), ltl::SyntaxError);
    CHECK_THROWS_AS(ltl::parse_ltl("a a", aps), ltl::SyntaxError);
    CHECK_THROWS_AS(ltl::parse_ltl("", aps), ltl::SyntaxError);
}

TEST_CASE("translation agrees with lasso evaluation")
{
    for (const auto& text : kFormulas)
        check_language(text);
}

TEST_CASE("translated automata are well formed")
{
    for (const auto& text : kFormulas) {
        const auto b = ltl_to_buchi(ltl::parse_ltl(text, std::set<std::string>{"a", "b"}), Alphabet({"a", "b"}));
        CHECK(b.initial() >= 0);
        CHECK(b.initial() < b.state_count());
        for (const auto& e : b.edges()) {
            CHECK(e.cond.consistent());
            CHECK(e.from < b.state_count());
            CHECK(e.to < b.state_count());
        }
    }
}

TEST_CASE("HOA round trip preserves the language")
{
    const Alphabet aps({"a", "b"});
    for (const auto& text : kFormulas) {
        const auto b = ltl_to_buchi(ltl::parse_ltl(text, std::set<std::string>{"a", "b"}), aps);
        const auto hoa = export_hoa(b);
        const auto back = import_hoa(hoa).relabel(aps);
        CHECK(back.state_count() == b.state_count());
        CHECK(back.edges() == b.edges());
        CHECK(export_hoa(back) == hoa);
    }
}

TEST_CASE("HOA import expands labels into cubes")
{
    const auto b = import_hoa("HOA: v1\nStates: 2\nStart: 0\nAP: 2 \"a\" \"b\"\nacc-name: Buchi\n"
                              "Acceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0 | !1] 1\n[t] 0\n"
                              "State: 1 {0}\n[t] 1\n--END--\n");
    CHECK(b.state_count() == 2);
    CHECK(b.accepting(1));
    CHECK(b.out(0).size() == 3);
    CHECK_THROWS_AS(import_hoa("HOA: v1\nStates: 1\n--BODY--\n--END--\n"), HoaError);
    CHECK_THROWS_AS(import_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 1 Fin(0)\n--BODY--\n--END--\n"),
                    HoaError);
}

TEST_CASE("classification of transition conditions")
{
    const Alphabet aps({"P1", "P2", "P3"});
    CHECK(classify(parse_condition("P2 & !P3", aps)) == ConditionKind::Positive);
    CHECK(classify(parse_condition("!P1 & !P3", aps)) == ConditionKind::Negative);
    CHECK(classify(parse_condition("true", aps)) == ConditionKind::Negative);
    CHECK(to_string(parse_condition("P1 & !P3", aps), aps) == "P1 & !P3");
}

TEST_CASE("mission automata for the gather suite")
{
    const auto w = load_workspace_file(support::fixture("gather9.grid"));
    CHECK(mission_automaton(w, support::mission("phi1")).state_count() == 12);
    CHECK(mission_automaton(w, support::mission("phi2")).state_count() == 5);
    CHECK_THROWS_AS(mission_automaton(w, "G F nowhere"), ltl::SyntaxError);
}
