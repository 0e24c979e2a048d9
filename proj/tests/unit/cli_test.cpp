#include <doctest.h>

#include "mtplan/bench.hpp"
#include "mtplan/mission.hpp"
#include "mtplan/plan_record.hpp"
#include "mtplan/render.hpp"
#include "support.hpp"

using namespace mtplan;

namespace {

PlanRecord warehouse_record(Algorithm algo)
{
    const auto w = load_workspace_file(support::fixture("warehouse.grid"));
    const std::string mission = "G(F P1 & F P2 & !P3)";
    auto r = plan_mission(w, mission_automaton(w, mission), algo);
    r.mission = mission;
    r.workspace = support::fixture("warehouse.grid");
    return r;
}

} // namespace

TEST_CASE("plan records round trip byte for byte")
{
    for (auto algo : {Algorithm::MtStar, Algorithm::Baseline}) {
        const auto r = warehouse_record(algo);
        const auto text = write_record(r);
        const auto back = read_record(text);
        CHECK(back == r);
        CHECK(write_record(back) == text);
        CHECK(back.algorithm == to_string(algo));
        CHECK(back.run.suffix_cost == 0);
    }
}

TEST_CASE("malformed and mismatched records are rejected")
{
    CHECK_THROWS_AS(read_record("{"), RecordError);
    CHECK_THROWS_AS(read_record("{}"), RecordError);
    auto text = write_record(warehouse_record(Algorithm::MtStar));
    const auto at = text.find("\"schema_version\": 1");
    REQUIRE(at != std::string::npos);
    text.replace(at, 19, "\"schema_version\": 99");
    CHECK_THROWS_AS(read_record(text), RecordError);
}

TEST_CASE("algorithm names")
{
    CHECK(parse_algorithm("mtstar") == Algorithm::MtStar);
    CHECK(parse_algorithm("baseline") == Algorithm::Baseline);
    CHECK_THROWS_AS(parse_algorithm("dijkstra"), std::invalid_argument);
}

TEST_CASE("suite files")
{
    const auto suite = parse_suite("# comment\n\nmaps/a.grid ; 2 ; G F a\n/abs/b.grid;1;G F b\n", "/base");
    REQUIRE(suite.size() == 2);
    CHECK(suite[0].workspace == "/base/maps/a.grid");
    CHECK(suite[0].robots == 2);
    CHECK(suite[0].mission == "G F a");
    CHECK(suite[1].workspace == "/abs/b.grid");
    CHECK(parse_suite("").empty());
    CHECK_THROWS_AS(parse_suite("a.grid ; x ; G F a"), ParseError);
    CHECK_THROWS_AS(parse_suite("a.grid ; 1"), ParseError);
}

TEST_CASE("bench cross-checks both planners")
{
    const auto suite = parse_suite("warehouse.grid ; 2 ; G(F P1 & F P2 & !P3)\n"
                                   "gather9.grid ; 2 ; G F gather1 & G F gather2\n",
                                   FIXTURE_DIR);
    const auto rows = run_bench(suite, {});
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.baseline.status == "ok");
        CHECK(r.mtstar.status == "ok");
        CHECK(r.costs_agree);
        CHECK(r.baseline.verified);
        CHECK(r.mtstar.verified);
    }
    CHECK(bench_table(rows).find("yes") != std::string::npos);
    CHECK(bench_table({}).find("workspace") == 0);
    CHECK(bench_json({}) == "[]\n");
}

TEST_CASE("over-budget baseline rows show a dash")
{
    const auto suite = parse_suite("gather9.grid ; 2 ; " + support::mission("phi2") + "\n", FIXTURE_DIR);
    BenchOptions options;
    options.plan.baseline_budget.max_states = 100;
    const auto rows = run_bench(suite, options);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].baseline.status == "budget");
    CHECK(rows[0].mtstar.status == "ok");
    CHECK(rows[0].costs_agree);
    const auto table = bench_table(rows);
    const auto last = table.substr(table.find('\n') + 1);
    CHECK(last.find(" - ") != std::string::npos);
}

TEST_CASE("rendering is deterministic")
{
    const auto w = load_workspace_file(support::fixture("warehouse.grid"));
    const auto r = warehouse_record(Algorithm::MtStar);
    const auto ascii = render_ascii(r, w);
    CHECK(ascii == render_ascii(r, w));
    CHECK(ascii.find('A') != std::string::npos);
    CHECK(ascii.find('B') != std::string::npos);
    const auto svg = render_svg(r, w);
    CHECK(svg == render_svg(r, w));
    CHECK(svg.find("<circle") != std::string::npos);
}
