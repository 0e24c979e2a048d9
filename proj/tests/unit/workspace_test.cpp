#include <doctest.h>

#include "mtplan/workspace.hpp"
#include "support.hpp"

using namespace mtplan;

namespace {

GridWorkspace warehouse() { return load_workspace_file(support::fixture("warehouse.grid")); }

} // namespace

TEST_CASE("load a minimal workspace")
{
    const auto w = load_workspace("grid 1 1 1\n1\n");
    CHECK(w.width() == 1);
    CHECK(w.height() == 1);
    CHECK(w.robot_count() == 1);
    CHECK(w.start(0) == Cell{0, 0});
    CHECK(w.propositions().empty());
}

TEST_CASE("warehouse labels")
{
    const auto w = warehouse();
    CHECK(labels_of(w, {6, 6}) == std::set<std::string>{"P1"});
    CHECK(labels_of(w, {0, 7}) == std::set<std::string>{"P2"});
    CHECK(labels_of(w, {7, 0}) == std::set<std::string>{"P2"});
    CHECK(labels_of(w, {3, 3}).empty());
    CHECK(w.start(0) == Cell{0, 0});
    CHECK(w.start(1) == Cell{4, 7});
}

TEST_CASE("malformed workspace files")
{
    CHECK_THROWS_AS(load_workspace("grid 3 2 1\n1..\n..\n"), ParseError);
    CHECK_THROWS_AS(load_workspace("grid 2 1 1\n1Z\n"), ParseError);
    CHECK_THROWS_AS(load_workspace("grid 2 1 2\n11\n"), ParseError);
    CHECK_THROWS_AS(load_workspace("grid 2 1 2\n1.\n"), ParseError);
    CHECK_THROWS_AS(GridWorkspace(2, 1, {true, false}, {{}, {}}, {{0, 0}}), std::invalid_argument);
    try {
        load_workspace("grid 3 2 1\n1..\n..\n");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("comments and label lines")
{
    const auto w = load_workspace("grid 2 2 1\n1A\n#.\n# a comment\nlabel A x,y\n");
    CHECK(labels_of(w, {1, 0}) == std::set<std::string>{"x", "y"});
    CHECK(w.is_obstacle({0, 1}));
}

TEST_CASE("text round trip")
{
    const auto w = warehouse();
    const auto again = load_workspace(to_text(w));
    CHECK(to_text(again) == to_text(w));
    for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c) {
        CHECK(again.is_free(c) == w.is_free(c));
        CHECK(again.labels(c) == w.labels(c));
    }
}

TEST_CASE("neighbours follow the motion model")
{
    const auto open = load_workspace("grid 3 3 1\n...\n.1.\n...\n");
    const auto inner = neighbours(open, {1, 1});
    REQUIRE(inner.size() == 5);
    CHECK(inner[0] == std::pair<Cell, int>{{1, 1}, 0});
    CHECK(inner[1] == std::pair<Cell, int>{{1, 0}, 1});
    CHECK(inner[2] == std::pair<Cell, int>{{1, 2}, 1});
    CHECK(inner[3] == std::pair<Cell, int>{{0, 1}, 1});
    CHECK(inner[4] == std::pair<Cell, int>{{2, 1}, 1});

    const auto square = load_workspace("grid 2 2 1\n1.\n..\n");
    const auto corner = neighbours(square, {0, 0});
    REQUIRE(corner.size() == 3);
    CHECK(corner[0].first == Cell{0, 0});
    CHECK(corner[1].first == Cell{0, 1});
    CHECK(corner[2].first == Cell{1, 0});

    const auto blocked = load_workspace("grid 3 3 1\n.#.\n.1.\n...\n");
    CHECK(neighbours(blocked, {1, 1}).size() == 4);
    CHECK_THROWS_AS(neighbours(blocked, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(neighbours(blocked, {3, 0}), std::invalid_argument);
}

TEST_CASE("neighbours never leave the free grid")
{
    for (unsigned seed = 0; seed < 50; ++seed) {
        const auto w = support::random_workspace(seed, 6);
        if (!w)
            continue;
        for (CellId id = 0; id < static_cast<CellId>(w->cell_count()); ++id) {
            if (!w->is_free(id))
                continue;
            const auto n = neighbours(*w, w->cell(id));
            CHECK(n.size() >= 1);
            CHECK(n.size() <= 5);
            for (const auto& [c, cost] : n) {
                CHECK(w->is_free(c));
                const int manhattan = std::abs(c.x - w->cell(id).x) + std::abs(c.y - w->cell(id).y);
                CHECK(cost == manhattan);
                CHECK(manhattan <= 1);
            }
        }
    }
}

TEST_CASE("satisfies matches a brute-force label check")
{
    const auto w = warehouse();
    const Alphabet aps({"P1", "P2", "P3"});
    CHECK(satisfies(w, {6, 6}, parse_condition("P1 & !P2 & !P3", aps), aps));
    CHECK_FALSE(satisfies(w, {6, 6}, parse_condition("!P1 & !P3", aps), aps));
    CHECK(satisfies(w, {3, 3}, parse_condition("!P1 & !P2 & !P3", aps), aps));

    for (PropMask pos = 0; pos < 8; ++pos)
        for (PropMask neg = 0; neg < 8; ++neg) {
            if (pos & neg)
                continue;
            const TransitionCondition cond{pos, neg};
            for (CellId id = 0; id < static_cast<CellId>(w.cell_count()); ++id) {
                if (!w.is_free(id))
                    continue;
                const auto labels = labels_of(w, w.cell(id));
                bool expected = true;
                for (std::size_t k = 0; k < 3; ++k) {
                    const bool present = labels.count(aps.name(k)) > 0;
                    if ((pos >> k & 1) && !present)
                        expected = false;
                    if ((neg >> k & 1) && present)
                        expected = false;
                }
                CHECK(satisfies(w, w.cell(id), cond, aps) == expected);
            }
        }
}

TEST_CASE("robot-scoped propositions")
{
    const auto w = warehouse();
    Alphabet aps({"P1", "r1P1", "r2P1"});
    const Labeling labels(w, aps);
    const CellId drop = w.id({6, 6});
    CHECK(labels.mask(0, drop) == (aps.bit("P1") | aps.bit("r1P1")));
    CHECK(labels.mask(1, drop) == (aps.bit("P1") | aps.bit("r2P1")));
    CHECK(labels.mask(0, w.id({3, 3})) == 0);
    std::size_t robot = 0;
    std::string base;
    CHECK(split_robot_proposition("r2P1", robot, base));
    CHECK(robot == 1);
    CHECK(base == "P1");
    CHECK_FALSE(split_robot_proposition("P1", robot, base));
}
