// Helpers shared by the unit and acceptance tests.
#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtplan/workspace.hpp"

namespace support {

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Mission text of a shipped fixture, without the trailing newline.
inline std::string mission(const std::string& name)
{
    auto text = read_text(fixture("missions/" + name + ".ltl"));
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.pop_back();
    return text;
}

/// Random workspace of at most `max_side` x `max_side` cells with 0-20%
/// obstacles, 1-2 robots and one or two cells for each of a, b and c.
/// Nullopt when too few cells are free for the robots.
inline std::optional<mtplan::GridWorkspace> random_workspace(unsigned seed, int max_side)
{
    std::mt19937 rng(seed);
    const int width = 2 + static_cast<int>(rng() % (max_side - 1));
    const int height = 2 + static_cast<int>(rng() % (max_side - 1));
    const int robots = 1 + static_cast<int>(rng() % 2);
    const int percent = static_cast<int>(rng() % 21);
    std::vector<bool> obstacles(width * height);
    for (std::size_t i = 0; i < obstacles.size(); ++i)
        obstacles[i] = static_cast<int>(rng() % 100) < percent;
    std::vector<int> free;
    for (int i = 0; i < width * height; ++i)
        if (!obstacles[i])
            free.push_back(i);
    if (static_cast<int>(free.size()) < robots)
        return std::nullopt;
    std::vector<std::set<std::string>> labels(width * height);
    for (const char* p : {"a", "b", "c"}) {
        const int count = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < count; ++k)
            labels[free[rng() % free.size()]].insert(p);
    }
    std::vector<mtplan::Cell> starts;
    for (int r = 0; r < robots; ++r) {
        const int c = free[rng() % free.size()];
        starts.push_back({c % width, c / width});
    }
    return mtplan::GridWorkspace(width, height, obstacles, labels, starts);
}

inline const std::vector<std::string>& random_missions()
{
    static const std::vector<std::string> missions{"G F a", "G (F a & F b & !c)", "G F a & G F b",
                                                   "G (a -> X (!a U b)) & G F a"};
    return missions;
}

} // namespace support
