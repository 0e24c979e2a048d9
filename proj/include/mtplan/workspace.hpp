#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtplan/condition.hpp"

namespace mtplan {

/// Grid cell, x = column and y = row, origin at the top-left.
struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

using CellId = std::int32_t;

/// One action of the motion model: the target cell and its cost.
struct Move {
    CellId to;
    int cost;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Labeled grid world shared by all robots. Immutable after construction.
///
/// Proposition names come in two flavours. Cell propositions are bound to
/// legend symbols in the workspace file. Robot-scoped propositions
/// `r<k><p>` hold when robot k stands on a cell carrying cell proposition p;
/// they are derived, never declared.
class GridWorkspace {
public:
    GridWorkspace(int width, int height, std::vector<bool> obstacles,
                  std::vector<std::set<std::string>> labels, std::vector<Cell> starts);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(width_) * height_; }
    std::size_t robot_count() const { return starts_.size(); }

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    bool is_obstacle(Cell c) const { return obstacles_[id(c)]; }
    bool is_free(Cell c) const { return in_bounds(c) && !obstacles_[id(c)]; }
    bool is_free(CellId c) const { return !obstacles_[c]; }

    CellId id(Cell c) const { return c.y * width_ + c.x; }
    Cell cell(CellId id) const { return {id % width_, id / width_}; }

    const std::vector<Cell>& starts() const { return starts_; }
    Cell start(std::size_t robot) const { return starts_.at(robot); }

    /// Cell propositions declared by the file, in declaration order.
    const std::vector<std::string>& propositions() const { return props_.names(); }
    const Alphabet& cell_alphabet() const { return props_; }
    PropMask cell_mask(CellId c) const { return cell_masks_[c]; }
    const std::set<std::string>& labels(CellId c) const { return labels_[c]; }

    /// Whether `name` is a cell proposition or a well-formed robot-scoped one.
    bool knows_proposition(std::string_view name) const;

    /// Free cells reachable from `from` (stays and unit moves, obstacles excluded).
    std::vector<bool> component(CellId from) const;

    /// Motion model at `c`: stay (cost 0), then up, down, left, right (cost 1).
    std::span<const Move> moves(CellId c) const
    {
        return {moves_.data() + move_offset_[c], moves_.data() + move_offset_[c + 1]};
    }

    /// Same workspace restricted to the first `n` robots.
    GridWorkspace with_robots(std::size_t n) const;

    /// Same workspace with the given start cells.
    GridWorkspace with_starts(std::vector<Cell> starts) const;

    std::size_t free_cell_count() const;

private:
    void validate() const;
    void build_moves();

    int width_;
    int height_;
    std::vector<bool> obstacles_;
    std::vector<std::set<std::string>> labels_;
    std::vector<Cell> starts_;
    Alphabet props_;
    std::vector<PropMask> cell_masks_;
    std::vector<Move> moves_;
    std::vector<std::size_t> move_offset_;
};

/// Parses the text workspace format. Throws ParseError on malformed input.
GridWorkspace load_workspace(std::string_view text);
GridWorkspace load_workspace_file(const std::string& path);

/// Serializes back to the text format (legend letters are assigned A, B, ...).
std::string to_text(const GridWorkspace& w);

/// Stay plus every in-bounds free 4-neighbour, in the order stay, up, down, left, right.
std::vector<std::pair<Cell, int>> neighbours(const GridWorkspace& w, Cell c);

/// Cell propositions holding at `c`.
std::set<std::string> labels_of(const GridWorkspace& w, Cell c);

/// Robot-agnostic check of `cond` (over `aps`) against the labels of `c`.
/// Robot-scoped propositions are false here.
bool satisfies(const GridWorkspace& w, Cell c, const TransitionCondition& cond, const Alphabet& aps);

/// Per-robot label masks over a mission alphabet: mask(i, c) is L^i(c).
class Labeling {
public:
    Labeling(const GridWorkspace& w, const Alphabet& aps);

    PropMask mask(std::size_t robot, CellId c) const { return masks_[robot][c]; }
    std::size_t robot_count() const { return masks_.size(); }

    /// Joint label: union of the robots' labels at `cells`.
    template <typename Cells>
    PropMask joint(const Cells& cells) const
    {
        PropMask m = 0;
        std::size_t i = 0;
        for (CellId c : cells)
            m |= masks_[i++][c];
        return m;
    }

private:
    std::vector<std::vector<PropMask>> masks_;
};

/// Splits `r<k><p>` into (k-1, p). Returns false if `name` has no such form.
bool split_robot_proposition(std::string_view name, std::size_t& robot, std::string& base);

} // namespace mtplan
