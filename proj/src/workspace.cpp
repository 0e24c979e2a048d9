#include "mtplan/workspace.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace mtplan {

namespace {

bool valid_prop_name(std::string_view s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)))
            return false;
    return true;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

GridWorkspace::GridWorkspace(int width, int height, std::vector<bool> obstacles,
                             std::vector<std::set<std::string>> labels, std::vector<Cell> starts)
    : width_(width)
    , height_(height)
    , obstacles_(std::move(obstacles))
    , labels_(std::move(labels))
    , starts_(std::move(starts))
{
    if (width_ <= 0 || height_ <= 0)
        throw std::invalid_argument("workspace dimensions must be positive");
    if (obstacles_.size() != cell_count() || labels_.size() != cell_count())
        throw std::invalid_argument("workspace arrays do not match dimensions");
    std::set<std::string> names;
    for (const auto& l : labels_)
        names.insert(l.begin(), l.end());
    for (const auto& n : names)
        props_.add(n);
    cell_masks_.resize(cell_count());
    for (CellId c = 0; c < static_cast<CellId>(cell_count()); ++c)
        for (const auto& n : labels_[c])
            cell_masks_[c] |= props_.bit(n);
    validate();
    build_moves();
}

void GridWorkspace::validate() const
{
    for (std::size_t i = 0; i < starts_.size(); ++i) {
        const Cell s = starts_[i];
        if (!in_bounds(s))
            throw std::invalid_argument("start of robot " + std::to_string(i + 1) + " is out of bounds");
        if (is_obstacle(s))
            throw std::invalid_argument("start of robot " + std::to_string(i + 1) + " is an obstacle");
    }
    for (CellId c = 0; c < static_cast<CellId>(cell_count()); ++c) {
        if (obstacles_[c] && !labels_[c].empty())
            throw std::invalid_argument("labeled cell is an obstacle");
        for (const auto& n : labels_[c])
            if (!valid_prop_name(n))
                throw std::invalid_argument("invalid proposition name '" + n + "'");
    }
}

void GridWorkspace::build_moves()
{
    move_offset_.assign(cell_count() + 1, 0);
    moves_.clear();
    static constexpr int dx[] = {0, 0, -1, 1};
    static constexpr int dy[] = {-1, 1, 0, 0};
    for (CellId c = 0; c < static_cast<CellId>(cell_count()); ++c) {
        move_offset_[c] = moves_.size();
        if (obstacles_[c])
            continue;
        moves_.push_back({c, 0});
        const Cell here = cell(c);
        for (int k = 0; k < 4; ++k) {
            const Cell n{here.x + dx[k], here.y + dy[k]};
            if (is_free(n))
                moves_.push_back({id(n), 1});
        }
    }
    move_offset_[cell_count()] = moves_.size();
}

bool GridWorkspace::knows_proposition(std::string_view name) const
{
    if (props_.contains(name))
        return true;
    std::size_t robot = 0;
    std::string base;
    return split_robot_proposition(name, robot, base) && robot < robot_count() && props_.contains(base);
}

std::vector<bool> GridWorkspace::component(CellId from) const
{
    std::vector<bool> seen(cell_count(), false);
    if (obstacles_[from])
        return seen;
    std::vector<CellId> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const CellId c = stack.back();
        stack.pop_back();
        for (const Move& m : moves(c))
            if (!seen[m.to]) {
                seen[m.to] = true;
                stack.push_back(m.to);
            }
    }
    return seen;
}

GridWorkspace GridWorkspace::with_robots(std::size_t n) const
{
    if (n > starts_.size())
        throw std::invalid_argument("workspace declares only " + std::to_string(starts_.size()) + " robots");
    return with_starts({starts_.begin(), starts_.begin() + static_cast<std::ptrdiff_t>(n)});
}

GridWorkspace GridWorkspace::with_starts(std::vector<Cell> starts) const
{
    return GridWorkspace(width_, height_, obstacles_, labels_, std::move(starts));
}

std::size_t GridWorkspace::free_cell_count() const
{
    std::size_t n = 0;
    for (bool o : obstacles_)
        n += o ? 0 : 1;
    return n;
}

bool split_robot_proposition(std::string_view name, std::size_t& robot, std::string& base)
{
    if (name.size() < 3 || name[0] != 'r' || !std::isdigit(static_cast<unsigned char>(name[1])))
        return false;
    std::size_t i = 1;
    std::size_t k = 0;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i])))
        k = k * 10 + static_cast<std::size_t>(name[i++] - '0');
    if (k == 0 || i == name.size() || !std::isalpha(static_cast<unsigned char>(name[i])))
        return false;
    robot = k - 1;
    base = std::string(name.substr(i));
    return true;
}

GridWorkspace load_workspace(std::string_view text)
{
    std::vector<std::string> lines = split(text, '\n');
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r')
            l.pop_back();

    std::size_t ln = 0;
    // Header: first non-empty line.
    while (ln < lines.size() && trim(lines[ln]).empty())
        ++ln;
    if (ln == lines.size())
        throw ParseError(1, "missing 'grid' header");
    int width = 0, height = 0, robots = 0;
    {
        std::istringstream hs(lines[ln]);
        std::string kw, extra;
        if (!(hs >> kw >> width >> height >> robots) || kw != "grid" || (hs >> extra))
            throw ParseError(ln + 1, "expected 'grid <width> <height> <n_robots>'");
        if (width <= 0 || height <= 0 || robots < 0 || robots > 9)
            throw ParseError(ln + 1, "invalid grid dimensions or robot count");
    }
    ++ln;

    const std::size_t cells = static_cast<std::size_t>(width) * height;
    std::vector<bool> obstacles(cells, false);
    std::vector<char> legend(cells, 0);
    std::vector<Cell> starts(static_cast<std::size_t>(robots), Cell{-1, -1});
    std::vector<bool> seen_robot(static_cast<std::size_t>(robots), false);

    for (int y = 0; y < height; ++y, ++ln) {
        if (ln >= lines.size())
            throw ParseError(ln + 1, "missing grid rows");
        const std::string& row = lines[ln];
        if (static_cast<int>(row.size()) != width)
            throw ParseError(ln + 1, "ragged row: expected " + std::to_string(width) + " characters, got " +
                                         std::to_string(row.size()));
        for (int x = 0; x < width; ++x) {
            const char ch = row[static_cast<std::size_t>(x)];
            const std::size_t id = static_cast<std::size_t>(y) * width + x;
            if (ch == '.')
                continue;
            if (ch == '#') {
                obstacles[id] = true;
            } else if (ch >= '1' && ch <= '9') {
                const int r = ch - '1';
                if (r >= robots)
                    throw ParseError(ln + 1, std::string("robot id ") + ch + " exceeds declared robot count");
                if (seen_robot[static_cast<std::size_t>(r)])
                    throw ParseError(ln + 1, std::string("duplicate robot id ") + ch);
                seen_robot[static_cast<std::size_t>(r)] = true;
                starts[static_cast<std::size_t>(r)] = Cell{x, y};
            } else if (std::isalpha(static_cast<unsigned char>(ch))) {
                legend[id] = ch;
            } else {
                throw ParseError(ln + 1, std::string("unknown legend character '") + ch + "'");
            }
        }
    }
    for (int r = 0; r < robots; ++r)
        if (!seen_robot[static_cast<std::size_t>(r)])
            throw ParseError(ln, "robot " + std::to_string(r + 1) + " has no start cell");

    std::map<char, std::set<std::string>> bindings;
    for (; ln < lines.size(); ++ln) {
        const std::string_view l = trim(lines[ln]);
        if (l.empty() || l.front() == '#')
            continue;
        std::istringstream ls{std::string(l)};
        std::string kw, sym, props, extra;
        if (!(ls >> kw >> sym >> props) || kw != "label" || sym.size() != 1 || (ls >> extra))
            throw ParseError(ln + 1, "expected 'label <char> <prop>[,<prop>...]'");
        const char s = sym[0];
        if (!std::isalpha(static_cast<unsigned char>(s)))
            throw ParseError(ln + 1, "legend symbol must be a letter");
        if (bindings.count(s))
            throw ParseError(ln + 1, std::string("legend symbol '") + s + "' bound twice");
        std::set<std::string> names;
        for (const auto& p : split(props, ',')) {
            if (!valid_prop_name(p))
                throw ParseError(ln + 1, "invalid proposition name '" + p + "'");
            names.insert(p);
        }
        bindings.emplace(s, std::move(names));
    }

    std::vector<std::set<std::string>> labels(cells);
    for (std::size_t id = 0; id < cells; ++id) {
        if (!legend[id])
            continue;
        auto it = bindings.find(legend[id]);
        if (it == bindings.end())
            throw ParseError(static_cast<std::size_t>(id / static_cast<std::size_t>(width)) + 2,
                             std::string("unknown legend character '") + legend[id] + "'");
        labels[id] = it->second;
    }

    try {
        return GridWorkspace(width, height, std::move(obstacles), std::move(labels), std::move(starts));
    } catch (const std::invalid_argument& e) {
        throw ParseError(1, e.what());
    }
}

GridWorkspace load_workspace_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open workspace file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_workspace(ss.str());
}

std::string to_text(const GridWorkspace& w)
{
    std::map<std::set<std::string>, char> symbols;
    char next = 'A';
    std::ostringstream out;
    out << "grid " << w.width() << ' ' << w.height() << ' ' << w.robot_count() << '\n';
    for (int y = 0; y < w.height(); ++y) {
        for (int x = 0; x < w.width(); ++x) {
            const Cell c{x, y};
            char ch = '.';
            if (w.is_obstacle(c)) {
                ch = '#';
            } else {
                for (std::size_t r = 0; r < w.robot_count(); ++r)
                    if (w.start(r) == c)
                        ch = static_cast<char>('1' + r);
                const auto& l = w.labels(w.id(c));
                if (ch == '.' && !l.empty()) {
                    auto [it, inserted] = symbols.emplace(l, next);
                    if (inserted) {
                        next = next == 'Z' ? 'a' : static_cast<char>(next + 1);
                    }
                    ch = it->second;
                }
            }
            out << ch;
        }
        out << '\n';
    }
    std::map<char, std::set<std::string>> by_symbol;
    for (const auto& [props, ch] : symbols)
        by_symbol.emplace(ch, props);
    for (const auto& [ch, props] : by_symbol) {
        out << "label " << ch << ' ';
        bool first = true;
        for (const auto& p : props) {
            out << (first ? "" : ",") << p;
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<std::pair<Cell, int>> neighbours(const GridWorkspace& w, Cell c)
{
    if (!w.is_free(c))
        throw std::invalid_argument("neighbours: cell is out of bounds or an obstacle");
    std::vector<std::pair<Cell, int>> out;
    for (const Move& m : w.moves(w.id(c)))
        out.emplace_back(w.cell(m.to), m.cost);
    return out;
}

std::set<std::string> labels_of(const GridWorkspace& w, Cell c)
{
    if (!w.is_free(c))
        throw std::invalid_argument("labels_of: cell is out of bounds or an obstacle");
    return w.labels(w.id(c));
}

bool satisfies(const GridWorkspace& w, Cell c, const TransitionCondition& cond, const Alphabet& aps)
{
    PropMask label = 0;
    for (const auto& p : labels_of(w, c))
        if (auto idx = aps.index_of(p))
            label |= PropMask{1} << *idx;
    return cond.satisfied_by(label);
}

Labeling::Labeling(const GridWorkspace& w, const Alphabet& aps)
{
    const std::size_t n = w.robot_count();
    masks_.assign(n, std::vector<PropMask>(w.cell_count(), 0));
    // For each mission proposition, find which base proposition it tracks and
    // which robots it applies to.
    for (std::size_t i = 0; i < aps.size(); ++i) {
        const std::string& name = aps.name(i);
        const PropMask bit = PropMask{1} << i;
        std::size_t robot = 0;
        std::string base;
        if (w.cell_alphabet().contains(name)) {
            const PropMask b = w.cell_alphabet().bit(name);
            for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c)
                if (w.cell_mask(c) & b)
                    for (std::size_t r = 0; r < n; ++r)
                        masks_[r][c] |= bit;
        } else if (split_robot_proposition(name, robot, base) && w.cell_alphabet().contains(base)) {
            if (robot >= n)
                continue;
            const PropMask b = w.cell_alphabet().bit(base);
            for (CellId c = 0; c < static_cast<CellId>(w.cell_count()); ++c)
                if (w.cell_mask(c) & b)
                    masks_[robot][c] |= bit;
        }
        // Propositions unknown to the workspace never hold.
    }
}

} // namespace mtplan
