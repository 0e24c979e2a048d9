#include "mtplan/render.hpp"

#include <sstream>

namespace mtplan {

namespace {

constexpr int kCellPx = 24;
constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22"};

void require_fit(const PlanRecord& r, const GridWorkspace& w)
{
    auto fits = [&](const std::vector<RunStep>& steps) {
        for (const auto& s : steps) {
            if (s.cells.size() != r.robots)
                return false;
            for (const Cell c : s.cells)
                if (!w.in_bounds(c))
                    return false;
        }
        return true;
    };
    if (!fits(r.run.prefix) || !fits(r.run.suffix))
        throw RecordError("plan record does not fit the workspace");
}

std::string polyline(const std::vector<RunStep>& steps, std::size_t robot)
{
    std::ostringstream out;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Cell c = steps[k].cells[robot];
        out << (k ? " " : "") << c.x * kCellPx + kCellPx / 2 << ',' << c.y * kCellPx + kCellPx / 2;
    }
    return out.str();
}

} // namespace

std::string render_ascii(const PlanRecord& r, const GridWorkspace& w)
{
    require_fit(r, w);
    std::vector<std::string> rows(static_cast<std::size_t>(w.height()), std::string(static_cast<std::size_t>(w.width()), '.'));
    for (CellId id = 0; id < static_cast<CellId>(w.cell_count()); ++id) {
        const Cell c = w.cell(id);
        char& ch = rows[c.y][c.x];
        if (!w.is_free(id))
            ch = '#';
        else if (!w.labels(id).empty())
            ch = '+';
    }
    std::vector<std::vector<int>> owner(rows.size(), std::vector<int>(rows.front().size(), -1));
    for (std::size_t i = 0; i < r.robots; ++i) {
        auto mark = [&](const std::vector<RunStep>& steps) {
            for (const auto& s : steps) {
                const Cell c = s.cells[i];
                int& o = owner[c.y][c.x];
                rows[c.y][c.x] = o == -1 || o == static_cast<int>(i) ? static_cast<char>('1' + i % 9) : '*';
                o = static_cast<int>(i);
            }
        };
        mark(r.run.prefix);
        mark(r.run.suffix);
    }
    if (!r.run.suffix.empty())
        for (std::size_t i = 0; i < r.robots; ++i) {
            const Cell c = r.run.suffix.front().cells[i];
            rows[c.y][c.x] = static_cast<char>('A' + i % 26);
        }

    std::ostringstream out;
    out << r.algorithm << ": " << r.mission << '\n';
    out << "prefix cost " << r.run.prefix_cost << ", suffix cost " << r.run.suffix_cost << '\n';
    for (const auto& row : rows)
        out << row << '\n';
    for (std::size_t i = 0; i < r.robots && !r.run.suffix.empty(); ++i) {
        const Cell c = r.run.suffix.front().cells[i];
        out << static_cast<char>('A' + i % 26) << ": robot " << i + 1 << " suffix starts at (" << c.x << ','
            << c.y << ")\n";
    }
    return out.str();
}

std::string render_svg(const PlanRecord& r, const GridWorkspace& w)
{
    require_fit(r, w);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w.width() * kCellPx << "\" height=\""
        << w.height() * kCellPx << "\">\n";
    for (CellId id = 0; id < static_cast<CellId>(w.cell_count()); ++id) {
        const Cell c = w.cell(id);
        const char* fill = !w.is_free(id) ? "#444444" : w.labels(id).empty() ? "#ffffff" : "#cfe8ff";
        out << "<rect x=\"" << c.x * kCellPx << "\" y=\"" << c.y * kCellPx << "\" width=\"" << kCellPx
            << "\" height=\"" << kCellPx << "\" fill=\"" << fill << "\" stroke=\"#bbbbbb\"/>\n";
        if (w.is_free(id) && !w.labels(id).empty()) {
            std::string text;
            for (const auto& p : w.labels(id))
                text += (text.empty() ? "" : ",") + p;
            out << "<text x=\"" << c.x * kCellPx + 2 << "\" y=\"" << c.y * kCellPx + 10
                << "\" font-size=\"8\">" << text << "</text>\n";
        }
    }
    for (std::size_t i = 0; i < r.robots; ++i) {
        const char* colour = kPalette[i % std::size(kPalette)];
        if (r.run.prefix.size() > 1)
            out << "<polyline points=\"" << polyline(r.run.prefix, i) << "\" fill=\"none\" stroke=\"" << colour
                << "\" stroke-width=\"2\" stroke-dasharray=\"4,3\"/>\n";
        if (r.run.suffix.size() > 1)
            out << "<polyline points=\"" << polyline(r.run.suffix, i) << "\" fill=\"none\" stroke=\"" << colour
                << "\" stroke-width=\"3\"/>\n";
        if (!r.run.suffix.empty()) {
            const Cell c = r.run.suffix.front().cells[i];
            out << "<circle cx=\"" << c.x * kCellPx + kCellPx / 2 << "\" cy=\"" << c.y * kCellPx + kCellPx / 2
                << "\" r=\"5\" fill=\"" << colour << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace mtplan
