#include "mtplan/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "mtplan/verify.hpp"

namespace mtplan {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

BenchOutcome measure(const GridWorkspace& w, const BuchiAutomaton& b, Algorithm algo, const BenchOptions& options)
{
    BenchOutcome out;
    std::vector<double> times;
    try {
        for (int k = 0; k < std::max(1, options.repeats); ++k) {
            const auto r = plan_mission(w, b, algo, options.plan);
            times.push_back(r.seconds);
            out.prefix_cost = r.run.prefix_cost;
            out.suffix_cost = r.run.suffix_cost;
            out.vertices = r.graph_vertices;
            out.edges = r.graph_edges;
            out.verified = check_run(r.run, w, b).accepted;
        }
        out.status = "ok";
    } catch (const Unsatisfiable& e) {
        out.status = "unsat";
        out.message = e.what();
    } catch (const BudgetExceeded& e) {
        out.status = "budget";
        out.message = e.what();
    } catch (const std::bad_alloc&) {
        out.status = "budget";
        out.message = "out of memory";
    }
    if (!times.empty()) {
        std::sort(times.begin(), times.end());
        out.seconds = times[times.size() / 2];
    }
    return out;
}

std::string cell(const BenchOutcome& o, const std::string& value)
{
    return o.status == "ok" ? value : "-";
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::vector<SuiteEntry> parse_suite(std::string_view text, const std::string& base_dir)
{
    std::vector<SuiteEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto a = t.find(';');
        const auto b = a == std::string::npos ? a : t.find(';', a + 1);
        if (b == std::string::npos)
            throw ParseError(number, "expected '<workspace> ; <robots> ; <ltl>'");
        SuiteEntry e;
        e.workspace = trim(std::string_view(t).substr(0, a));
        const std::string robots = trim(std::string_view(t).substr(a + 1, b - a - 1));
        e.mission = trim(std::string_view(t).substr(b + 1));
        if (e.workspace.empty() || e.mission.empty())
            throw ParseError(number, "empty workspace or mission");
        try {
            std::size_t used = 0;
            const long n = std::stol(robots, &used);
            if (used != robots.size() || n < 1)
                throw std::invalid_argument(robots);
            e.robots = static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            throw ParseError(number, "bad robot count '" + robots + "'");
        }
        if (!base_dir.empty() && std::filesystem::path(e.workspace).is_relative())
            e.workspace = (std::filesystem::path(base_dir) / e.workspace).lexically_normal().string();
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<BenchRow> run_bench(const std::vector<SuiteEntry>& suite, const BenchOptions& options)
{
    std::vector<BenchRow> rows;
    for (const auto& entry : suite) {
        BenchRow row;
        row.entry = entry;
        try {
            const auto full = load_workspace_file(entry.workspace);
            if (entry.robots > full.robot_count())
                throw std::invalid_argument("workspace declares only " + std::to_string(full.robot_count())
                                            + " robots");
            const auto w = full.with_robots(entry.robots);
            const auto b = mission_automaton(w, entry.mission);
            if (options.baseline)
                row.baseline = measure(w, b, Algorithm::Baseline, options);
            if (options.mtstar)
                row.mtstar = measure(w, b, Algorithm::MtStar, options);
        } catch (const std::exception& e) {
            row.baseline.status = row.mtstar.status = "error";
            row.baseline.message = row.mtstar.message = e.what();
        }
        row.costs_agree = !(row.baseline.status == "ok" && row.mtstar.status == "ok"
                            && row.baseline.suffix_cost != row.mtstar.suffix_cost);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string bench_table(const std::vector<BenchRow>& rows)
{
    std::vector<std::vector<std::string>> table{{"workspace", "robots", "mission", "base cost", "base s",
                                                 "|S_P|", "|E_P|", "mt* cost", "mt* s", "|S_r|", "|E_r|",
                                                 "speedup", "agree"}};
    for (const auto& r : rows) {
        const auto& b = r.baseline;
        const auto& m = r.mtstar;
        std::string speedup = "-";
        if (b.status == "ok" && m.status == "ok" && m.seconds > 0)
            speedup = fixed(b.seconds / m.seconds, 1);
        table.push_back({std::filesystem::path(r.entry.workspace).filename().string(),
                         std::to_string(r.entry.robots), r.entry.mission, cell(b, std::to_string(b.suffix_cost)),
                         cell(b, fixed(b.seconds, 3)), cell(b, std::to_string(b.vertices)),
                         cell(b, std::to_string(b.edges)), cell(m, std::to_string(m.suffix_cost)),
                         cell(m, fixed(m.seconds, 3)), cell(m, std::to_string(m.vertices)),
                         cell(m, std::to_string(m.edges)), speedup, r.costs_agree ? "yes" : "NO"});
    }
    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size())
                out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string bench_json(const std::vector<BenchRow>& rows)
{
    using Json = nlohmann::ordered_json;
    auto outcome = [](const BenchOutcome& o) {
        Json j{{"status", o.status}};
        if (o.status == "ok") {
            j["prefix_cost"] = o.prefix_cost;
            j["suffix_cost"] = o.suffix_cost;
            j["seconds"] = o.seconds;
            j["vertices"] = o.vertices;
            j["edges"] = o.edges;
            j["verified"] = o.verified;
        } else if (!o.message.empty()) {
            j["message"] = o.message;
        }
        return j;
    };
    Json out = Json::array();
    for (const auto& r : rows)
        out.push_back({{"workspace", r.entry.workspace},
                       {"robots", r.entry.robots},
                       {"mission", r.entry.mission},
                       {"baseline", outcome(r.baseline)},
                       {"mtstar", outcome(r.mtstar)},
                       {"costs_agree", r.costs_agree}});
    return out.dump(2) + "\n";
}

} // namespace mtplan
