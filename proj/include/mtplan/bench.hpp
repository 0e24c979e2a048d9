#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtplan/mission.hpp"

namespace mtplan {

/// One suite line: `<workspace-path> ; <robots> ; <ltl>`.
struct SuiteEntry {
    std::string workspace;
    std::size_t robots = 0;
    std::string mission;
};

/// Parses a suite file. Blank lines and `#` comments are skipped; relative
/// workspace paths are resolved against `base_dir`. Throws ParseError.
std::vector<SuiteEntry> parse_suite(std::string_view text, const std::string& base_dir = {});

struct BenchOutcome {
    std::string status = "skipped"; // ok | unsat | budget | error | skipped
    std::string message;
    long prefix_cost = 0;
    long suffix_cost = 0;
    double seconds = 0; // median over repeats
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool verified = false;
};

struct BenchRow {
    SuiteEntry entry;
    BenchOutcome baseline;
    BenchOutcome mtstar;
    /// False only when both planners finished with different suffix costs.
    bool costs_agree = true;
};

struct BenchOptions {
    bool baseline = true;
    bool mtstar = true;
    int repeats = 1;
    PlanOptions plan;
};

std::vector<BenchRow> run_bench(const std::vector<SuiteEntry>& suite, const BenchOptions& options);

/// Aligned text table; `-` marks planners that did not finish.
std::string bench_table(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

} // namespace mtplan
