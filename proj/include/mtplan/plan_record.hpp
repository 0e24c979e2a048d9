#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mtplan/run.hpp"

namespace mtplan {

inline constexpr int kPlanSchemaVersion = 1;

class RecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of one planner call as written by `plan` and read by `verify`
/// and `render`.
struct PlanRecord {
    int schema_version = kPlanSchemaVersion;
    std::string status = "ok"; // ok | unsatisfiable
    std::string message;
    std::string mission;
    std::string workspace;
    std::string algorithm;
    std::size_t robots = 0;
    std::size_t automaton_states = 0;
    Run run;
    double seconds = 0;
    /// Product graph for the baseline, reduced graph for MT*.
    std::size_t graph_vertices = 0;
    std::size_t graph_edges = 0;
    std::size_t cycles_examined = 0;
    bool incomplete = false;

    bool operator==(const PlanRecord&) const = default;
};

/// Pretty-printed JSON with a trailing newline.
std::string write_record(const PlanRecord& r);

/// Throws RecordError on malformed JSON, missing fields or a schema mismatch.
PlanRecord read_record(std::string_view text);

} // namespace mtplan
