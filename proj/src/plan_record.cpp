#include "mtplan/plan_record.hpp"

#include <json.hpp>

namespace mtplan {

namespace {

using Json = nlohmann::ordered_json;

Json steps_to_json(const std::vector<RunStep>& steps, std::size_t robots)
{
    Json states = Json::array();
    Json paths = Json::array();
    for (const auto& s : steps)
        states.push_back(s.q);
    for (std::size_t i = 0; i < robots; ++i) {
        Json path = Json::array();
        for (const auto& s : steps)
            path.push_back(Json::array({s.cells.at(i).x, s.cells.at(i).y}));
        paths.push_back(std::move(path));
    }
    return Json{{"states", std::move(states)}, {"robots", std::move(paths)}};
}

std::vector<RunStep> steps_from_json(const Json& j, std::size_t robots)
{
    const auto& states = j.at("states");
    const auto& paths = j.at("robots");
    if (paths.size() != robots)
        throw RecordError("trajectory count does not match robot count");
    std::vector<RunStep> steps(states.size());
    for (std::size_t k = 0; k < states.size(); ++k)
        steps[k].q = states[k].get<BuchiState>();
    for (const auto& path : paths) {
        if (path.size() != steps.size())
            throw RecordError("trajectory length does not match state count");
        for (std::size_t k = 0; k < steps.size(); ++k)
            steps[k].cells.push_back({path[k].at(0).get<int>(), path[k].at(1).get<int>()});
    }
    return steps;
}

} // namespace

std::string write_record(const PlanRecord& r)
{
    Json j;
    j["schema_version"] = r.schema_version;
    j["status"] = r.status;
    j["message"] = r.message;
    j["mission"] = r.mission;
    j["workspace"] = r.workspace;
    j["algorithm"] = r.algorithm;
    j["robots"] = r.robots;
    j["automaton_states"] = r.automaton_states;
    j["prefix_cost"] = r.run.prefix_cost;
    j["suffix_cost"] = r.run.suffix_cost;
    j["prefix"] = steps_to_json(r.run.prefix, r.robots);
    j["suffix"] = steps_to_json(r.run.suffix, r.robots);
    j["seconds"] = r.seconds;
    j["graph"] = Json{{"vertices", r.graph_vertices}, {"edges", r.graph_edges}};
    j["cycles_examined"] = r.cycles_examined;
    j["incomplete"] = r.incomplete;
    return j.dump(2) + "\n";
}

PlanRecord read_record(std::string_view text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw RecordError(std::string("malformed plan record: ") + e.what());
    }
    try {
        PlanRecord r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kPlanSchemaVersion)
            throw RecordError("unsupported schema version " + std::to_string(r.schema_version) + " (expected "
                              + std::to_string(kPlanSchemaVersion) + ")");
        r.status = j.at("status").get<std::string>();
        r.message = j.at("message").get<std::string>();
        r.mission = j.at("mission").get<std::string>();
        r.workspace = j.at("workspace").get<std::string>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.robots = j.at("robots").get<std::size_t>();
        r.automaton_states = j.at("automaton_states").get<std::size_t>();
        r.run.prefix_cost = j.at("prefix_cost").get<long>();
        r.run.suffix_cost = j.at("suffix_cost").get<long>();
        r.run.prefix = steps_from_json(j.at("prefix"), r.robots);
        r.run.suffix = steps_from_json(j.at("suffix"), r.robots);
        r.seconds = j.at("seconds").get<double>();
        r.graph_vertices = j.at("graph").at("vertices").get<std::size_t>();
        r.graph_edges = j.at("graph").at("edges").get<std::size_t>();
        r.cycles_examined = j.at("cycles_examined").get<std::size_t>();
        r.incomplete = j.at("incomplete").get<bool>();
        return r;
    } catch (const Json::exception& e) {
        throw RecordError(std::string("invalid plan record: ") + e.what());
    }
}

} // namespace mtplan
