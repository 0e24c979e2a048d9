#pragma once

#include <string>

#include "mtplan/plan_record.hpp"
#include "mtplan/workspace.hpp"

namespace mtplan {

/// Text drawing: `#` obstacles, `+` labeled cells, robot digits on visited
/// cells (`*` where trajectories overlap) and letters A, B, ... where each
/// robot's suffix starts. Deterministic.
std::string render_ascii(const PlanRecord& r, const GridWorkspace& w);

/// SVG drawing: prefix dashed, suffix solid, circle at each suffix start.
std::string render_svg(const PlanRecord& r, const GridWorkspace& w);

} // namespace mtplan
