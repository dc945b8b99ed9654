#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mothership/model.hpp"

namespace mothership {

/// A reference instance with its published solution plan.
struct Fixture {
    Instance instance;
    RoutePlan plan;
    /// Objective printed alongside the published solution; kept for audit
    /// output, never used as an expected value.
    std::vector<double> published_objectives;
    /// Known inconsistencies in the published solution, one per line.
    std::vector<std::string> notes;
};

/// "small" (2 stations, 2 robots, 8 customers) or "medium" (4, 4, 12).
/// Throws std::invalid_argument for anything else.
Fixture builtin_fixture(std::string_view name);

std::vector<std::string> fixture_names();

}  // namespace mothership
