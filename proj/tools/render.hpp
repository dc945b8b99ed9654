#pragma once

#include <string>

#include "mothership/model.hpp"

namespace mothership::cli {

/// Fixed-point text with `digits` decimals.
std::string fixed(double value, int digits);

/// Shortest round-trip text, used in CSV output.
std::string exact(double value);

/// Two column pairs in the layout of the published solution tables:
/// nonzero binaries on the left, station and customer times on the right
/// (tardiness rows only when positive), objective last.
std::string schedule_table(const Instance& instance, const RoutePlan& plan, const Schedule& schedule);

/// variable,value for every time and the nonzero binaries.
std::string schedule_csv(const Instance& instance, const RoutePlan& plan, const Schedule& schedule);

/// SVG 1.1 route map. Depot square, station circles, customer pentagons;
/// one solid polyline per vehicle leg and one dashed polyline per robot
/// service trip (station, customer, station), styled per robot.
std::string plot_svg(const Instance& instance, const RoutePlan& plan);

}  // namespace mothership::cli
