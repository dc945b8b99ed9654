#pragma once

#include <cstddef>
#include <vector>

#include "mothership/model.hpp"

namespace mothership {

/// Absolute tolerance on lengths and times used by every feasibility check.
inline constexpr double kTolerance = 1e-9;

/// Total robot travel of one sortie: out to the first customer, back to the
/// station between consecutive services, and home after the last one.
double sortie_length(const Instance& instance, const Sortie& sortie);

/// Structural checks only: tour is a permutation of all stations, at most one
/// sortie per (robot, station), sorties nonempty and duplicate-free, ids in
/// range, every customer served exactly once.
std::vector<Violation> check_structure(const Instance& instance, const RoutePlan& plan);

/// All constraint groups, including the robot range. Empty means feasible.
std::vector<Violation> validate(const Instance& instance, const RoutePlan& plan);

/// Earliest-departure schedule of a structurally valid plan.
///
/// The vehicle leaves the depot at 0 and drives at the vehicle speed; robots
/// are dispatched on arrival and the vehicle leaves a station as soon as its
/// last robot is back. Range violations are tolerated. Throws PlanError if
/// check_structure() reports anything.
Schedule propagate(const Instance& instance, const RoutePlan& plan);

/// Recomputes `base` for `plan` starting at tour position `first_position`.
///
/// `base` must be the schedule of a plan that agrees with `plan` on the tour
/// prefix [0, first_position) and on every sortie at those stations. No
/// structural checks are made; callers are search loops that preserve them.
Schedule propagate_from(const Instance& instance, const RoutePlan& plan, const Schedule& base,
                        std::size_t first_position);

/// Σ importance · tardiness.
double objective(const Instance& instance, const Schedule& schedule);

}  // namespace mothership
