#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mothership/model.hpp"
#include "mothership/solve_report.hpp"

namespace mothership {

class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Largest instances solve_oracle() accepts.
struct OracleLimits {
    int max_stations = 3;
    int max_customers = 6;
    int max_robots = 2;
};

/// Branch-and-bound limits. Node count includes every bounded node.
struct Budget {
    std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
    double max_seconds = std::numeric_limits<double>::infinity();
    /// Workers sharing one incumbent; 1 runs the deterministic sequential
    /// search.
    unsigned threads = 1;
    /// Seed the incumbent with a short heuristic run.
    bool warm_start = true;
};

/// Partial solution: a prefix of the vehicle tour and sorties holding the
/// customers assigned so far (in their relative service order).
struct SearchNode {
    std::vector<StationId> tour_prefix;
    std::vector<Sortie> sorties;
};

/// Admissible bound on the best completion of `node`.
///
/// Station arrivals are the propagated times of the tour prefix; stations
/// still unvisited get the earliest arrival by a direct ride from the last
/// prefix station (or the depot). Assigned customers contribute the tardiness
/// of their partial chains; each unassigned customer contributes the
/// tardiness of its earliest conceivable service from any reachable station.
/// On a complete node this equals propagate(plan).objective.
double lower_bound(const Instance& instance, const SearchNode& node);

/// Upper bound on every station and completion time of any feasible plan:
/// longest depot-to-depot vehicle tour time plus Σ_o 2·max_k L_ko / VR.
/// Exact longest tour for up to 8 stations, otherwise a per-node max-edge
/// bound.
double horizon(const Instance& instance);

/// Exhaustive enumeration of all feasible plans. Ties go to the
/// lexicographically smallest serialized canonical plan. Throws
/// SizeLimitError above `limits`.
SolveReport solve_oracle(const Instance& instance, const OracleLimits& limits = {});

/// Depth-first branch and bound: complete vehicle tour first, then customers
/// one at a time to (station, robot, position). Robots at a station are
/// opened in index order only.
SolveReport solve_bnb(const Instance& instance, const Budget& budget = {});

}  // namespace mothership
