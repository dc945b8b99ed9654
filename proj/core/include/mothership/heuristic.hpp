#pragma once

#include <cstdint>
#include <functional>

#include "mothership/model.hpp"
#include "mothership/solve_report.hpp"

namespace mothership {

struct Neighborhoods {
    bool relocate = true;  // move one customer to another sortie, station or robot
    bool swap = true;      // exchange two customers
    bool reorder = true;   // move a customer within its own sortie
    bool reassign = true;  // move a whole sortie to another station
    bool two_opt = true;   // reverse a segment of the vehicle tour
};

struct SearchParams {
    std::uint64_t seed = 1;
    /// Accepted moves per restart.
    std::uint64_t max_iterations = 5000;
    double max_seconds = 10.0;
    /// Restart 0 descends from the input plan; restart r > 0 perturbs that
    /// local optimum with its own seed. Restarts are independent of each
    /// other and may run in parallel.
    unsigned restarts = 8;
    /// Perturb-and-descend rounds inside each restart.
    unsigned kicks = 10;
    /// Random relocations applied by each perturbation.
    unsigned kick_size = 3;
    unsigned threads = 1;
    Neighborhoods neighborhoods;
    /// Called after every accepted move with the id of the descent it belongs
    /// to; objectives are nonincreasing within one id. Must be thread-safe
    /// when threads > 1.
    std::function<void(unsigned descent, const RoutePlan&, double objective)> observer;
};

/// Greedy insertion. Customers are taken by deadline / importance ascending
/// and each goes to the feasible (station, robot, position) with the
/// smallest objective increase; the tour is nearest-neighbour from the depot
/// improved by 2-opt on vehicle distance. `seed` breaks cost ties.
/// If insertion gets stuck on the robot range, a bounded depth-first packing
/// of customers into (station, robot) sorties is used instead. Throws
/// InfeasibleError if that fails too.
RoutePlan construct(const Instance& instance, std::uint64_t seed);

/// First-improvement local search with perturbation restarts. Never returns a
/// plan worse than `plan`; every accepted plan passes validate(). Throws
/// std::invalid_argument for non-positive caps or an infeasible input plan.
SolveReport improve(const Instance& instance, const RoutePlan& plan, const SearchParams& params);

/// improve(construct(params.seed)).
SolveReport solve_heuristic(const Instance& instance, const SearchParams& params = {});

/// Seed used by restart `restart`: output number `restart` of a
/// std::mt19937_64 seeded with `base` (restart 0 uses `base` itself).
std::uint64_t restart_seed(std::uint64_t base, unsigned restart);

}  // namespace mothership
