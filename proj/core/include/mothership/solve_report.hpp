#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mothership/model.hpp"

namespace mothership {

/// No plan satisfies every constraint (or none was found, for heuristics).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProofStatus {
    Optimal,          // search space exhausted
    BudgetExhausted,  // incumbent plus a global lower bound
    Heuristic,        // no optimality claim
};

std::string to_string(ProofStatus status);

/// Outcome of any solver. `plan` always passes validate() and `objective`
/// equals propagate(plan).objective.
struct SolveReport {
    std::string method;
    RoutePlan plan;
    Schedule schedule;
    double objective = 0.0;
    ProofStatus status = ProofStatus::Heuristic;
    double lower_bound = 0.0;  // equals objective when status is Optimal
    std::uint64_t nodes = 0;
    double wall_seconds = 0.0;

    double gap() const { return objective - lower_bound; }
};

/// JSON rendering; wall time is included only when `with_timing` is set so
/// that output stays byte-stable across runs.
std::string serialize_report(const SolveReport& report, bool with_timing);

}  // namespace mothership
