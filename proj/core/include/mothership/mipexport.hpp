#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mothership/model.hpp"

namespace mothership {

struct ExportOptions {
    /// Use the robot speed on vehicle legs in the arrival constraints, as the
    /// formulation is commonly printed; the default uses the vehicle speed.
    bool robot_speed_legs = false;
};

/// Mixed-integer program with bilinear binary×continuous terms, in CPLEX LP
/// text format. Every row is preceded by a comment naming its constraint
/// group (1)-(17). The depot departure time (12) is fixed at 0 and
/// substituted, so no td_0 variable appears.
std::string export_miqcp(const Instance& instance, const ExportOptions& options = {});

/// Pure MILP: every bilinear row of the quadratic export is replaced by
/// big-M implications with M = horizon(instance), printed in the header.
std::string export_bigm(const Instance& instance, const ExportOptions& options = {});

enum class VarKind { Y, X, Z, W, Arrive, Depart, Complete, Tardiness };

/// Variable identity. Index order follows the names:
/// y_k_l, x_r_k_o, z_r_o_k, w_r_k_o_p, ta_k, td_k, tc_o, tt_o.
struct VarRef {
    VarKind kind = VarKind::Y;
    std::array<int, 4> index{};

    friend bool operator==(const VarRef&, const VarRef&) = default;
};

std::string var_name(const VarRef& var);
std::optional<VarRef> parse_var_name(std::string_view name);

/// Values a plan induces on the model variables: binaries from the tour and
/// sorties (zeros omitted), times from propagate().
std::map<std::string, double> plan_values(const Instance& instance, const RoutePlan& plan);

/// "name value" lines, the format import_solution() reads.
std::string format_solution(const std::map<std::string, double>& values);

class ImportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ImportResult {
    RoutePlan plan;
    Schedule schedule;
    /// Solver time variables that differ from the propagated schedule by
    /// more than 1e-4.
    std::vector<std::string> mismatches;
};

/// Rebuilds a plan from solver output ("name value" per line, '#' comments).
/// Throws ImportError for fractional binaries, uncovered customers, a broken
/// vehicle tour or a robot chain that violates continuity (8).
ImportResult import_solution(const Instance& instance, std::string_view text);

}  // namespace mothership
