#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mothership/model.hpp"
#include "mothership/solve_report.hpp"

namespace mothership::testing {

/// Instances with at most 2 stations, 2 robots and 5 customers, drawn from
/// consecutive generator seeds; infeasible draws are skipped.
struct TinyCase {
    std::uint64_t seed;
    Instance instance;
    SolveReport oracle;
};
std::vector<TinyCase> tiny_corpus(std::size_t count, std::uint64_t first_seed = 1);

/// Generator settings of the tiny corpus for one seed.
Instance tiny_instance(std::uint64_t seed);

/// Structurally valid plan with a random tour, random (station, robot)
/// assignment and random service order. The robot range is ignored.
RoutePlan random_plan(const Instance& instance, std::mt19937_64& rng);

/// Like random_plan() but only reachable stations are drawn, and draws are
/// repeated until validate() passes. Empty plan if every attempt fails.
RoutePlan random_feasible_plan(const Instance& instance, std::mt19937_64& rng, int attempts = 200);

/// Random instance with `n_s` stations, `n_r` robots and `n_c` customers,
/// every customer reachable.
Instance random_instance(std::mt19937_64& rng, int n_s, int n_r, int n_c);

/// Minimal reader for the LP text the exporter writes: rows, quadratic
/// brackets, bounds and binaries. Written independently of the exporter.
class LpModel {
public:
    explicit LpModel(std::string_view text);

    struct Failure {
        std::string row;
        double lhs;
        std::string sense;
        double rhs;
    };

    /// Rows violated by more than `tol`, plus bound and integrality failures.
    std::vector<Failure> check(const std::map<std::string, double>& values, double tol) const;
    double objective(const std::map<std::string, double>& values) const;

    std::size_t row_count() const { return rows_.size(); }
    std::size_t binary_count() const { return binaries_.size(); }
    std::size_t variable_count() const;
    bool has_quadratic() const;

private:
    struct Term {
        double coef;
        std::string a;
        std::string b;  // empty for linear terms
    };
    struct Row {
        std::string name;
        std::vector<Term> terms;
        std::string sense;
        double rhs = 0;
    };
    static std::vector<Term> parse_terms(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end);
    static double eval(const std::vector<Term>& terms, const std::map<std::string, double>& values);

    std::vector<Term> objective_;
    std::vector<Row> rows_;
    std::vector<std::string> binaries_;
    std::vector<std::string> bounded_;
};

}  // namespace mothership::testing
