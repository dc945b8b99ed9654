#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mothership/geometry.hpp"

namespace mothership {

using StationId = int;   // 1..n_s
using CustomerId = int;  // 0..n_c-1
using RobotId = int;     // 0..n_r-1

/// Raised when an instance document or value breaks an instance invariant.
class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by make_plan() and propagate() for structurally broken plans.
class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Station {
    StationId id = 1;
    Point location;

    friend bool operator==(const Station&, const Station&) = default;
};

struct Customer {
    CustomerId id = 0;
    Point location;
    double importance = 1.0;  // WI_o
    double deadline = 0.0;    // T_o

    friend bool operator==(const Customer&, const Customer&) = default;
};

/// Raw instance fields, before invariants are checked.
struct InstanceData {
    Point depot;
    std::vector<Station> stations;
    std::vector<Customer> customers;
    int fleet_size = 1;           // n_r
    double robot_range = 0.0;     // TR
    double vehicle_speed = 0.0;   // VV
    double robot_speed = 0.0;     // VR

    friend bool operator==(const InstanceData&, const InstanceData&) = default;
};

/// Immutable, validated problem instance.
///
/// Stations are stored in id order (ids 1..n_s) and customers in id order
/// (ids 0..n_c-1). Construction throws InstanceError if any invariant fails,
/// including a customer that no station can reach within the robot range.
class Instance {
public:
    explicit Instance(InstanceData data);

    const Point& depot() const { return data_.depot; }
    const std::vector<Station>& stations() const { return data_.stations; }
    const std::vector<Customer>& customers() const { return data_.customers; }
    const Station& station(StationId k) const { return data_.stations.at(static_cast<std::size_t>(k - 1)); }
    const Customer& customer(CustomerId o) const { return data_.customers.at(static_cast<std::size_t>(o)); }

    int station_count() const { return static_cast<int>(data_.stations.size()); }
    int customer_count() const { return static_cast<int>(data_.customers.size()); }
    int fleet_size() const { return data_.fleet_size; }
    double robot_range() const { return data_.robot_range; }
    double vehicle_speed() const { return data_.vehicle_speed; }
    double robot_speed() const { return data_.robot_speed; }

    const DistanceTable& distances() const { return *distances_; }
    const InstanceData& data() const { return data_; }

    /// Stations k with 2·L_ko within the robot range, ascending.
    const std::vector<StationId>& reachable_stations(CustomerId o) const {
        return reachable_.at(static_cast<std::size_t>(o));
    }

    friend bool operator==(const Instance& a, const Instance& b) { return a.data_ == b.data_; }

private:
    InstanceData data_;
    std::shared_ptr<const DistanceTable> distances_;
    std::vector<std::vector<StationId>> reachable_;
};

/// One robot's dispatch at one station: out-and-back services in order.
struct Sortie {
    RobotId robot = 0;
    StationId station = 1;
    std::vector<CustomerId> services;

    friend bool operator==(const Sortie&, const Sortie&) = default;
    friend auto operator<=>(const Sortie&, const Sortie&) = default;
};

/// Vehicle tour (depot endpoints implicit) plus all robot sorties.
struct RoutePlan {
    std::vector<StationId> tour;
    std::vector<Sortie> sorties;

    friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

/// Sorties sorted by (station, robot); the form used for serialization
/// comparisons and tie-breaking.
RoutePlan canonical(RoutePlan plan);

/// Station times are indexed by station id with slot 0 for the depot
/// (depart[0] == 0). Customer vectors are indexed by customer id.
struct Schedule {
    std::vector<double> arrive;
    std::vector<double> depart;
    std::vector<double> complete;
    std::vector<double> tardiness;
    double return_time = 0.0;  // vehicle back at the depot
    double objective = 0.0;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Constraint group a plan violates.
enum class ViolationKind {
    Depot,            // (1)/(2)
    StationDegree,    // (3)/(4)
    DispatchCollect,  // (5)/(6)
    Balance,          // (7)
    Continuity,       // (8)
    Range,            // (9)
    Coverage,         // (10)/(11)
    Structural,
};

struct Violation {
    ViolationKind kind = ViolationKind::Structural;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Short tag such as "(9)" or "(10)/(11)".
std::string to_string(ViolationKind kind);

/// Checked RoutePlan constructor: throws PlanError unless the plan satisfies
/// the structural constraints (tour permutation, one sortie per robot and
/// station, nonempty duplicate-free sorties, exact customer coverage).
RoutePlan make_plan(const Instance& instance, std::vector<StationId> tour,
                    std::vector<Sortie> sorties);

}  // namespace mothership
