#include "mothership/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mothership/eval.hpp"

namespace mothership {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw InstanceError(message);
}

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::vector<Point> locations_of(const std::vector<Station>& stations) {
    std::vector<Point> out;
    out.reserve(stations.size());
    for (const auto& s : stations) out.push_back(s.location);
    return out;
}

std::vector<Point> locations_of(const std::vector<Customer>& customers) {
    std::vector<Point> out;
    out.reserve(customers.size());
    for (const auto& c : customers) out.push_back(c.location);
    return out;
}

}  // namespace

Instance::Instance(InstanceData data) : data_(std::move(data)) {
    require(finite(data_.depot), "depot: coordinates must be finite");
    require(data_.fleet_size >= 1, "fleet_size: must be >= 1");
    require(std::isfinite(data_.robot_range) && data_.robot_range > 0, "robot_range: must be > 0");
    require(std::isfinite(data_.vehicle_speed) && data_.vehicle_speed > 0, "vehicle_speed: must be > 0");
    require(std::isfinite(data_.robot_speed) && data_.robot_speed > 0, "robot_speed: must be > 0");
    require(!data_.stations.empty(), "stations: at least one station is required");

    std::sort(data_.stations.begin(), data_.stations.end(),
              [](const Station& a, const Station& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < data_.stations.size(); ++i) {
        const auto& s = data_.stations[i];
        require(s.id == static_cast<StationId>(i + 1),
                "stations: ids must be unique and contiguous from 1 (offending id " + std::to_string(s.id) + ")");
        require(finite(s.location), "stations[" + std::to_string(s.id) + "]: coordinates must be finite");
    }

    std::sort(data_.customers.begin(), data_.customers.end(),
              [](const Customer& a, const Customer& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < data_.customers.size(); ++i) {
        const auto& c = data_.customers[i];
        const std::string where = "customers[" + std::to_string(c.id) + "]";
        require(c.id == static_cast<CustomerId>(i),
                "customers: ids must be unique and contiguous from 0 (offending id " + std::to_string(c.id) + ")");
        require(finite(c.location), where + ": coordinates must be finite");
        require(std::isfinite(c.importance) && c.importance > 0, where + ".importance: must be > 0");
        require(std::isfinite(c.deadline) && c.deadline >= 0, where + ".deadline: must be >= 0");
    }

    distances_ = std::make_shared<const DistanceTable>(data_.depot, locations_of(data_.stations),
                                                       locations_of(data_.customers));

    reachable_.resize(data_.customers.size());
    for (const auto& c : data_.customers) {
        auto& reach = reachable_[static_cast<std::size_t>(c.id)];
        for (const auto& s : data_.stations) {
            if (2.0 * distances_->station_customer(s.id, c.id) <= data_.robot_range + kTolerance) {
                reach.push_back(s.id);
            }
        }
        require(!reach.empty(), "unreachable customer " + std::to_string(c.id) +
                                    ": no station within half the robot range");
    }
}

RoutePlan canonical(RoutePlan plan) {
    std::sort(plan.sorties.begin(), plan.sorties.end(), [](const Sortie& a, const Sortie& b) {
        if (a.station != b.station) return a.station < b.station;
        return a.robot < b.robot;
    });
    return plan;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Depot: return "(1)/(2)";
        case ViolationKind::StationDegree: return "(3)/(4)";
        case ViolationKind::DispatchCollect: return "(5)/(6)";
        case ViolationKind::Balance: return "(7)";
        case ViolationKind::Continuity: return "(8)";
        case ViolationKind::Range: return "(9)";
        case ViolationKind::Coverage: return "(10)/(11)";
        case ViolationKind::Structural: return "structural";
    }
    return "structural";
}

RoutePlan make_plan(const Instance& instance, std::vector<StationId> tour, std::vector<Sortie> sorties) {
    RoutePlan plan{std::move(tour), std::move(sorties)};
    const auto problems = check_structure(instance, plan);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid route plan:";
        for (const auto& v : problems) msg << "\n  " << to_string(v.kind) << ' ' << v.detail;
        throw PlanError(msg.str());
    }
    return plan;
}

}  // namespace mothership
