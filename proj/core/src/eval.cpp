#include "mothership/eval.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "chain.hpp"

namespace mothership {

namespace {

std::string sortie_tag(const Sortie& s) {
    std::ostringstream out;
    out << "(r" << s.robot << ",S" << s.station << ",[";
    for (std::size_t i = 0; i < s.services.size(); ++i) out << (i ? "," : "") << 'C' << s.services[i];
    out << "])";
    return out.str();
}

// Sorties grouped by station id; slot 0 unused.
std::vector<std::vector<const Sortie*>> by_station(const Instance& instance, const RoutePlan& plan) {
    std::vector<std::vector<const Sortie*>> grouped(static_cast<std::size_t>(instance.station_count()) + 1);
    for (const auto& s : plan.sorties) grouped[static_cast<std::size_t>(s.station)].push_back(&s);
    return grouped;
}

void finish(const Instance& instance, Schedule& schedule) {
    for (const auto& c : instance.customers()) {
        const auto o = static_cast<std::size_t>(c.id);
        schedule.tardiness[o] = detail::tardiness(schedule.complete[o], c.deadline);
    }
    schedule.objective = objective(instance, schedule);
}

void run_tour(const Instance& instance, const RoutePlan& plan, Schedule& schedule, std::size_t first) {
    const auto grouped = by_station(instance, plan);
    const auto& dist = instance.distances();
    StationId prev = first == 0 ? 0 : plan.tour[first - 1];
    double t = schedule.depart[static_cast<std::size_t>(prev)];
    for (std::size_t pos = first; pos < plan.tour.size(); ++pos) {
        const StationId k = plan.tour[pos];
        const double arrive = t + dist.vehicle(prev, k) / instance.vehicle_speed();
        double depart = arrive;
        for (const Sortie* s : grouped[static_cast<std::size_t>(k)]) {
            depart = std::max(depart, detail::run_chain(instance, k, s->services, arrive, schedule.complete));
        }
        schedule.arrive[static_cast<std::size_t>(k)] = arrive;
        schedule.depart[static_cast<std::size_t>(k)] = depart;
        t = depart;
        prev = k;
    }
    schedule.return_time = t + dist.vehicle(prev, 0) / instance.vehicle_speed();
}

}  // namespace

double sortie_length(const Instance& instance, const Sortie& sortie) {
    const auto& dist = instance.distances();
    const StationId k = sortie.station;
    double length = 0.0;
    for (std::size_t i = 0; i < sortie.services.size(); ++i) {
        const CustomerId o = sortie.services[i];
        if (i == 0) {
            length += dist.station_customer(k, o);
        } else {
            length += dist.station_customer(k, sortie.services[i - 1]) + dist.station_customer(k, o);
        }
    }
    if (!sortie.services.empty()) length += dist.station_customer(k, sortie.services.back());
    return length;
}

std::vector<Violation> check_structure(const Instance& instance, const RoutePlan& plan) {
    std::vector<Violation> out;
    const int n_s = instance.station_count();
    const int n_c = instance.customer_count();

    std::vector<int> visits(static_cast<std::size_t>(n_s) + 1, 0);
    for (StationId k : plan.tour) {
        if (k < 1 || k > n_s) {
            out.push_back({ViolationKind::Structural, "tour references unknown station " + std::to_string(k)});
            continue;
        }
        ++visits[static_cast<std::size_t>(k)];
    }
    for (StationId k = 1; k <= n_s; ++k) {
        const int v = visits[static_cast<std::size_t>(k)];
        if (v == 0) out.push_back({ViolationKind::StationDegree, "station " + std::to_string(k) + " is never visited"});
        if (v > 1) {
            out.push_back({ViolationKind::StationDegree,
                           "station " + std::to_string(k) + " is visited " + std::to_string(v) + " times"});
        }
    }

    std::set<std::pair<RobotId, StationId>> dispatched;
    std::vector<int> served(static_cast<std::size_t>(n_c), 0);
    for (const auto& s : plan.sorties) {
        const std::string tag = sortie_tag(s);
        bool ids_ok = true;
        if (s.robot < 0 || s.robot >= instance.fleet_size()) {
            out.push_back({ViolationKind::Structural, tag + " uses unknown robot " + std::to_string(s.robot)});
            ids_ok = false;
        }
        if (s.station < 1 || s.station > n_s) {
            out.push_back({ViolationKind::Structural, tag + " uses unknown station " + std::to_string(s.station)});
            ids_ok = false;
        }
        if (s.services.empty()) out.push_back({ViolationKind::Structural, tag + " has no services"});
        if (ids_ok && !dispatched.insert({s.robot, s.station}).second) {
            out.push_back({ViolationKind::DispatchCollect, "robot " + std::to_string(s.robot) +
                                                               " is dispatched more than once at station " +
                                                               std::to_string(s.station)});
        }
        std::set<CustomerId> seen;
        for (CustomerId o : s.services) {
            if (o < 0 || o >= n_c) {
                out.push_back({ViolationKind::Structural, tag + " references unknown customer " + std::to_string(o)});
                continue;
            }
            if (!seen.insert(o).second) {
                out.push_back({ViolationKind::Coverage, tag + " repeats customer " + std::to_string(o)});
                continue;
            }
            ++served[static_cast<std::size_t>(o)];
        }
    }
    for (CustomerId o = 0; o < n_c; ++o) {
        const int n = served[static_cast<std::size_t>(o)];
        if (n == 0) out.push_back({ViolationKind::Coverage, "customer " + std::to_string(o) + " is not served"});
        if (n > 1) {
            out.push_back({ViolationKind::Coverage,
                           "customer " + std::to_string(o) + " is served by " + std::to_string(n) + " sorties"});
        }
    }
    return out;
}

std::vector<Violation> validate(const Instance& instance, const RoutePlan& plan) {
    auto out = check_structure(instance, plan);
    for (const auto& s : plan.sorties) {
        const bool ids_ok = s.station >= 1 && s.station <= instance.station_count() &&
                            std::all_of(s.services.begin(), s.services.end(), [&](CustomerId o) {
                                return o >= 0 && o < instance.customer_count();
                            });
        if (!ids_ok) continue;
        const double length = sortie_length(instance, s);
        if (length > instance.robot_range() + kTolerance) {
            std::ostringstream msg;
            msg.precision(6);
            msg << sortie_tag(s) << " travels " << length << " > range " << instance.robot_range();
            out.push_back({ViolationKind::Range, msg.str()});
        }
    }
    return out;
}

Schedule propagate(const Instance& instance, const RoutePlan& plan) {
    if (const auto problems = check_structure(instance, plan); !problems.empty()) {
        throw PlanError("cannot propagate: " + to_string(problems.front().kind) + ' ' + problems.front().detail);
    }
    Schedule schedule;
    const auto n_s = static_cast<std::size_t>(instance.station_count()) + 1;
    const auto n_c = static_cast<std::size_t>(instance.customer_count());
    schedule.arrive.assign(n_s, 0.0);
    schedule.depart.assign(n_s, 0.0);
    schedule.complete.assign(n_c, 0.0);
    schedule.tardiness.assign(n_c, 0.0);
    run_tour(instance, plan, schedule, 0);
    finish(instance, schedule);
    return schedule;
}

Schedule propagate_from(const Instance& instance, const RoutePlan& plan, const Schedule& base,
                        std::size_t first_position) {
    Schedule schedule = base;
    run_tour(instance, plan, schedule, std::min(first_position, plan.tour.size()));
    finish(instance, schedule);
    return schedule;
}

double objective(const Instance& instance, const Schedule& schedule) {
    double total = 0.0;
    for (const auto& c : instance.customers()) {
        total += c.importance * schedule.tardiness[static_cast<std::size_t>(c.id)];
    }
    return total;
}

}  // namespace mothership
