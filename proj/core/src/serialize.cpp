#include "mothership/serialize.hpp"

#include <json.hpp>

#include "mothership/solve_report.hpp"

namespace mothership {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + "." + key + ": missing");
    return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
    return v.get<int>();
}

const json& array(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_array()) throw ParseError(where + "." + key + ": expected an array");
    return v;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Point point(const json& obj, const std::string& where) {
    return {number(obj, "x", where), number(obj, "y", where)};
}

}  // namespace

Instance parse_instance(std::string_view text) {
    const json doc = parse_json(text);
    InstanceData data;
    data.depot = point(field(doc, "depot", "instance"), "depot");
    const auto& stations = array(doc, "stations", "instance");
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const std::string where = "stations[" + std::to_string(i) + "]";
        data.stations.push_back({integer(stations[i], "id", where), point(stations[i], where)});
    }
    const auto& customers = array(doc, "customers", "instance");
    for (std::size_t i = 0; i < customers.size(); ++i) {
        const std::string where = "customers[" + std::to_string(i) + "]";
        const auto& c = customers[i];
        data.customers.push_back({integer(c, "id", where), point(c, where), number(c, "importance", where),
                                  number(c, "deadline", where)});
    }
    data.fleet_size = integer(doc, "fleet_size", "instance");
    data.robot_range = number(doc, "robot_range", "instance");
    data.vehicle_speed = number(doc, "vehicle_speed", "instance");
    data.robot_speed = number(doc, "robot_speed", "instance");
    return Instance(std::move(data));
}

std::string serialize_instance(const Instance& instance) {
    ordered doc;
    doc["depot"] = {{"x", instance.depot().x}, {"y", instance.depot().y}};
    doc["stations"] = ordered::array();
    for (const auto& s : instance.stations()) {
        doc["stations"].push_back({{"id", s.id}, {"x", s.location.x}, {"y", s.location.y}});
    }
    doc["customers"] = ordered::array();
    for (const auto& c : instance.customers()) {
        doc["customers"].push_back({{"id", c.id},
                                    {"x", c.location.x},
                                    {"y", c.location.y},
                                    {"importance", c.importance},
                                    {"deadline", c.deadline}});
    }
    doc["fleet_size"] = instance.fleet_size();
    doc["robot_range"] = instance.robot_range();
    doc["vehicle_speed"] = instance.vehicle_speed();
    doc["robot_speed"] = instance.robot_speed();
    return doc.dump(2) + "\n";
}

RoutePlan parse_plan(std::string_view text) {
    const json doc = parse_json(text);
    RoutePlan plan;
    for (const auto& k : array(doc, "tour", "plan")) {
        if (!k.is_number_integer()) throw ParseError("plan.tour: expected integer station ids");
        plan.tour.push_back(k.get<StationId>());
    }
    const auto& sorties = array(doc, "sorties", "plan");
    for (std::size_t i = 0; i < sorties.size(); ++i) {
        const std::string where = "sorties[" + std::to_string(i) + "]";
        Sortie s;
        s.robot = integer(sorties[i], "robot", where);
        s.station = integer(sorties[i], "station", where);
        for (const auto& o : array(sorties[i], "services", where)) {
            if (!o.is_number_integer()) throw ParseError(where + ".services: expected integer customer ids");
            s.services.push_back(o.get<CustomerId>());
        }
        plan.sorties.push_back(std::move(s));
    }
    return plan;
}

std::string serialize_plan(const RoutePlan& plan) {
    ordered doc;
    doc["tour"] = plan.tour;
    doc["sorties"] = ordered::array();
    for (const auto& s : plan.sorties) {
        doc["sorties"].push_back({{"robot", s.robot}, {"station", s.station}, {"services", s.services}});
    }
    return doc.dump() + "\n";
}

std::string serialize_schedule(const Instance& instance, const RoutePlan& plan, const Schedule& schedule) {
    ordered doc;
    doc["stations"] = ordered::array();
    for (StationId k : plan.tour) {
        const auto i = static_cast<std::size_t>(k);
        doc["stations"].push_back({{"id", k}, {"arrive", schedule.arrive[i]}, {"depart", schedule.depart[i]}});
    }
    doc["customers"] = ordered::array();
    for (const auto& c : instance.customers()) {
        const auto o = static_cast<std::size_t>(c.id);
        doc["customers"].push_back(
            {{"id", c.id}, {"complete", schedule.complete[o]}, {"tardiness", schedule.tardiness[o]}});
    }
    doc["return_time"] = schedule.return_time;
    doc["objective"] = schedule.objective;
    return doc.dump(2) + "\n";
}

std::string serialize_violations(const std::vector<Violation>& violations) {
    ordered doc = ordered::array();
    for (const auto& v : violations) doc.push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
    return doc.dump(2) + "\n";
}

std::string to_string(ProofStatus status) {
    switch (status) {
        case ProofStatus::Optimal: return "optimal";
        case ProofStatus::BudgetExhausted: return "budget-exhausted";
        case ProofStatus::Heuristic: return "heuristic";
    }
    return "heuristic";
}

std::string serialize_report(const SolveReport& report, bool with_timing) {
    ordered doc;
    doc["method"] = report.method;
    doc["status"] = to_string(report.status);
    doc["objective"] = report.objective;
    doc["lower_bound"] = report.lower_bound;
    doc["gap"] = report.gap();
    doc["nodes"] = report.nodes;
    if (with_timing) doc["wall_seconds"] = report.wall_seconds;
    doc["plan"] = ordered::parse(serialize_plan(report.plan));
    return doc.dump(2) + "\n";
}

}  // namespace mothership
