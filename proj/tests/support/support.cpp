#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mothership/eval.hpp"
#include "mothership/exact.hpp"
#include "mothership/instgen.hpp"

namespace mothership::testing {

Instance tiny_instance(std::uint64_t seed) {
    GeneratorParams g;
    g.seed = seed;
    g.stations = 1 + static_cast<int>(seed % 2);
    g.robots = 1 + static_cast<int>((seed / 2) % 2);
    g.customers = 3 + static_cast<int>(seed % 3);
    g.width = 40;
    g.height = 40;
    g.robot_range = 120;
    g.vehicle_speed = 20;
    g.robot_speed = 2;
    return generate(g);
}

std::vector<TinyCase> tiny_corpus(std::size_t count, std::uint64_t first_seed) {
    std::vector<TinyCase> out;
    for (std::uint64_t seed = first_seed; out.size() < count; ++seed) {
        Instance instance = tiny_instance(seed);
        try {
            SolveReport oracle = solve_oracle(instance);
            out.push_back({seed, std::move(instance), std::move(oracle)});
        } catch (const InfeasibleError&) {
        }
    }
    return out;
}

RoutePlan random_plan(const Instance& instance, std::mt19937_64& rng) {
    RoutePlan plan;
    for (StationId k = 1; k <= instance.station_count(); ++k) plan.tour.push_back(k);
    std::shuffle(plan.tour.begin(), plan.tour.end(), rng);
    std::uniform_int_distribution<int> station(1, instance.station_count());
    std::uniform_int_distribution<int> robot(0, instance.fleet_size() - 1);
    std::map<std::pair<int, int>, std::vector<CustomerId>> bins;
    for (const auto& c : instance.customers()) bins[{station(rng), robot(rng)}].push_back(c.id);
    for (auto& [key, services] : bins) {
        std::shuffle(services.begin(), services.end(), rng);
        plan.sorties.push_back({key.second, key.first, services});
    }
    std::shuffle(plan.sorties.begin(), plan.sorties.end(), rng);
    return plan;
}

RoutePlan random_feasible_plan(const Instance& instance, std::mt19937_64& rng, int attempts) {
    for (int a = 0; a < attempts; ++a) {
        RoutePlan plan;
        for (StationId k = 1; k <= instance.station_count(); ++k) plan.tour.push_back(k);
        std::shuffle(plan.tour.begin(), plan.tour.end(), rng);
        std::map<std::pair<int, int>, std::vector<CustomerId>> bins;
        std::uniform_int_distribution<int> robot(0, instance.fleet_size() - 1);
        for (const auto& c : instance.customers()) {
            const auto& reach = instance.reachable_stations(c.id);
            std::uniform_int_distribution<std::size_t> pick(0, reach.size() - 1);
            bins[{reach[pick(rng)], robot(rng)}].push_back(c.id);
        }
        for (auto& [key, services] : bins) {
            std::shuffle(services.begin(), services.end(), rng);
            plan.sorties.push_back({key.second, key.first, services});
        }
        if (validate(instance, plan).empty()) return plan;
    }
    return {};
}

Instance random_instance(std::mt19937_64& rng, int n_s, int n_r, int n_c) {
    std::uniform_real_distribution<double> coord(-50, 50);
    std::uniform_real_distribution<double> weight(0.01, 1.0);
    std::uniform_real_distribution<double> deadline(1, 60);
    std::uniform_real_distribution<double> speed(0.5, 30);
    InstanceData data;
    data.depot = {coord(rng), coord(rng)};
    for (int k = 1; k <= n_s; ++k) data.stations.push_back({k, {coord(rng), coord(rng)}});
    double need = 0;
    for (int o = 0; o < n_c; ++o) {
        Customer c{o, {coord(rng), coord(rng)}, weight(rng), deadline(rng)};
        double nearest = INFINITY;
        for (const auto& s : data.stations) nearest = std::min(nearest, distance(s.location, c.location));
        need = std::max(need, 2 * nearest);
        data.customers.push_back(c);
    }
    data.fleet_size = n_r;
    data.robot_range = need * std::uniform_real_distribution<double>(1.0, 3.0)(rng) + 1;
    data.vehicle_speed = speed(rng);
    data.robot_speed = speed(rng);
    return Instance(std::move(data));
}

// ------------------------------------------------------------------ LpModel

namespace {

bool is_number(const std::string& tok) {
    if (tok.empty()) return false;
    char* end = nullptr;
    std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

std::vector<std::string> split(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::vector<LpModel::Term> LpModel::parse_terms(const std::vector<std::string>& tokens, std::size_t begin,
                                                std::size_t end) {
    std::vector<Term> terms;
    double sign = 1;
    double coef = 1;
    bool in_bracket = false;
    for (std::size_t i = begin; i < end; ++i) {
        const std::string& t = tokens[i];
        if (t == "+") continue;
        if (t == "-") {
            sign = -sign;
            continue;
        }
        if (t == "[") {
            in_bracket = true;
            continue;
        }
        if (t == "]") {
            in_bracket = false;
            continue;
        }
        if (is_number(t)) {
            coef = std::stod(t);
            continue;
        }
        Term term{sign * coef, t, ""};
        if (i + 2 < end && tokens[i + 1] == "*") {
            if (!in_bracket) throw std::runtime_error("product outside brackets");
            term.b = tokens[i + 2];
            i += 2;
        }
        terms.push_back(term);
        sign = 1;
        coef = 1;
    }
    return terms;
}

LpModel::LpModel(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    std::vector<std::string> pending;
    auto flush = [&] {
        if (pending.empty()) return;
        std::string joined;
        for (const auto& p : pending) joined += ' ' + p;
        pending.clear();
        auto tokens = split(joined);
        const std::string name = tokens.front().substr(0, tokens.front().size() - 1);
        if (section == "Minimize") {
            objective_ = parse_terms(tokens, 1, tokens.size());
            return;
        }
        Row row;
        row.name = name;
        row.sense = tokens[tokens.size() - 2];
        row.rhs = std::stod(tokens.back());
        row.terms = parse_terms(tokens, 1, tokens.size() - 2);
        rows_.push_back(std::move(row));
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '\\') continue;
        if (line[0] != ' ') {
            flush();
            section = line;
            continue;
        }
        if (section == "Minimize" || section == "Subject To") {
            const bool continuation = line.rfind("   ", 0) == 0;
            if (!continuation) flush();
            pending.push_back(line);
        } else if (section == "Bounds") {
            bounded_.push_back(split(line).front());
        } else if (section == "Binaries") {
            for (auto& b : split(line)) binaries_.push_back(b);
        }
    }
    flush();
}

double LpModel::eval(const std::vector<Term>& terms, const std::map<std::string, double>& values) {
    auto value = [&](const std::string& v) {
        const auto it = values.find(v);
        return it == values.end() ? 0.0 : it->second;
    };
    double sum = 0;
    for (const auto& t : terms) sum += t.coef * value(t.a) * (t.b.empty() ? 1.0 : value(t.b));
    return sum;
}

std::vector<LpModel::Failure> LpModel::check(const std::map<std::string, double>& values, double tol) const {
    std::vector<Failure> out;
    for (const auto& row : rows_) {
        const double lhs = eval(row.terms, values);
        const bool ok = row.sense == "<="   ? lhs <= row.rhs + tol
                        : row.sense == ">=" ? lhs >= row.rhs - tol
                                            : std::fabs(lhs - row.rhs) <= tol;
        if (!ok) out.push_back({row.name, lhs, row.sense, row.rhs});
    }
    for (const auto& b : binaries_) {
        const auto it = values.find(b);
        const double v = it == values.end() ? 0.0 : it->second;
        if (std::fabs(v) > tol && std::fabs(v - 1) > tol) out.push_back({b, v, "binary", 0});
    }
    for (const auto& b : bounded_) {
        const auto it = values.find(b);
        if (it != values.end() && it->second < -tol) out.push_back({b, it->second, ">=", 0});
    }
    return out;
}

double LpModel::objective(const std::map<std::string, double>& values) const { return eval(objective_, values); }

std::size_t LpModel::variable_count() const {
    std::set<std::string> names(binaries_.begin(), binaries_.end());
    names.insert(bounded_.begin(), bounded_.end());
    return names.size();
}

bool LpModel::has_quadratic() const {
    return std::any_of(rows_.begin(), rows_.end(), [](const Row& r) {
        return std::any_of(r.terms.begin(), r.terms.end(), [](const Term& t) { return !t.b.empty(); });
    });
}

}  // namespace mothership::testing
