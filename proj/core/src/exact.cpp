#include "mothership/exact.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>

#include <spdlog/spdlog.h>

#include "chain.hpp"
#include "mothership/eval.hpp"
#include "mothership/heuristic.hpp"
#include "mothership/serialize.hpp"

namespace mothership {

namespace {

using Clock = std::chrono::steady_clock;

// An improvement must beat the incumbent by this much to count.
constexpr double kPruneMargin = 1e-9;

// Customer lists per station and robot; station slot 0 unused.
using Lists = std::vector<std::vector<std::vector<CustomerId>>>;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string plan_key(const RoutePlan& plan) { return serialize_plan(canonical(plan)); }

RoutePlan to_plan(std::span<const StationId> tour, const Lists& lists) {
    RoutePlan plan;
    plan.tour.assign(tour.begin(), tour.end());
    for (std::size_t k = 1; k < lists.size(); ++k) {
        for (std::size_t r = 0; r < lists[k].size(); ++r) {
            if (lists[k][r].empty()) continue;
            plan.sorties.push_back({static_cast<RobotId>(r), static_cast<StationId>(k), lists[k][r]});
        }
    }
    return plan;
}

class Bounder {
public:
    explicit Bounder(const Instance& instance)
        : instance_(instance),
          arrive_(static_cast<std::size_t>(instance.station_count()) + 1, 0.0),
          complete_(static_cast<std::size_t>(instance.customer_count()), 0.0),
          in_prefix_(static_cast<std::size_t>(instance.station_count()) + 1, 0) {}

    double operator()(std::span<const StationId> prefix, const Lists& lists, std::span<const char> assigned) {
        const auto& dist = instance_.distances();
        const double vv = instance_.vehicle_speed();
        std::fill(in_prefix_.begin(), in_prefix_.end(), 0);
        double t = 0.0;
        StationId prev = 0;
        for (StationId k : prefix) {
            const auto ks = static_cast<std::size_t>(k);
            in_prefix_[ks] = 1;
            const double arrive = t + dist.vehicle(prev, k) / vv;
            double depart = arrive;
            for (const auto& list : lists[ks]) {
                depart = std::max(depart, detail::run_chain(instance_, k, list, arrive, complete_));
            }
            arrive_[ks] = arrive;
            t = depart;
            prev = k;
        }
        for (StationId k = 1; k <= instance_.station_count(); ++k) {
            const auto ks = static_cast<std::size_t>(k);
            if (in_prefix_[ks]) continue;
            arrive_[ks] = t + dist.vehicle(prev, k) / vv;
            for (const auto& list : lists[ks]) detail::run_chain(instance_, k, list, arrive_[ks], complete_);
        }
        const double vr = instance_.robot_speed();
        double total = 0.0;
        for (const auto& c : instance_.customers()) {
            const auto o = static_cast<std::size_t>(c.id);
            double when = complete_[o];
            if (!assigned[o]) {
                when = std::numeric_limits<double>::infinity();
                for (StationId k : instance_.reachable_stations(c.id)) {
                    when = std::min(when, arrive_[static_cast<std::size_t>(k)] + dist.station_customer(k, c.id) / vr);
                }
            }
            total += c.importance * detail::tardiness(when, c.deadline);
        }
        return total;
    }

private:
    const Instance& instance_;
    std::vector<double> arrive_;
    std::vector<double> complete_;
    std::vector<char> in_prefix_;
};

// Incumbent and counters shared by all workers.
struct Shared {
    std::mutex mu;
    std::atomic<double> best{std::numeric_limits<double>::infinity()};
    RoutePlan plan;
    std::string key;
    bool have_plan = false;
    double open_bound = std::numeric_limits<double>::infinity();

    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::uint64_t max_nodes = 0;
    double max_seconds = 0;
    Clock::time_point start;

    void offer(double value, RoutePlan candidate) {
        std::lock_guard lock(mu);
        const double current = best.load();
        if (value < current - kPruneMargin) {
            plan = std::move(candidate);
            key = plan_key(plan);
            have_plan = true;
            best.store(value);
            spdlog::debug("bnb: incumbent {:.6f} after {} nodes", value, nodes.load());
        } else if (value <= current + kPruneMargin) {
            auto candidate_key = plan_key(candidate);
            if (!have_plan || candidate_key < key) {
                plan = std::move(candidate);
                key = std::move(candidate_key);
                have_plan = true;
                best.store(value);
            }
        }
    }

    void abandon(double bound) {
        std::lock_guard lock(mu);
        open_bound = std::min(open_bound, bound);
    }

    bool tick() {
        const auto n = nodes.fetch_add(1) + 1;
        if (n >= max_nodes) stop.store(true);
        if ((n & 1023u) == 0 && seconds_since(start) > max_seconds) stop.store(true);
        return !stop.load();
    }
};

struct Child {
    double bound;
    StationId station;
    int robot;
    std::size_t position;
};

class Search {
public:
    Search(const Instance& instance, Shared& shared, std::span<const CustomerId> order)
        : instance_(instance),
          shared_(shared),
          bounder_(instance),
          order_(order.begin(), order.end()),
          lists_(static_cast<std::size_t>(instance.station_count()) + 1),
          lengths_(static_cast<std::size_t>(instance.station_count()) + 1),
          assigned_(static_cast<std::size_t>(instance.customer_count()), 0),
          visited_(static_cast<std::size_t>(instance.station_count()) + 1, 0) {}

    void run(std::span<const StationId> prefix, double prefix_bound) {
        tour_.assign(prefix.begin(), prefix.end());
        for (StationId k : tour_) visited_[static_cast<std::size_t>(k)] = 1;
        extend_tour(prefix_bound);
    }

private:
    void extend_tour(double node_bound) {
        if (static_cast<int>(tour_.size()) == instance_.station_count()) {
            assign(0, node_bound);
            return;
        }
        std::vector<Child> children;
        for (StationId k = 1; k <= instance_.station_count(); ++k) {
            if (visited_[static_cast<std::size_t>(k)]) continue;
            tour_.push_back(k);
            const double b = bounder_(tour_, lists_, assigned_);
            tour_.pop_back();
            children.push_back({b, k, 0, 0});
            if (!shared_.tick()) {
                shared_.abandon(node_bound);
                return;
            }
        }
        std::stable_sort(children.begin(), children.end(),
                         [](const Child& a, const Child& b) { return a.bound < b.bound; });
        for (std::size_t i = 0; i < children.size(); ++i) {
            const auto& child = children[i];
            if (child.bound >= shared_.best.load() - kPruneMargin) break;
            if (shared_.stop.load()) {
                shared_.abandon(child.bound);
                break;
            }
            tour_.push_back(child.station);
            visited_[static_cast<std::size_t>(child.station)] = 1;
            extend_tour(child.bound);
            visited_[static_cast<std::size_t>(child.station)] = 0;
            tour_.pop_back();
        }
    }

    void apply(const Child& c, CustomerId o) {
        const auto k = static_cast<std::size_t>(c.station);
        const auto r = static_cast<std::size_t>(c.robot);
        if (r == lists_[k].size()) {
            lists_[k].emplace_back();
            lengths_[k].push_back(0.0);
        }
        auto& list = lists_[k][r];
        list.insert(list.begin() + static_cast<std::ptrdiff_t>(c.position), o);
        lengths_[k][r] += 2.0 * instance_.distances().station_customer(c.station, o);
        assigned_[static_cast<std::size_t>(o)] = 1;
    }

    void undo(const Child& c, CustomerId o) {
        const auto k = static_cast<std::size_t>(c.station);
        const auto r = static_cast<std::size_t>(c.robot);
        auto& list = lists_[k][r];
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(c.position));
        lengths_[k][r] -= 2.0 * instance_.distances().station_customer(c.station, o);
        if (list.empty() && r + 1 == lists_[k].size()) {
            lists_[k].pop_back();
            lengths_[k].pop_back();
        }
        assigned_[static_cast<std::size_t>(o)] = 0;
    }

    void assign(std::size_t depth, double node_bound) {
        if (depth == order_.size()) {
            const double value = bounder_(tour_, lists_, assigned_);
            if (value <= shared_.best.load() + kPruneMargin) shared_.offer(value, to_plan(tour_, lists_));
            return;
        }
        const CustomerId o = order_[depth];
        std::vector<Child> children;
        for (StationId k : instance_.reachable_stations(o)) {
            const auto ks = static_cast<std::size_t>(k);
            const double extra = 2.0 * instance_.distances().station_customer(k, o);
            const int used = static_cast<int>(lists_[ks].size());
            for (int r = 0; r < used; ++r) {
                if (lengths_[ks][static_cast<std::size_t>(r)] + extra > instance_.robot_range() + kTolerance) continue;
                const std::size_t len = lists_[ks][static_cast<std::size_t>(r)].size();
                for (std::size_t pos = 0; pos <= len; ++pos) children.push_back({0.0, k, r, pos});
            }
            if (used < instance_.fleet_size()) children.push_back({0.0, k, used, 0});
        }
        for (auto& child : children) {
            apply(child, o);
            child.bound = bounder_(tour_, lists_, assigned_);
            undo(child, o);
            if (!shared_.tick()) {
                shared_.abandon(node_bound);
                return;
            }
        }
        std::stable_sort(children.begin(), children.end(),
                         [](const Child& a, const Child& b) { return a.bound < b.bound; });
        for (const auto& child : children) {
            if (child.bound >= shared_.best.load() - kPruneMargin) break;
            if (shared_.stop.load()) {
                shared_.abandon(child.bound);
                break;
            }
            apply(child, o);
            assign(depth + 1, child.bound);
            undo(child, o);
        }
    }

    const Instance& instance_;
    Shared& shared_;
    Bounder bounder_;
    std::vector<CustomerId> order_;
    std::vector<StationId> tour_;
    Lists lists_;
    std::vector<std::vector<double>> lengths_;
    std::vector<char> assigned_;
    std::vector<char> visited_;
};

// Customers with early deadlines first; their placement moves the bound most.
std::vector<CustomerId> branching_order(const Instance& instance) {
    std::vector<CustomerId> order(static_cast<std::size_t>(instance.customer_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](CustomerId a, CustomerId b) {
        const auto& ca = instance.customer(a);
        const auto& cb = instance.customer(b);
        if (ca.deadline != cb.deadline) return ca.deadline < cb.deadline;
        return ca.importance > cb.importance;
    });
    return order;
}

SolveReport finish_report(const Instance& instance, std::string method, const RoutePlan& plan) {
    SolveReport report;
    report.method = std::move(method);
    report.plan = canonical(plan);
    report.schedule = propagate(instance, report.plan);
    report.objective = report.schedule.objective;
    return report;
}

}  // namespace

double lower_bound(const Instance& instance, const SearchNode& node) {
    Lists lists(static_cast<std::size_t>(instance.station_count()) + 1);
    std::vector<char> assigned(static_cast<std::size_t>(instance.customer_count()), 0);
    for (const auto& s : node.sorties) {
        auto& at_station = lists.at(static_cast<std::size_t>(s.station));
        at_station.push_back(s.services);
        for (CustomerId o : s.services) assigned.at(static_cast<std::size_t>(o)) = 1;
    }
    Bounder bounder(instance);
    return bounder(node.tour_prefix, lists, assigned);
}

double horizon(const Instance& instance) {
    const auto& dist = instance.distances();
    const int n_s = instance.station_count();
    double longest = 0.0;
    if (n_s <= 8) {
        std::vector<StationId> tour(static_cast<std::size_t>(n_s));
        std::iota(tour.begin(), tour.end(), 1);
        do {
            double length = 0.0;
            StationId prev = 0;
            for (StationId k : tour) {
                length += dist.vehicle(prev, k);
                prev = k;
            }
            length += dist.vehicle(prev, 0);
            longest = std::max(longest, length);
        } while (std::next_permutation(tour.begin(), tour.end()));
    } else {
        for (int i = 0; i <= n_s; ++i) {
            double widest = 0.0;
            for (int j = 0; j <= n_s; ++j) widest = std::max(widest, dist.vehicle(i, j));
            longest += widest;
        }
    }
    double robots = 0.0;
    for (const auto& c : instance.customers()) {
        double farthest = 0.0;
        for (const auto& s : instance.stations()) farthest = std::max(farthest, dist.station_customer(s.id, c.id));
        robots += 2.0 * farthest / instance.robot_speed();
    }
    return longest / instance.vehicle_speed() + robots;
}

SolveReport solve_oracle(const Instance& instance, const OracleLimits& limits) {
    if (instance.station_count() > limits.max_stations || instance.customer_count() > limits.max_customers ||
        instance.fleet_size() > limits.max_robots) {
        throw SizeLimitError("instance exceeds oracle limits (stations <= " + std::to_string(limits.max_stations) +
                             ", customers <= " + std::to_string(limits.max_customers) +
                             ", robots <= " + std::to_string(limits.max_robots) + ")");
    }
    const auto start = Clock::now();
    const int n_s = instance.station_count();
    const int n_r = instance.fleet_size();
    const int n_c = instance.customer_count();

    // Every robot slot at every station, in full (no symmetry reduction).
    Lists lists(static_cast<std::size_t>(n_s) + 1, std::vector<std::vector<CustomerId>>(static_cast<std::size_t>(n_r)));
    std::vector<StationId> tour(static_cast<std::size_t>(n_s));
    std::iota(tour.begin(), tour.end(), 1);

    bool found = false;
    double best = 0.0;
    RoutePlan best_plan;
    std::string best_key;
    std::uint64_t leaves = 0;

    auto leaf = [&] {
        RoutePlan plan = to_plan(tour, lists);
        if (!validate(instance, plan).empty()) return;
        ++leaves;
        const double value = propagate(instance, plan).objective;
        if (!found || value < best - kPruneMargin) {
            found = true;
            best = value;
            best_plan = std::move(plan);
            best_key = plan_key(best_plan);
        } else if (value <= best + kPruneMargin) {
            auto key = plan_key(plan);
            if (key < best_key) {
                best = value;
                best_plan = std::move(plan);
                best_key = std::move(key);
            }
        }
    };

    // Inserting each customer at every position of every list enumerates
    // every ordered partition exactly once.
    auto place = [&](auto&& self, int o) -> void {
        if (o == n_c) {
            leaf();
            return;
        }
        for (int k = 1; k <= n_s; ++k) {
            for (int r = 0; r < n_r; ++r) {
                auto& list = lists[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
                for (std::size_t pos = 0; pos <= list.size(); ++pos) {
                    list.insert(list.begin() + static_cast<std::ptrdiff_t>(pos), o);
                    self(self, o + 1);
                    list.erase(list.begin() + static_cast<std::ptrdiff_t>(pos));
                }
            }
        }
    };

    do {
        place(place, 0);
    } while (std::next_permutation(tour.begin(), tour.end()));

    if (!found) throw InfeasibleError("no plan satisfies every constraint");
    SolveReport report;
    report.method = "oracle";
    report.plan = best_plan;
    report.schedule = propagate(instance, best_plan);
    report.objective = report.schedule.objective;
    report.status = ProofStatus::Optimal;
    report.lower_bound = report.objective;
    report.nodes = leaves;
    report.wall_seconds = seconds_since(start);
    return report;
}

SolveReport solve_bnb(const Instance& instance, const Budget& budget) {
    const auto start = Clock::now();
    Shared shared;
    shared.max_nodes = budget.max_nodes;
    shared.max_seconds = budget.max_seconds;
    shared.start = start;

    if (budget.warm_start) {
        SearchParams params;
        params.restarts = 4;
        params.max_iterations = 500;
        params.max_seconds = std::numeric_limits<double>::infinity();
        try {
            const auto warm = solve_heuristic(instance, params);
            shared.offer(warm.objective, warm.plan);
        } catch (const InfeasibleError&) {
            spdlog::debug("bnb: no warm start");
        }
    }

    const auto order = branching_order(instance);

    // Work items: every tour prefix of length min(2, n_s), in lexicographic
    // order.
    std::vector<std::vector<StationId>> items;
    const int n_s = instance.station_count();
    for (StationId a = 1; a <= n_s; ++a) {
        if (n_s == 1) {
            items.push_back({a});
            continue;
        }
        for (StationId b = 1; b <= n_s; ++b) {
            if (b != a) items.push_back({a, b});
        }
    }

    // Prefix-level pruning happens inside Search; items whose own bound
    // already fails are skipped there too.
    auto work = [&](std::size_t index) {
        Search search(instance, shared, order);
        const auto& prefix = items[index];
        Bounder bounder(instance);
        Lists empty(static_cast<std::size_t>(n_s) + 1);
        std::vector<char> none(static_cast<std::size_t>(instance.customer_count()), 0);
        const double b = bounder(prefix, empty, none);
        if (b >= shared.best.load() - kPruneMargin) return;
        if (shared.stop.load()) {
            shared.abandon(b);
            return;
        }
        search.run(prefix, b);
    };

    const unsigned threads = std::max(1u, budget.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) work(i);
            });
        }
    }

    if (!shared.have_plan) {
        if (shared.stop.load()) throw InfeasibleError("budget exhausted before a feasible plan was found");
        throw InfeasibleError("no plan satisfies every constraint");
    }
    SolveReport report = finish_report(instance, "exact", shared.plan);
    report.nodes = shared.nodes.load();
    if (shared.stop.load() && shared.open_bound < report.objective - kPruneMargin) {
        report.status = ProofStatus::BudgetExhausted;
        report.lower_bound = std::max(0.0, shared.open_bound);
    } else {
        report.status = ProofStatus::Optimal;
        report.lower_bound = report.objective;
    }
    report.wall_seconds = seconds_since(start);
    return report;
}

}  // namespace mothership
