#include "mothership/heuristic.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

#include "chain.hpp"
#include "mothership/eval.hpp"

namespace mothership {

namespace {

using Clock = std::chrono::steady_clock;

// A move has to gain at least this much to be accepted.
constexpr double kMinGain = 1e-9;

struct Evaluated {
    RoutePlan plan;
    Schedule schedule;
};

std::vector<std::size_t> tour_positions(const Instance& instance, const RoutePlan& plan) {
    std::vector<std::size_t> pos(static_cast<std::size_t>(instance.station_count()) + 1, 0);
    for (std::size_t i = 0; i < plan.tour.size(); ++i) pos[static_cast<std::size_t>(plan.tour[i])] = i;
    return pos;
}

std::optional<RobotId> free_robot(const Instance& instance, const RoutePlan& plan, StationId k) {
    std::vector<char> busy(static_cast<std::size_t>(instance.fleet_size()), 0);
    for (const auto& s : plan.sorties) {
        if (s.station == k) busy[static_cast<std::size_t>(s.robot)] = 1;
    }
    for (RobotId r = 0; r < instance.fleet_size(); ++r) {
        if (!busy[static_cast<std::size_t>(r)]) return r;
    }
    return std::nullopt;
}

bool fits(const Instance& instance, const Sortie& s) {
    return sortie_length(instance, s) <= instance.robot_range() + kTolerance;
}

// Removes services[index] from sortie `si`, erasing the sortie if it empties.
// Returns true if the sortie was erased.
bool remove_service(RoutePlan& plan, std::size_t si, std::size_t index) {
    auto& services = plan.sorties[si].services;
    services.erase(services.begin() + static_cast<std::ptrdiff_t>(index));
    if (!services.empty()) return false;
    plan.sorties.erase(plan.sorties.begin() + static_cast<std::ptrdiff_t>(si));
    return true;
}

double vehicle_length(const Instance& instance, const std::vector<StationId>& tour) {
    const auto& dist = instance.distances();
    double length = 0.0;
    StationId prev = 0;
    for (StationId k : tour) {
        length += dist.vehicle(prev, k);
        prev = k;
    }
    return length + dist.vehicle(prev, 0);
}

std::vector<StationId> nearest_neighbour_tour(const Instance& instance) {
    const auto& dist = instance.distances();
    std::vector<char> used(static_cast<std::size_t>(instance.station_count()) + 1, 0);
    std::vector<StationId> tour;
    StationId at = 0;
    for (int step = 0; step < instance.station_count(); ++step) {
        StationId next = 0;
        for (StationId k = 1; k <= instance.station_count(); ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            if (next == 0 || dist.vehicle(at, k) < dist.vehicle(at, next)) next = k;
        }
        used[static_cast<std::size_t>(next)] = 1;
        tour.push_back(next);
        at = next;
    }
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 1 < tour.size() && !improved; ++i) {
            for (std::size_t j = i + 1; j < tour.size() && !improved; ++j) {
                auto candidate = tour;
                std::reverse(candidate.begin() + static_cast<std::ptrdiff_t>(i),
                             candidate.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                if (vehicle_length(instance, candidate) < vehicle_length(instance, tour) - kMinGain) {
                    tour = std::move(candidate);
                    improved = true;
                }
            }
        }
    }
    return tour;
}

// Weighted tardiness of the customers served so far by a plan that may leave
// some customers out.
double partial_objective(const Instance& instance, const RoutePlan& plan, std::vector<double>& complete,
                         const std::vector<char>& served) {
    const auto& dist = instance.distances();
    double t = 0.0;
    StationId prev = 0;
    for (StationId k : plan.tour) {
        const double arrive = t + dist.vehicle(prev, k) / instance.vehicle_speed();
        double depart = arrive;
        for (const auto& s : plan.sorties) {
            if (s.station == k) depart = std::max(depart, detail::run_chain(instance, k, s.services, arrive, complete));
        }
        t = depart;
        prev = k;
    }
    double total = 0.0;
    for (const auto& c : instance.customers()) {
        const auto o = static_cast<std::size_t>(c.id);
        if (served[o]) total += c.importance * detail::tardiness(complete[o], c.deadline);
    }
    return total;
}

// Range-feasible assignment by depth-first packing, hardest customers first.
// Sortie length does not depend on service order, so each (station, robot)
// bin only tracks its used range. Robots at a station open in index order.
std::optional<RoutePlan> pack(const Instance& instance, std::vector<StationId> tour) {
    constexpr std::uint64_t kNodeCap = 2'000'000;
    const auto& dist = instance.distances();
    const int n_s = instance.station_count();
    const int n_r = instance.fleet_size();

    std::vector<CustomerId> order(static_cast<std::size_t>(instance.customer_count()));
    std::iota(order.begin(), order.end(), 0);
    auto cheapest = [&](CustomerId o) {
        double best = std::numeric_limits<double>::infinity();
        for (StationId k : instance.reachable_stations(o)) best = std::min(best, 2 * dist.station_customer(k, o));
        return best;
    };
    std::stable_sort(order.begin(), order.end(), [&](CustomerId a, CustomerId b) {
        const auto ra = instance.reachable_stations(a).size();
        const auto rb = instance.reachable_stations(b).size();
        if (ra != rb) return ra < rb;
        return cheapest(a) > cheapest(b);
    });

    std::vector<double> used(static_cast<std::size_t>(n_s * n_r), 0.0);
    std::vector<int> opened(static_cast<std::size_t>(n_s) + 1, 0);
    std::vector<std::pair<StationId, RobotId>> where(order.size());
    std::uint64_t nodes = 0;

    auto place = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == order.size()) return true;
        if (++nodes > kNodeCap) return false;
        const CustomerId o = order[depth];
        for (StationId k : instance.reachable_stations(o)) {
            const double leg = 2 * dist.station_customer(k, o);
            const int open = opened[static_cast<std::size_t>(k)];
            for (RobotId r = 0; r <= std::min(open, n_r - 1); ++r) {
                auto& bin = used[static_cast<std::size_t>((k - 1) * n_r + r)];
                if (bin + leg > instance.robot_range() + kTolerance) continue;
                bin += leg;
                if (r == open) ++opened[static_cast<std::size_t>(k)];
                where[depth] = {k, r};
                if (self(self, depth + 1)) return true;
                if (r == open) --opened[static_cast<std::size_t>(k)];
                bin -= leg;
            }
        }
        return false;
    };
    if (!place(place, 0)) return std::nullopt;

    RoutePlan plan;
    plan.tour = std::move(tour);
    std::vector<CustomerId> by_deadline(order);
    std::stable_sort(by_deadline.begin(), by_deadline.end(), [&](CustomerId a, CustomerId b) {
        return instance.customer(a).deadline < instance.customer(b).deadline;
    });
    std::vector<std::pair<StationId, RobotId>> slot(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) slot[static_cast<std::size_t>(order[i])] = where[i];
    for (CustomerId o : by_deadline) {
        const auto [k, r] = slot[static_cast<std::size_t>(o)];
        auto it = std::find_if(plan.sorties.begin(), plan.sorties.end(),
                               [&](const Sortie& s) { return s.station == k && s.robot == r; });
        if (it == plan.sorties.end()) {
            plan.sorties.push_back({r, k, {o}});
        } else {
            it->services.push_back(o);
        }
    }
    return canonical(std::move(plan));
}

class LocalSearch {
public:
    LocalSearch(const Instance& instance, const SearchParams& params, std::mt19937_64& rng,
                Clock::time_point deadline)
        : instance_(instance), params_(params), rng_(rng), deadline_(deadline) {}

    std::uint64_t moves() const { return moves_; }

    void descend(Evaluated& cur, unsigned run_id) {
        while (moves_ < params_.max_iterations && !timed_out()) {
            const auto& n = params_.neighborhoods;
            const bool moved = (n.relocate && relocate(cur, false)) || (n.swap && swap(cur)) ||
                               (n.reorder && relocate(cur, true)) || (n.reassign && reassign(cur)) ||
                               (n.two_opt && two_opt(cur));
            if (!moved) return;
            ++moves_;
            if (params_.observer) params_.observer(run_id, cur.plan, cur.schedule.objective);
        }
    }

    // Random feasible relocations plus an occasional tour reversal.
    void kick(Evaluated& cur) {
        for (unsigned i = 0; i < params_.kick_size; ++i) {
            auto options = relocations(cur.plan, false);
            if (options.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
            cur.plan = std::move(options[pick(rng_)]);
        }
        if (cur.plan.tour.size() >= 2 && std::bernoulli_distribution(0.5)(rng_)) {
            std::uniform_int_distribution<std::size_t> pick(0, cur.plan.tour.size() - 1);
            auto i = pick(rng_);
            auto j = pick(rng_);
            if (i > j) std::swap(i, j);
            std::reverse(cur.plan.tour.begin() + static_cast<std::ptrdiff_t>(i),
                         cur.plan.tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
        cur.schedule = propagate(instance_, cur.plan);
    }

private:
    bool timed_out() const { return Clock::now() > deadline_; }

    bool accept(Evaluated& cur, RoutePlan&& candidate, std::size_t first_position) {
        auto schedule = propagate_from(instance_, candidate, cur.schedule, first_position);
        if (schedule.objective < cur.schedule.objective - kMinGain) {
            cur.plan = std::move(candidate);
            cur.schedule = std::move(schedule);
            return true;
        }
        return false;
    }

    std::vector<std::size_t> shuffled(std::size_t n) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng_);
        return idx;
    }

    // Every plan reachable by moving one customer. `within` restricts moves to
    // the customer's own sortie (reordering); otherwise the own sortie is
    // excluded.
    std::vector<RoutePlan> relocations(const RoutePlan& plan, bool within) {
        std::vector<RoutePlan> out;
        for (std::size_t si = 0; si < plan.sorties.size(); ++si) {
            const auto& from = plan.sorties[si];
            for (std::size_t i = 0; i < from.services.size(); ++i) {
                for_each_relocation(plan, si, i, within, [&](RoutePlan&& p, std::size_t) {
                    out.push_back(std::move(p));
                    return false;
                });
            }
        }
        return out;
    }

    template <typename Fn>
    bool for_each_relocation(const RoutePlan& plan, std::size_t si, std::size_t i, bool within, Fn&& fn) {
        const Sortie& from = plan.sorties[si];
        const CustomerId o = from.services[i];
        const auto pos = tour_positions(instance_, plan);
        if (within) {
            for (std::size_t j = 0; j < from.services.size(); ++j) {
                if (j == i) continue;
                RoutePlan p = plan;
                auto& services = p.sorties[si].services;
                services.erase(services.begin() + static_cast<std::ptrdiff_t>(i));
                services.insert(services.begin() + static_cast<std::ptrdiff_t>(j), o);
                if (fn(std::move(p), pos[static_cast<std::size_t>(from.station)])) return true;
            }
            return false;
        }
        RoutePlan base = plan;
        const bool erased = remove_service(base, si, i);
        for (StationId k : instance_.reachable_stations(o)) {
            const std::size_t first = std::min(pos[static_cast<std::size_t>(from.station)], pos[static_cast<std::size_t>(k)]);
            for (std::size_t sj = 0; sj < base.sorties.size(); ++sj) {
                if (base.sorties[sj].station != k) continue;
                if (!erased && sj == si) continue;
                for (std::size_t at = 0; at <= base.sorties[sj].services.size(); ++at) {
                    RoutePlan p = base;
                    auto& services = p.sorties[sj].services;
                    services.insert(services.begin() + static_cast<std::ptrdiff_t>(at), o);
                    if (!fits(instance_, p.sorties[sj])) continue;
                    if (fn(std::move(p), first)) return true;
                }
            }
            if (erased && k == from.station) continue;  // would recreate the same singleton
            if (const auto r = free_robot(instance_, base, k)) {
                RoutePlan p = base;
                p.sorties.push_back({*r, k, {o}});
                if (fn(std::move(p), first)) return true;
            }
        }
        return false;
    }

    bool relocate(Evaluated& cur, bool within) {
        // Snapshot (station, index) pairs; the plan is not mutated until accept.
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t si = 0; si < cur.plan.sorties.size(); ++si) {
            for (std::size_t i = 0; i < cur.plan.sorties[si].services.size(); ++i) slots.emplace_back(si, i);
        }
        for (std::size_t idx : shuffled(slots.size())) {
            const auto [si, i] = slots[idx];
            const RoutePlan snapshot = cur.plan;
            const bool done = for_each_relocation(snapshot, si, i, within, [&](RoutePlan&& p, std::size_t first) {
                return accept(cur, std::move(p), first);
            });
            if (done) return true;
            if (timed_out()) return false;
        }
        return false;
    }

    bool swap(Evaluated& cur) {
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t si = 0; si < cur.plan.sorties.size(); ++si) {
            for (std::size_t i = 0; i < cur.plan.sorties[si].services.size(); ++i) slots.emplace_back(si, i);
        }
        const auto pos = tour_positions(instance_, cur.plan);
        for (std::size_t a : shuffled(slots.size())) {
            for (std::size_t b = 0; b < slots.size(); ++b) {
                if (a == b) continue;
                const auto [sa, ia] = slots[a];
                const auto [sb, ib] = slots[b];
                if (sa == sb && ia > ib) continue;  // same-sortie pairs once
                RoutePlan p = cur.plan;
                std::swap(p.sorties[sa].services[ia], p.sorties[sb].services[ib]);
                if (!fits(instance_, p.sorties[sa]) || !fits(instance_, p.sorties[sb])) continue;
                const std::size_t first = std::min(pos[static_cast<std::size_t>(p.sorties[sa].station)],
                                                   pos[static_cast<std::size_t>(p.sorties[sb].station)]);
                if (accept(cur, std::move(p), first)) return true;
            }
            if (timed_out()) return false;
        }
        return false;
    }

    bool reassign(Evaluated& cur) {
        const auto pos = tour_positions(instance_, cur.plan);
        for (std::size_t si : shuffled(cur.plan.sorties.size())) {
            const Sortie& s = cur.plan.sorties[si];
            for (StationId k = 1; k <= instance_.station_count(); ++k) {
                if (k == s.station) continue;
                const auto r = free_robot(instance_, cur.plan, k);
                if (!r) continue;
                RoutePlan p = cur.plan;
                p.sorties[si].station = k;
                p.sorties[si].robot = *r;
                if (!fits(instance_, p.sorties[si])) continue;
                const std::size_t first = std::min(pos[static_cast<std::size_t>(s.station)], pos[static_cast<std::size_t>(k)]);
                if (accept(cur, std::move(p), first)) return true;
            }
        }
        return false;
    }

    bool two_opt(Evaluated& cur) {
        const std::size_t n = cur.plan.tour.size();
        for (std::size_t i : shuffled(n)) {
            for (std::size_t j = i + 1; j < n; ++j) {
                RoutePlan p = cur.plan;
                std::reverse(p.tour.begin() + static_cast<std::ptrdiff_t>(i),
                             p.tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                if (accept(cur, std::move(p), i)) return true;
            }
        }
        return false;
    }

    const Instance& instance_;
    const SearchParams& params_;
    std::mt19937_64& rng_;
    Clock::time_point deadline_;
    std::uint64_t moves_ = 0;
};

struct RestartResult {
    Evaluated best;
    std::uint64_t moves = 0;
};

RestartResult run_restart(const Instance& instance, const SearchParams& params, const Evaluated& start,
                          unsigned restart, Clock::time_point deadline) {
    std::mt19937_64 rng(restart_seed(params.seed, restart));
    LocalSearch search(instance, params, rng, deadline);
    Evaluated cur = start;
    const unsigned base_run = restart * (params.kicks + 1);
    if (restart > 0) search.kick(cur);
    search.descend(cur, base_run);
    Evaluated best = cur;
    for (unsigned k = 0; k < params.kicks && search.moves() < params.max_iterations && Clock::now() <= deadline; ++k) {
        cur = best;
        search.kick(cur);
        search.descend(cur, base_run + 1 + k);
        if (cur.schedule.objective < best.schedule.objective - kMinGain) best = cur;
    }
    return {std::move(best), search.moves()};
}

}  // namespace

std::uint64_t restart_seed(std::uint64_t base, unsigned restart) {
    if (restart == 0) return base;
    std::mt19937_64 gen(base);
    gen.discard(restart - 1);
    return gen();
}

RoutePlan construct(const Instance& instance, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RoutePlan plan;
    plan.tour = nearest_neighbour_tour(instance);

    std::vector<CustomerId> order(static_cast<std::size_t>(instance.customer_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](CustomerId a, CustomerId b) {
        const auto& ca = instance.customer(a);
        const auto& cb = instance.customer(b);
        return ca.deadline / ca.importance < cb.deadline / cb.importance;
    });

    std::vector<char> served(static_cast<std::size_t>(instance.customer_count()), 0);
    std::vector<double> complete(static_cast<std::size_t>(instance.customer_count()), 0.0);
    for (CustomerId o : order) {
        served[static_cast<std::size_t>(o)] = 1;
        std::vector<RoutePlan> ties;
        double best = std::numeric_limits<double>::infinity();
        auto consider = [&](RoutePlan&& p) {
            const double value = partial_objective(instance, p, complete, served);
            if (value < best - kMinGain) {
                best = value;
                ties.clear();
                ties.push_back(std::move(p));
            } else if (value <= best + kMinGain) {
                ties.push_back(std::move(p));
            }
        };
        for (StationId k : instance.reachable_stations(o)) {
            for (std::size_t si = 0; si < plan.sorties.size(); ++si) {
                if (plan.sorties[si].station != k) continue;
                for (std::size_t at = 0; at <= plan.sorties[si].services.size(); ++at) {
                    RoutePlan p = plan;
                    auto& services = p.sorties[si].services;
                    services.insert(services.begin() + static_cast<std::ptrdiff_t>(at), o);
                    if (fits(instance, p.sorties[si])) consider(std::move(p));
                }
            }
            if (const auto r = free_robot(instance, plan, k)) {
                RoutePlan p = plan;
                p.sorties.push_back({*r, k, {o}});
                consider(std::move(p));
            }
        }
        if (ties.empty()) {
            spdlog::debug("construct: greedy insertion stuck at customer {}, packing instead", o);
            if (auto packed = pack(instance, plan.tour)) return *packed;
            throw InfeasibleError("no range-feasible assignment found for customer " + std::to_string(o));
        }
        std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
        plan = std::move(ties[ties.size() == 1 ? 0 : pick(rng)]);
    }
    return canonical(std::move(plan));
}

SolveReport improve(const Instance& instance, const RoutePlan& plan, const SearchParams& params) {
    if (params.max_iterations == 0 || !(params.max_seconds > 0) || params.restarts == 0) {
        throw std::invalid_argument("search caps must be positive");
    }
    if (const auto problems = validate(instance, plan); !problems.empty()) {
        throw std::invalid_argument("improve() needs a feasible plan: " + to_string(problems.front().kind) + ' ' +
                                    problems.front().detail);
    }
    const auto start = Clock::now();
    const auto deadline = std::isinf(params.max_seconds)
                              ? Clock::time_point::max()
                              : start + std::chrono::duration_cast<Clock::duration>(
                                            std::chrono::duration<double>(params.max_seconds));

    Evaluated input{plan, propagate(instance, plan)};
    // Restart 0 descends from the input; the others perturb its result and
    // are independent of each other.
    RestartResult first = run_restart(instance, params, input, 0, deadline);
    std::vector<RestartResult> results(params.restarts);
    results[0] = std::move(first);
    const Evaluated& anchor = results[0].best;

    const unsigned threads = std::max(1u, params.threads);
    if (threads == 1) {
        for (unsigned r = 1; r < params.restarts; ++r) results[r] = run_restart(instance, params, anchor, r, deadline);
    } else {
        std::atomic<unsigned> next{1};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (unsigned r = next.fetch_add(1); r < params.restarts; r = next.fetch_add(1)) {
                    results[r] = run_restart(instance, params, anchor, r, deadline);
                }
            });
        }
    }

    std::size_t winner = 0;
    std::uint64_t moves = 0;
    for (std::size_t r = 0; r < results.size(); ++r) {
        moves += results[r].moves;
        if (results[r].best.schedule.objective < results[winner].best.schedule.objective - kMinGain) winner = r;
    }
    Evaluated best = std::move(results[winner].best);
    if (best.schedule.objective > input.schedule.objective) best = std::move(input);

    SolveReport report;
    report.method = "heuristic";
    report.plan = canonical(std::move(best.plan));
    report.schedule = propagate(instance, report.plan);
    report.objective = report.schedule.objective;
    report.status = ProofStatus::Heuristic;
    report.lower_bound = 0.0;
    report.nodes = moves;
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    spdlog::debug("heuristic: objective {:.6f} after {} moves over {} restarts", report.objective, moves,
                  params.restarts);
    return report;
}

SolveReport solve_heuristic(const Instance& instance, const SearchParams& params) {
    return improve(instance, construct(instance, params.seed), params);
}

}  // namespace mothership
