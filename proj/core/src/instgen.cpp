#include "mothership/instgen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mothership {

namespace {

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : engine_(seed) {}

    // [0, 1) with 53 random bits.
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

std::vector<Station> place_stations(int n, double w, double h) {
    std::vector<Station> out;
    if (n == 2 || n == 4) {
        const Point layout[4] = {{w / 4, h / 4}, {3 * w / 4, h / 4}, {3 * w / 4, 3 * h / 4}, {w / 4, 3 * h / 4}};
        for (int k = 0; k < n; ++k) out.push_back({k + 1, layout[k]});
        return out;
    }
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    for (int k = 0; k < n; ++k) {
        const int r = k / cols;
        const int c = k % cols;
        out.push_back({k + 1, {(c + 0.5) * w / cols, (r + 0.5) * h / rows}});
    }
    return out;
}

}  // namespace

Instance generate(const GeneratorParams& p) {
    if (p.stations < 1 || p.robots < 1 || p.customers < 1) {
        throw std::invalid_argument("station, robot and customer counts must be at least 1");
    }
    if (!(p.width > 0) || !(p.height > 0) || !std::isfinite(p.width) || !std::isfinite(p.height)) {
        throw std::invalid_argument("region width and height must be positive");
    }
    if (p.max_resamples < 1) throw std::invalid_argument("max_resamples must be at least 1");

    InstanceData data;
    data.depot = {0.0, 0.0};
    data.stations = place_stations(p.stations, p.width, p.height);
    data.fleet_size = p.robots;
    data.robot_range = p.robot_range;
    data.vehicle_speed = p.vehicle_speed;
    data.robot_speed = p.robot_speed;

    auto reachable = [&](const Point& at) {
        for (const auto& s : data.stations) {
            if (2 * distance(s.location, at) <= p.robot_range) return true;
        }
        return false;
    };

    Uniform u(p.seed);
    for (int o = 0; o < p.customers; ++o) {
        Customer c;
        c.id = o;
        int draws = 0;
        do {
            if (draws++ == p.max_resamples) {
                throw InstanceError("customer " + std::to_string(o) + " unreachable after " +
                                    std::to_string(p.max_resamples) + " location draws");
            }
            c.location.x = u.next() * p.width;
            c.location.y = u.next() * p.height;
        } while (!reachable(c.location));
        do {
            c.importance = u.next();
        } while (c.importance == 0.0);
        c.deadline = 10.0 + 40.0 * u.next();
        data.customers.push_back(c);
    }
    return Instance(std::move(data));
}

}  // namespace mothership
