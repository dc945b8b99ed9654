#pragma once

// Shared arithmetic for the out-and-back service chain of one sortie. Both
// propagate() and the branch-and-bound bound go through here so that a fully
// assigned search node evaluates bit-identically to the propagated schedule.

#include <span>

#include "mothership/model.hpp"

namespace mothership::detail {

/// Writes completion times of `services` (dispatched at `arrive` from
/// `station`) into `complete[o]` and returns the robot's return time.
inline double run_chain(const Instance& instance, StationId station, std::span<const CustomerId> services,
                        double arrive, std::span<double> complete) {
    const auto& dist = instance.distances();
    const double speed = instance.robot_speed();
    double t = arrive;
    double back = 0.0;  // L_{prev,k} of the previous service
    bool first = true;
    for (CustomerId o : services) {
        const double out = dist.station_customer(station, o);
        t = first ? t + out / speed : t + (back + out) / speed;
        complete[static_cast<std::size_t>(o)] = t;
        back = out;
        first = false;
    }
    return first ? arrive : t + back / speed;
}

inline double tardiness(double complete, double deadline) {
    return complete > deadline ? complete - deadline : 0.0;
}

}  // namespace mothership::detail
