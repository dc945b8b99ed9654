#pragma once

#include <cstdint>

#include "mothership/model.hpp"

namespace mothership {

struct GeneratorParams {
    std::uint64_t seed = 1;
    int stations = 2;
    int robots = 2;
    int customers = 8;
    double width = 100.0;
    double height = 100.0;
    double robot_range = 80.0;
    double vehicle_speed = 20.0;
    double robot_speed = 2.0;
    /// Location draws allowed per customer before generation gives up.
    int max_resamples = 1000;
};

/// Random instance on the region [0, width] x [0, height] with the depot at
/// the origin.
///
/// Stations: (w/4, h/4), (3w/4, h/4) for two; those plus (3w/4, 3h/4),
/// (w/4, 3h/4) for four; otherwise the cell centres of a row-major grid with
/// ceil(sqrt(n_s)) columns. Customers are drawn in id order, each as
/// x, y, importance, deadline from std::mt19937_64(seed), one 64-bit output
/// per value mapped to [0, 1) by its top 53 bits. A location no station can
/// reach is redrawn (x, y only); importance 0 is redrawn.
///
/// Throws std::invalid_argument for bad counts or region and InstanceError
/// when a customer stays unreachable after max_resamples draws.
Instance generate(const GeneratorParams& params);

}  // namespace mothership
