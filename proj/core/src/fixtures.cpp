#include "mothership/fixtures.hpp"

#include <stdexcept>

namespace mothership {

namespace {

// Plans are rebuilt from the nonzero x/w/z/y variables of the published
// solutions, not from the per-robot route listings (those mislabel robots
// and stations in a few rows).

Fixture small_fixture() {
    InstanceData data;
    data.depot = {0, 0};
    data.stations = {{1, {25, 25}}, {2, {75, 25}}};
    data.customers = {
        {0, {19, 39}, 0.36, 18}, {1, {86, 17}, 0.06, 40}, {2, {87, 1}, 0.55, 21},
        {3, {0, 46}, 0.83, 23},  {4, {70, 58}, 0.87, 10}, {5, {25, 69}, 0.51, 22},
        {6, {80, 90}, 0.95, 16}, {7, {62, 83}, 0.31, 49},
    };
    data.fleet_size = 2;
    data.robot_range = 200;
    data.vehicle_speed = 50;
    data.robot_speed = 5;

    RoutePlan plan;
    plan.tour = {2, 1};
    plan.sorties = {
        {0, 1, {3, 5}},
        {1, 1, {0, 7}},
        {0, 2, {4, 2, 1}},
        {1, 2, {6}},
    };
    return {Instance(std::move(data)), std::move(plan), {36.52, 35.52},
            {
                "published objective is 36.52 in the solution table and 35.52 in the running text; "
                "recomputation of the published plan gives 36.3712",
                "the solution table lists t_1^depart twice (65.72 and 35.15); 35.15 is t_0^complete",
            }};
}

Fixture medium_fixture() {
    InstanceData data;
    data.depot = {0, 0};
    data.stations = {{1, {25, 25}}, {2, {75, 25}}, {3, {75, 75}}, {4, {25, 75}}};
    data.customers = {
        {0, {48, 71}, 0.55, 37},  {1, {75, 61}, 0.20, 45},  {2, {1, 98}, 0.63, 19},
        {3, {60, 35}, 0.47, 13},  {4, {17, 58}, 0.01, 36},  {5, {74, 58}, 0.53, 38},
        {6, {80, 90}, 0.96, 39},  {7, {99, 79}, 0.50, 37},  {8, {43, 45}, 0.78, 47},
        {9, {39, 37}, 0.34, 34},  {10, {55, 23}, 0.87, 47}, {11, {56, 31}, 0.42, 11},
    };
    data.fleet_size = 4;
    data.robot_range = 80;
    data.vehicle_speed = 50;
    data.robot_speed = 5;

    RoutePlan plan;
    plan.tour = {2, 4, 1, 3};
    plan.sorties = {
        {0, 2, {10}},   // z_{0,10,12} read as z_{0,10,2}
        {1, 2, {3}},
        {3, 2, {11}},
        {0, 4, {6, 0}},
        {1, 4, {4}},
        {2, 4, {2}},
        {3, 4, {8}},
        {3, 1, {9}},    // x_{1,3,9} read as x_{3,1,9}
        {1, 3, {1}},
        {2, 3, {7}},
        {3, 3, {5}},
    };
    return {Instance(std::move(data)), std::move(plan), {1.47},
            {
                "sortie (r0,S4,[C6,C0]) travels 160.71 > range 80, so the published plan is range-infeasible",
                "published times for C6, C0 and station 4's departure do not follow from serving C6 and C0 "
                "from station 4; recomputed times from station 4 onward differ",
                "z_{0,10,12} names a nonexistent station and is read as z_{0,10,2}",
                "x_{1,3,9} conflicts with z_{3,9,1} and is read as x_{3,1,9}",
            }};
}

}  // namespace

Fixture builtin_fixture(std::string_view name) {
    if (name == "small") return small_fixture();
    if (name == "medium") return medium_fixture();
    throw std::invalid_argument("unknown fixture '" + std::string(name) + "' (expected small or medium)");
}

std::vector<std::string> fixture_names() { return {"small", "medium"}; }

}  // namespace mothership
