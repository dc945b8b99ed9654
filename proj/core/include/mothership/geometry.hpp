#pragma once

#include <cstddef>
#include <vector>

namespace mothership {

/// Planar location in length units (miles in the reference instances).
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Euclidean distance.
double distance(const Point& a, const Point& b);

/// Dense symmetric distance matrix over depot, stations and customers.
///
/// Node numbering: 0 is the depot, 1..n_s are stations (same as station ids),
/// n_s+1+o is customer o.
class DistanceTable {
public:
    DistanceTable() = default;
    DistanceTable(const Point& depot, const std::vector<Point>& stations,
                  const std::vector<Point>& customers);

    std::size_t station_count() const { return n_stations_; }
    std::size_t customer_count() const { return n_customers_; }

    /// L_kl between depot/stations; pass 0 for the depot.
    double vehicle(int from, int to) const { return at(from, to); }
    /// L_ko between station k (1-based) and customer o (0-based).
    double station_customer(int k, int o) const {
        return at(k, static_cast<int>(n_stations_) + 1 + o);
    }
    /// L_op between customers.
    double customer_customer(int o, int p) const {
        const int base = static_cast<int>(n_stations_) + 1;
        return at(base + o, base + p);
    }

    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_nodes_ + static_cast<std::size_t>(j)]; }
    std::size_t node_count() const { return n_nodes_; }

private:
    std::size_t n_stations_ = 0;
    std::size_t n_customers_ = 0;
    std::size_t n_nodes_ = 0;
    std::vector<double> data_;
};

}  // namespace mothership
