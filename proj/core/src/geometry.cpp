#include "mothership/geometry.hpp"

#include <cmath>

namespace mothership {

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

DistanceTable::DistanceTable(const Point& depot, const std::vector<Point>& stations,
                             const std::vector<Point>& customers)
    : n_stations_(stations.size()),
      n_customers_(customers.size()),
      n_nodes_(1 + stations.size() + customers.size()),
      data_(n_nodes_ * n_nodes_, 0.0) {
    std::vector<Point> nodes;
    nodes.reserve(n_nodes_);
    nodes.push_back(depot);
    nodes.insert(nodes.end(), stations.begin(), stations.end());
    nodes.insert(nodes.end(), customers.begin(), customers.end());
    for (std::size_t i = 0; i < n_nodes_; ++i) {
        for (std::size_t j = i + 1; j < n_nodes_; ++j) {
            const double d = distance(nodes[i], nodes[j]);
            data_[i * n_nodes_ + j] = d;
            data_[j * n_nodes_ + i] = d;
        }
    }
}

}  // namespace mothership
