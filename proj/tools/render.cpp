#include "render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <tuple>

namespace mothership::cli {

namespace {

struct Entry {
    std::string name;
    std::string value;
};

std::string join(std::initializer_list<int> idx) {
    std::string s;
    for (int i : idx) s += (s.empty() ? "" : ",") + std::to_string(i);
    return s;
}

// Nonzero binaries in y, x, z, w order, each group sorted by index.
std::vector<std::string> binaries(const RoutePlan& plan) {
    using Key = std::tuple<int, int, int, int, int>;
    std::vector<Key> keys;
    StationId prev = 0;
    for (StationId k : plan.tour) {
        keys.emplace_back(0, prev, k, 0, 0);
        prev = k;
    }
    if (!plan.tour.empty()) keys.emplace_back(0, prev, 0, 0, 0);
    for (const auto& s : plan.sorties) {
        if (s.services.empty()) continue;
        keys.emplace_back(1, s.robot, s.station, s.services.front(), 0);
        keys.emplace_back(2, s.robot, s.services.back(), s.station, 0);
        for (std::size_t i = 1; i < s.services.size(); ++i) {
            keys.emplace_back(3, s.robot, s.station, s.services[i - 1], s.services[i]);
        }
    }
    std::sort(keys.begin(), keys.end());
    std::vector<std::string> out;
    for (const auto& [g, a, b, c, d] : keys) {
        switch (g) {
            case 0: out.push_back("y_{" + join({a, b}) + "}"); break;
            case 1: out.push_back("x_{" + join({a, b, c}) + "}"); break;
            case 2: out.push_back("z_{" + join({a, b, c}) + "}"); break;
            default: out.push_back("w_{" + join({a, b, c, d}) + "}"); break;
        }
    }
    return out;
}

std::vector<std::pair<std::string, double>> times(const Instance& instance, const Schedule& schedule, bool all) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& st : instance.stations()) {
        out.emplace_back("t_" + std::to_string(st.id) + "^arrive", schedule.arrive[static_cast<std::size_t>(st.id)]);
    }
    for (const auto& st : instance.stations()) {
        out.emplace_back("t_" + std::to_string(st.id) + "^depart", schedule.depart[static_cast<std::size_t>(st.id)]);
    }
    for (const auto& c : instance.customers()) {
        const auto o = static_cast<std::size_t>(c.id);
        out.emplace_back("t_" + std::to_string(c.id) + "^complete", schedule.complete[o]);
        if (all || schedule.tardiness[o] > 0) out.emplace_back("t_" + std::to_string(c.id) + "^tardiness", schedule.tardiness[o]);
    }
    return out;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string fixed(double value, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << value;
    return os.str();
}

std::string exact(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string schedule_table(const Instance& instance, const RoutePlan& plan, const Schedule& schedule) {
    std::vector<Entry> left;
    for (auto& name : binaries(plan)) left.push_back({std::move(name), "1"});
    std::vector<Entry> right;
    for (const auto& [name, value] : times(instance, schedule, false)) right.push_back({name, fixed(value, 2)});

    const std::size_t rows = std::max(left.size(), right.size());
    left.resize(rows);
    right.resize(rows);
    left.push_back({"Objective", fixed(schedule.objective, 4)});
    right.push_back({});

    std::size_t w[4] = {8, 8, 8, 8};
    for (std::size_t i = 0; i < left.size(); ++i) {
        w[0] = std::max(w[0], left[i].name.size());
        w[1] = std::max(w[1], left[i].value.size());
        w[2] = std::max(w[2], right[i].name.size());
        w[3] = std::max(w[3], right[i].value.size());
    }
    std::ostringstream os;
    auto line = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
        std::string s = pad(a, w[0]) + "  " + pad(b, w[1]) + "  " + pad(c, w[2]) + "  " + d;
        while (!s.empty() && s.back() == ' ') s.pop_back();
        os << s << "\n";
    };
    line("Variable", "Solution", "Variable", "Solution");
    line(std::string(w[0], '-'), std::string(w[1], '-'), std::string(w[2], '-'), std::string(w[3], '-'));
    for (std::size_t i = 0; i < left.size(); ++i) line(left[i].name, left[i].value, right[i].name, right[i].value);
    return os.str();
}

std::string schedule_csv(const Instance& instance, const RoutePlan& plan, const Schedule& schedule) {
    std::ostringstream os;
    os << "variable,value\n";
    for (const auto& name : binaries(plan)) os << '"' << name << "\",1\n";
    for (const auto& [name, value] : times(instance, schedule, true)) os << name << ',' << exact(value) << "\n";
    os << "return_time," << exact(schedule.return_time) << "\n";
    os << "objective," << exact(schedule.objective) << "\n";
    return os.str();
}

std::string plot_svg(const Instance& instance, const RoutePlan& plan) {
    constexpr double kSize = 640.0;
    constexpr double kMargin = 40.0;
    static const char* const kColours[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    static const char* const kDashes[] = {"6,4", "2,3", "10,3,2,3", "8,8", "1,4", "12,4"};

    double min_x = instance.depot().x, max_x = min_x;
    double min_y = instance.depot().y, max_y = min_y;
    auto extend = [&](const Point& p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    };
    for (const auto& s : instance.stations()) extend(s.location);
    for (const auto& c : instance.customers()) extend(c.location);
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double scale = (kSize - 2 * kMargin) / span;
    auto sx = [&](double x) { return fixed(kMargin + (x - min_x) * scale, 2); };
    auto sy = [&](double y) { return fixed(kSize - kMargin - (y - min_y) * scale, 2); };
    auto at = [&](const Point& p) { return sx(p.x) + "," + sy(p.y); };
    auto station_at = [&](StationId k) { return k == 0 ? instance.depot() : instance.station(k).location; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize << "\" height=\"" << kSize
       << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";

    os << "<g id=\"vehicle\" stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n";
    StationId prev = 0;
    auto leg = [&](StationId a, StationId b) {
        os << "<polyline class=\"vehicle-leg\" points=\"" << at(station_at(a)) << ' ' << at(station_at(b)) << "\"/>\n";
    };
    for (StationId k : plan.tour) {
        leg(prev, k);
        prev = k;
    }
    if (!plan.tour.empty()) leg(prev, 0);
    os << "</g>\n";

    os << "<g id=\"robots\" stroke-width=\"1.2\" fill=\"none\">\n";
    for (const auto& s : plan.sorties) {
        const auto style = static_cast<std::size_t>(s.robot) % std::size(kColours);
        const Point base = station_at(s.station);
        for (CustomerId o : s.services) {
            os << "<polyline class=\"robot-leg\" data-robot=\"" << s.robot << "\" stroke=\"" << kColours[style]
               << "\" stroke-dasharray=\"" << kDashes[style] << "\" points=\"" << at(base) << ' '
               << at(instance.customer(o).location) << ' ' << at(base) << "\"/>\n";
        }
    }
    os << "</g>\n";

    os << "<g id=\"nodes\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const Point depot = instance.depot();
    os << "<rect x=\"" << fixed(kMargin + (depot.x - min_x) * scale - 7, 2) << "\" y=\""
       << fixed(kSize - kMargin - (depot.y - min_y) * scale - 7, 2)
       << "\" width=\"14\" height=\"14\" fill=\"black\"/>\n";
    os << "<text x=\"" << sx(depot.x) << "\" y=\"" << sy(depot.y) << "\" dx=\"9\" dy=\"14\">Depot</text>\n";
    for (const auto& s : instance.stations()) {
        os << "<circle cx=\"" << sx(s.location.x) << "\" cy=\"" << sy(s.location.y)
           << "\" r=\"8\" fill=\"#cccccc\" stroke=\"black\"/>\n";
        os << "<text x=\"" << sx(s.location.x) << "\" y=\"" << sy(s.location.y) << "\" dx=\"10\" dy=\"-8\">S"
           << s.id << "</text>\n";
    }
    for (const auto& c : instance.customers()) {
        std::string points;
        for (int i = 0; i < 5; ++i) {
            const double a = -M_PI / 2 + 2 * M_PI * i / 5;
            const double px = kMargin + (c.location.x - min_x) * scale + 7 * std::cos(a);
            const double py = kSize - kMargin - (c.location.y - min_y) * scale + 7 * std::sin(a);
            points += (i ? " " : "") + fixed(px, 2) + "," + fixed(py, 2);
        }
        os << "<polygon points=\"" << points << "\" fill=\"white\" stroke=\"black\"/>\n";
        os << "<text x=\"" << sx(c.location.x) << "\" y=\"" << sy(c.location.y) << "\" dx=\"8\" dy=\"4\">C" << c.id
           << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace mothership::cli
