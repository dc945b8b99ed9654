#include "mothership/mipexport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "mothership/eval.hpp"
#include "mothership/exact.hpp"

namespace mothership {

namespace {

constexpr std::size_t kLineWidth = 100;
constexpr double kIntegrality = 1e-6;
constexpr double kTimeTolerance = 1e-4;

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string y(int k, int l) { return var_name({VarKind::Y, {k, l}}); }
std::string x(int r, int k, int o) { return var_name({VarKind::X, {r, k, o}}); }
std::string z(int r, int o, int k) { return var_name({VarKind::Z, {r, o, k}}); }
std::string w(int r, int k, int o, int p) { return var_name({VarKind::W, {r, k, o, p}}); }
std::string ta(int k) { return var_name({VarKind::Arrive, {k}}); }
std::string td(int k) { return var_name({VarKind::Depart, {k}}); }
std::string tc(int o) { return var_name({VarKind::Complete, {o}}); }
std::string tt(int o) { return var_name({VarKind::Tardiness, {o}}); }

// One row of an LP file: linear terms, an optional bracketed quadratic
// group, sense and right-hand side. Long rows wrap onto indented lines.
class Row {
public:
    explicit Row(std::string name) : name_(std::move(name)) {}

    Row& add(double coef, const std::string& var) {
        linear_.emplace_back(coef, var);
        return *this;
    }
    Row& add_product(double coef, const std::string& a, const std::string& b) {
        quadratic_.push_back({coef, a, b});
        return *this;
    }

    std::string str(std::string_view sense, double rhs) const {
        std::vector<std::string> tokens = terms();
        tokens.push_back(std::string(sense) + ' ' + num(rhs));
        return wrap(tokens);
    }

    std::string objective() const { return wrap(terms()); }

    void set_placeholder(std::string var) { placeholder_ = std::move(var); }

private:
    std::vector<std::string> terms() const {
        std::vector<std::string> tokens;
        for (const auto& [coef, var] : linear_) tokens.push_back(term(coef, var, tokens.empty()));
        if (!quadratic_.empty()) {
            tokens.push_back(tokens.empty() ? "[" : "+ [");
            bool first = true;
            for (const auto& q : quadratic_) {
                tokens.push_back(term(q.coef, q.a + " * " + q.b, first));
                first = false;
            }
            tokens.push_back("]");
        }
        if (tokens.empty()) tokens.push_back("0 " + placeholder_);
        return tokens;
    }

    std::string wrap(const std::vector<std::string>& tokens) const {
        std::string out = " " + name_ + ":";
        std::size_t width = out.size();
        for (const auto& tok : tokens) {
            if (width + 1 + tok.size() > kLineWidth) {
                out += "\n   ";
                width = 3;
            }
            out += ' ' + tok;
            width += 1 + tok.size();
        }
        return out + "\n";
    }

    static std::string term(double coef, const std::string& what, bool first) {
        std::string sign = coef < 0 ? "- " : (first ? "" : "+ ");
        const double mag = std::fabs(coef);
        return sign + (mag == 1.0 ? "" : num(mag) + " ") + what;
    }

    struct Product {
        double coef;
        std::string a;
        std::string b;
    };

    std::string name_;
    std::vector<std::pair<double, std::string>> linear_;
    std::vector<Product> quadratic_;
    std::string placeholder_;
};

struct Counts {
    std::size_t binaries = 0;
    std::size_t continuous = 0;
    std::size_t rows = 0;
};

class Exporter {
public:
    Exporter(const Instance& instance, const ExportOptions& options, bool big_m)
        : inst_(instance),
          dist_(instance.distances()),
          n_s_(instance.station_count()),
          n_r_(instance.fleet_size()),
          n_c_(instance.customer_count()),
          vehicle_speed_(options.robot_speed_legs ? instance.robot_speed() : instance.vehicle_speed()),
          options_(options),
          big_m_(big_m),
          m_(horizon(instance)) {}

    std::string run() {
        std::ostringstream body;
        body << "Minimize\n";
        Row obj("obj");
        for (const auto& c : inst_.customers()) obj.add(c.importance, tt(c.id));
        obj.set_placeholder(y(0, 1));
        body << obj.objective();

        body << "Subject To\n";
        depot(body);
        stations(body);
        robots(body);
        customers(body);
        times(body);

        body << "Bounds\n";
        for (int k = 1; k <= n_s_; ++k) body << " " << ta(k) << " >= 0\n " << td(k) << " >= 0\n";
        for (int o = 0; o < n_c_; ++o) body << " " << tc(o) << " >= 0\n " << tt(o) << " >= 0\n";
        counts_.continuous = static_cast<std::size_t>(2 * n_s_ + 2 * n_c_);

        body << "Binaries\n";
        std::vector<std::string> binaries = binary_names();
        counts_.binaries = binaries.size();
        std::string line;
        for (const auto& b : binaries) {
            if (line.size() + b.size() + 1 > kLineWidth) {
                body << line << "\n";
                line.clear();
            }
            line += ' ' + b;
        }
        if (!line.empty()) body << line << "\n";
        body << "End\n";

        return header() + body.str();
    }

private:
    std::string header() const {
        std::ostringstream h;
        h << "\\ Vehicle-robot pickup and delivery routing, minimum total weighted tardiness\n";
        h << "\\ form: " << (big_m_ ? "big-M linearized MILP" : "MIQCP (bilinear binary x continuous)") << "\n";
        h << "\\ stations " << n_s_ << ", robots " << n_r_ << ", customers " << n_c_ << ", range " << num(inst_.robot_range())
          << ", vehicle speed " << num(inst_.vehicle_speed()) << ", robot speed " << num(inst_.robot_speed()) << "\n";
        if (options_.robot_speed_legs) {
            h << "\\ literal mode: vehicle legs in (13) divided by the robot speed " << num(inst_.robot_speed()) << "\n";
        }
        h << "\\ variables: " << counts_.binaries << " binary (y, x, z, w), " << counts_.continuous
          << " continuous (ta, td, tc, tt); constraints: " << counts_.rows << "\n";
        if (big_m_) {
            h << "\\ M = " << num(m_)
              << " = longest depot-to-depot vehicle tour time + sum over customers of 2 * max_k L_ko / VR\n";
        }
        h << "\\ customer-customer distances L_op (no constraint uses them):\n";
        for (int o = 0; o < n_c_; ++o) {
            std::string line = "\\   L_" + std::to_string(o) + "_*:";
            for (int p = 0; p < n_c_; ++p) line += ' ' + num(dist_.customer_customer(o, p));
            h << line << "\n";
        }
        return h.str();
    }

    void emit(std::ostringstream& out, const std::string& tag, const Row& row, std::string_view sense, double rhs) {
        out << "\\ " << tag << "\n" << row.str(sense, rhs);
        ++counts_.rows;
    }

    void depot(std::ostringstream& out) {
        Row leave("c1");
        Row back("c2");
        for (int k = 1; k <= n_s_; ++k) {
            leave.add(1, y(0, k));
            back.add(1, y(k, 0));
        }
        emit(out, "(1) vehicle leaves the depot once", leave, "=", 1);
        emit(out, "(2) vehicle returns to the depot once", back, "=", 1);
    }

    void stations(std::ostringstream& out) {
        for (int k = 1; k <= n_s_; ++k) {
            Row in("c3_" + std::to_string(k));
            for (int i = 0; i <= n_s_; ++i) {
                if (i != k) in.add(1, y(i, k));
            }
            emit(out, "(3) station " + std::to_string(k) + " entered once", in, "=", 1);
        }
        for (int k = 1; k <= n_s_; ++k) {
            Row leave("c4_" + std::to_string(k));
            for (int i = 0; i <= n_s_; ++i) {
                if (i != k) leave.add(1, y(k, i));
            }
            emit(out, "(4) station " + std::to_string(k) + " left once", leave, "=", 1);
        }
        for (int k = 1; k <= n_s_; ++k) {
            for (int r = 0; r < n_r_; ++r) {
                const std::string at = std::to_string(r) + "_" + std::to_string(k);
                Row dispatch("c5_" + at);
                Row collect("c6_" + at);
                Row balance("c7_" + at);
                for (int o = 0; o < n_c_; ++o) {
                    dispatch.add(1, x(r, k, o));
                    collect.add(1, z(r, o, k));
                    balance.add(1, x(r, k, o)).add(-1, z(r, o, k));
                }
                if (n_c_ == 0) continue;
                emit(out, "(5) robot " + std::to_string(r) + " dispatched at most once at station " + std::to_string(k),
                     dispatch, "<=", 1);
                emit(out, "(6) robot " + std::to_string(r) + " collected at most once at station " + std::to_string(k),
                     collect, "<=", 1);
                emit(out, "(7) dispatch/collect balance", balance, "=", 0);
            }
        }
        for (int k = 1; k <= n_s_; ++k) {
            for (int r = 0; r < n_r_; ++r) {
                for (int o = 0; o < n_c_; ++o) {
                    Row flow("c8_" + std::to_string(r) + "_" + std::to_string(k) + "_" + std::to_string(o));
                    flow.add(1, x(r, k, o));
                    for (int p = 0; p < n_c_; ++p) flow.add(1, w(r, k, p, o));
                    flow.add(-1, z(r, o, k));
                    for (int p = 0; p < n_c_; ++p) flow.add(-1, w(r, k, o, p));
                    emit(out, "(8) route continuity", flow, "=", 0);
                }
            }
        }
    }

    void robots(std::ostringstream& out) {
        if (n_c_ == 0) return;
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                Row range("c9_" + std::to_string(r) + "_" + std::to_string(k));
                for (int o = 0; o < n_c_; ++o) range.add(dist_.station_customer(k, o), x(r, k, o));
                for (int o = 0; o < n_c_; ++o) {
                    for (int p = 0; p < n_c_; ++p) {
                        range.add(dist_.station_customer(k, o) + dist_.station_customer(k, p), w(r, k, o, p));
                    }
                }
                for (int o = 0; o < n_c_; ++o) range.add(dist_.station_customer(k, o), z(r, o, k));
                emit(out, "(9) robot range", range, "<=", inst_.robot_range());
            }
        }
    }

    void customers(std::ostringstream& out) {
        for (int p = 0; p < n_c_; ++p) {
            Row in("c10_" + std::to_string(p));
            for (int r = 0; r < n_r_; ++r) {
                for (int k = 1; k <= n_s_; ++k) in.add(1, x(r, k, p));
            }
            for (int r = 0; r < n_r_; ++r) {
                for (int k = 1; k <= n_s_; ++k) {
                    for (int o = 0; o < n_c_; ++o) in.add(1, w(r, k, o, p));
                }
            }
            emit(out, "(10) customer " + std::to_string(p) + " entered once", in, "=", 1);
        }
        for (int o = 0; o < n_c_; ++o) {
            Row leave("c11_" + std::to_string(o));
            for (int r = 0; r < n_r_; ++r) {
                for (int k = 1; k <= n_s_; ++k) leave.add(1, z(r, o, k));
            }
            for (int r = 0; r < n_r_; ++r) {
                for (int k = 1; k <= n_s_; ++k) {
                    for (int p = 0; p < n_c_; ++p) leave.add(1, w(r, k, o, p));
                }
            }
            emit(out, "(11) customer " + std::to_string(o) + " left once", leave, "=", 1);
        }
    }

    double leg(int i, int k) const { return dist_.vehicle(i, k) / vehicle_speed_; }
    double robot(int k, int o) const { return dist_.station_customer(k, o) / inst_.robot_speed(); }

    void times(std::ostringstream& out) {
        out << "\\ (12) depot departure time t_0^depart = 0, substituted into (13)\n";
        for (int k = 1; k <= n_s_; ++k) {
            if (!big_m_) {
                Row arrive("c13_" + std::to_string(k));
                arrive.add(1, ta(k));
                for (int i = 0; i <= n_s_; ++i) {
                    if (i != k) arrive.add(-leg(i, k), y(i, k));
                }
                for (int i = 1; i <= n_s_; ++i) {
                    if (i != k) arrive.add_product(-1, y(i, k), td(i));
                }
                emit(out, "(13) vehicle arrival at station " + std::to_string(k), arrive, "=", 0);
                continue;
            }
            for (int i = 0; i <= n_s_; ++i) {
                if (i == k) continue;
                const std::string at = std::to_string(k) + "_" + std::to_string(i);
                Row upper("c13a_" + at);
                Row lower("c13b_" + at);
                upper.add(1, ta(k));
                lower.add(1, ta(k));
                if (i != 0) {
                    upper.add(-1, td(i));
                    lower.add(-1, td(i));
                }
                upper.add(m_, y(i, k));
                lower.add(-m_, y(i, k));
                const std::string tag = "(13) arrival at " + std::to_string(k) + " via " + std::to_string(i);
                emit(out, tag + ", upper", upper, "<=", m_ + leg(i, k));
                emit(out, tag + ", lower", lower, ">=", -m_ + leg(i, k));
            }
        }
        for (int k = 1; k <= n_s_; ++k) {
            Row order("c14_" + std::to_string(k));
            order.add(1, ta(k)).add(-1, td(k));
            emit(out, "(14) arrival before departure at station " + std::to_string(k), order, "<=", 0);
        }
        for (int p = 0; p < n_c_; ++p) big_m_ ? completion_big_m(out, p) : completion(out, p);
        for (int k = 1; k <= n_s_; ++k) {
            for (int r = 0; r < n_r_; ++r) {
                for (int o = 0; o < n_c_; ++o) {
                    Row wait("c16_" + std::to_string(k) + "_" + std::to_string(r) + "_" + std::to_string(o));
                    wait.add(1, td(k));
                    const std::string tag = "(16) vehicle waits for robot " + std::to_string(r) + " at station " +
                                            std::to_string(k) + " after customer " + std::to_string(o);
                    if (big_m_) {
                        wait.add(-1, tc(o)).add(-m_, z(r, o, k));
                        emit(out, tag, wait, ">=", robot(k, o) - m_);
                    } else {
                        wait.add(-robot(k, o), z(r, o, k)).add_product(-1, z(r, o, k), tc(o));
                        emit(out, tag, wait, ">=", 0);
                    }
                }
            }
        }
        for (int o = 0; o < n_c_; ++o) {
            Row late("c17_" + std::to_string(o));
            late.add(1, tc(o)).add(-1, tt(o));
            emit(out, "(17) tardiness of customer " + std::to_string(o), late, "<=", inst_.customer(o).deadline);
        }
    }

    void completion(std::ostringstream& out, int p) {
        Row done("c15_" + std::to_string(p));
        done.add(1, tc(p));
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) done.add(-robot(k, p), x(r, k, p));
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                for (int o = 0; o < n_c_; ++o) done.add(-(robot(k, o) + robot(k, p)), w(r, k, o, p));
            }
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) done.add_product(-1, x(r, k, p), ta(k));
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                for (int o = 0; o < n_c_; ++o) done.add_product(-1, w(r, k, o, p), tc(o));
            }
        }
        emit(out, "(15) completion time of customer " + std::to_string(p), done, "=", 0);
    }

    void completion_big_m(std::ostringstream& out, int p) {
        const std::string cp = std::to_string(p);
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                const std::string at = cp + "_" + std::to_string(r) + "_" + std::to_string(k);
                const std::string tag = "(15) completion of customer " + cp + " as first service of robot " +
                                        std::to_string(r) + " at station " + std::to_string(k);
                Row upper("c15xa_" + at);
                upper.add(1, tc(p)).add(-1, ta(k)).add(m_, x(r, k, p));
                emit(out, tag + ", upper", upper, "<=", m_ + robot(k, p));
                Row lower("c15xb_" + at);
                lower.add(1, tc(p)).add(-1, ta(k)).add(-m_, x(r, k, p));
                emit(out, tag + ", lower", lower, ">=", -m_ + robot(k, p));
            }
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                for (int o = 0; o < n_c_; ++o) {
                    const std::string at = cp + "_" + std::to_string(r) + "_" + std::to_string(k) + "_" + std::to_string(o);
                    const std::string tag = "(15) completion of customer " + cp + " after customer " + std::to_string(o) +
                                            ", robot " + std::to_string(r) + " at station " + std::to_string(k);
                    const double travel = robot(k, o) + robot(k, p);
                    Row upper("c15wa_" + at);
                    upper.add(1, tc(p)).add(-1, tc(o)).add(m_, w(r, k, o, p));
                    emit(out, tag + ", upper", upper, "<=", m_ + travel);
                    Row lower("c15wb_" + at);
                    lower.add(1, tc(p)).add(-1, tc(o)).add(-m_, w(r, k, o, p));
                    emit(out, tag + ", lower", lower, ">=", -m_ + travel);
                }
            }
        }
    }

    std::vector<std::string> binary_names() const {
        std::vector<std::string> out;
        for (int k = 0; k <= n_s_; ++k) {
            for (int l = 0; l <= n_s_; ++l) {
                if (k != l) out.push_back(y(k, l));
            }
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                for (int o = 0; o < n_c_; ++o) out.push_back(x(r, k, o));
            }
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int o = 0; o < n_c_; ++o) {
                for (int k = 1; k <= n_s_; ++k) out.push_back(z(r, o, k));
            }
        }
        for (int r = 0; r < n_r_; ++r) {
            for (int k = 1; k <= n_s_; ++k) {
                for (int o = 0; o < n_c_; ++o) {
                    for (int p = 0; p < n_c_; ++p) out.push_back(w(r, k, o, p));
                }
            }
        }
        return out;
    }

    const Instance& inst_;
    const DistanceTable& dist_;
    int n_s_;
    int n_r_;
    int n_c_;
    double vehicle_speed_;
    ExportOptions options_;
    bool big_m_;
    double m_;
    Counts counts_;
};

bool parse_int(std::string_view s, int& out) {
    if (s.empty() || (s.size() > 1 && s[0] == '0')) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size() && out >= 0;
}

}  // namespace

std::string export_miqcp(const Instance& instance, const ExportOptions& options) {
    return Exporter(instance, options, false).run();
}

std::string export_bigm(const Instance& instance, const ExportOptions& options) {
    return Exporter(instance, options, true).run();
}

std::string var_name(const VarRef& v) {
    const auto& i = v.index;
    auto join = [&](const char* prefix, int n) {
        std::string s = prefix;
        for (int j = 0; j < n; ++j) s += '_' + std::to_string(i[static_cast<std::size_t>(j)]);
        return s;
    };
    switch (v.kind) {
        case VarKind::Y: return join("y", 2);
        case VarKind::X: return join("x", 3);
        case VarKind::Z: return join("z", 3);
        case VarKind::W: return join("w", 4);
        case VarKind::Arrive: return join("ta", 1);
        case VarKind::Depart: return join("td", 1);
        case VarKind::Complete: return join("tc", 1);
        case VarKind::Tardiness: return join("tt", 1);
    }
    return {};
}

std::optional<VarRef> parse_var_name(std::string_view name) {
    static const std::pair<std::string_view, std::pair<VarKind, int>> kinds[] = {
        {"y", {VarKind::Y, 2}},          {"x", {VarKind::X, 3}},         {"z", {VarKind::Z, 3}},
        {"w", {VarKind::W, 4}},          {"ta", {VarKind::Arrive, 1}},   {"td", {VarKind::Depart, 1}},
        {"tc", {VarKind::Complete, 1}},  {"tt", {VarKind::Tardiness, 1}},
    };
    const auto sep = name.find('_');
    if (sep == std::string_view::npos) return std::nullopt;
    const auto prefix = name.substr(0, sep);
    for (const auto& [p, spec] : kinds) {
        if (p != prefix) continue;
        VarRef ref{spec.first, {}};
        std::string_view rest = name.substr(sep + 1);
        for (int j = 0; j < spec.second; ++j) {
            const auto next = rest.find('_');
            const bool last = j + 1 == spec.second;
            if (last != (next == std::string_view::npos)) return std::nullopt;
            if (!parse_int(rest.substr(0, next), ref.index[static_cast<std::size_t>(j)])) return std::nullopt;
            rest = last ? std::string_view{} : rest.substr(next + 1);
        }
        return ref;
    }
    return std::nullopt;
}

std::map<std::string, double> plan_values(const Instance& instance, const RoutePlan& plan) {
    std::map<std::string, double> values;
    StationId prev = 0;
    for (StationId k : plan.tour) {
        values[y(prev, k)] = 1;
        prev = k;
    }
    values[y(prev, 0)] = 1;
    for (const auto& s : plan.sorties) {
        if (s.services.empty()) continue;
        values[x(s.robot, s.station, s.services.front())] = 1;
        for (std::size_t i = 1; i < s.services.size(); ++i) {
            values[w(s.robot, s.station, s.services[i - 1], s.services[i])] = 1;
        }
        values[z(s.robot, s.services.back(), s.station)] = 1;
    }
    const Schedule schedule = propagate(instance, plan);
    for (const auto& st : instance.stations()) {
        values[ta(st.id)] = schedule.arrive[static_cast<std::size_t>(st.id)];
        values[td(st.id)] = schedule.depart[static_cast<std::size_t>(st.id)];
    }
    for (const auto& c : instance.customers()) {
        values[tc(c.id)] = schedule.complete[static_cast<std::size_t>(c.id)];
        values[tt(c.id)] = schedule.tardiness[static_cast<std::size_t>(c.id)];
    }
    return values;
}

std::string format_solution(const std::map<std::string, double>& values) {
    std::string out = "# name value\n";
    for (const auto& [name, value] : values) out += name + ' ' + num(value) + '\n';
    return out;
}

ImportResult import_solution(const Instance& instance, std::string_view text) {
    const int n_s = instance.station_count();
    const int n_r = instance.fleet_size();
    const int n_c = instance.customer_count();

    std::map<std::string, double> values;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string name;
        if (!(fields >> name) || name[0] == '#') continue;
        double value = 0;
        if (!(fields >> value)) throw ImportError("line " + std::to_string(line_no) + ": expected 'name value'");
        const auto ref = parse_var_name(name);
        if (!ref) throw ImportError("line " + std::to_string(line_no) + ": unknown variable '" + name + "'");
        values[name] = value;
    }

    auto binary = [&](const std::string& name) {
        const auto it = values.find(name);
        const double v = it == values.end() ? 0.0 : it->second;
        if (v > kIntegrality && v < 1 - kIntegrality) {
            throw ImportError("fractional binary " + name + " = " + num(v));
        }
        return v >= 0.5;
    };
    for (const auto& [name, value] : values) {
        const auto kind = parse_var_name(name)->kind;
        if (kind == VarKind::Y || kind == VarKind::X || kind == VarKind::Z || kind == VarKind::W) binary(name);
    }

    // (10)/(11): every customer entered and left exactly once.
    for (int o = 0; o < n_c; ++o) {
        int entered = 0;
        int left = 0;
        for (int r = 0; r < n_r; ++r) {
            for (int k = 1; k <= n_s; ++k) {
                entered += binary(x(r, k, o));
                left += binary(z(r, o, k));
                for (int p = 0; p < n_c; ++p) {
                    entered += binary(w(r, k, p, o));
                    left += binary(w(r, k, o, p));
                }
            }
        }
        if (entered != 1) throw ImportError("(10) customer " + std::to_string(o) + " entered " + std::to_string(entered) + " times");
        if (left != 1) throw ImportError("(11) customer " + std::to_string(o) + " left " + std::to_string(left) + " times");
    }

    // Vehicle tour from y.
    RoutePlan plan;
    std::vector<char> seen(static_cast<std::size_t>(n_s) + 1, 0);
    int at = 0;
    for (int step = 0; step <= n_s; ++step) {
        int next = -1;
        for (int l = 0; l <= n_s; ++l) {
            if (l == at || !binary(y(at, l))) continue;
            if (next != -1) throw ImportError("(4) vehicle leaves node " + std::to_string(at) + " more than once");
            next = l;
        }
        if (next == -1) throw ImportError("(1)-(4) vehicle tour breaks at node " + std::to_string(at));
        if (next == 0) break;
        if (seen[static_cast<std::size_t>(next)]) throw ImportError("(3) station " + std::to_string(next) + " entered twice");
        seen[static_cast<std::size_t>(next)] = 1;
        plan.tour.push_back(next);
        at = next;
    }
    if (static_cast<int>(plan.tour.size()) != n_s) {
        throw ImportError("(3)/(4) vehicle tour visits " + std::to_string(plan.tour.size()) + " of " +
                          std::to_string(n_s) + " stations");
    }

    // Robot chains: x starts, w links, z ends.
    std::vector<std::vector<char>> used_w(static_cast<std::size_t>(n_c), std::vector<char>(static_cast<std::size_t>(n_c), 0));
    std::size_t chained_links = 0;
    for (int k = 1; k <= n_s; ++k) {
        for (int r = 0; r < n_r; ++r) {
            const std::string where = "robot " + std::to_string(r) + " at station " + std::to_string(k);
            std::vector<int> starts;
            for (int o = 0; o < n_c; ++o) {
                if (binary(x(r, k, o))) starts.push_back(o);
            }
            if (starts.size() > 1) throw ImportError("(5) " + where + " dispatched " + std::to_string(starts.size()) + " times");
            if (starts.empty()) continue;
            Sortie sortie{r, k, {}};
            std::vector<char> on_chain(static_cast<std::size_t>(n_c), 0);
            int cur = starts.front();
            while (true) {
                if (on_chain[static_cast<std::size_t>(cur)]) throw ImportError("(8) " + where + " revisits customer " + std::to_string(cur));
                on_chain[static_cast<std::size_t>(cur)] = 1;
                sortie.services.push_back(cur);
                int next = -1;
                for (int p = 0; p < n_c; ++p) {
                    if (!binary(w(r, k, cur, p))) continue;
                    if (next != -1) throw ImportError("(8) " + where + " branches after customer " + std::to_string(cur));
                    next = p;
                }
                if (next == -1) break;
                ++chained_links;
                cur = next;
            }
            if (!binary(z(r, cur, k))) {
                throw ImportError("(8) " + where + " is not collected after customer " + std::to_string(cur));
            }
            for (std::size_t i = 1; i < sortie.services.size(); ++i) {
                used_w[static_cast<std::size_t>(sortie.services[i - 1])][static_cast<std::size_t>(sortie.services[i])] = 1;
            }
            plan.sorties.push_back(std::move(sortie));
        }
    }
    for (const auto& [name, value] : values) {
        const auto ref = parse_var_name(name);
        if (value < 0.5) continue;
        if (ref->kind == VarKind::W) {
            const auto& i = ref->index;
            const bool on_route = std::any_of(plan.sorties.begin(), plan.sorties.end(), [&](const Sortie& s) {
                if (s.robot != i[0] || s.station != i[1]) return false;
                for (std::size_t j = 1; j < s.services.size(); ++j) {
                    if (s.services[j - 1] == i[2] && s.services[j] == i[3]) return true;
                }
                return false;
            });
            if (!on_route) throw ImportError("(8) " + name + " = 1 but no dispatch chain reaches customer " + std::to_string(i[2]));
        }
        if (ref->kind == VarKind::Z) {
            const auto& i = ref->index;
            const bool ends = std::any_of(plan.sorties.begin(), plan.sorties.end(), [&](const Sortie& s) {
                return s.robot == i[0] && s.station == i[2] && s.services.back() == i[1];
            });
            if (!ends) throw ImportError("(7)/(8) " + name + " = 1 without a matching dispatch chain");
        }
    }
    (void)chained_links;

    if (const auto problems = check_structure(instance, plan); !problems.empty()) {
        throw ImportError(to_string(problems.front().kind) + ' ' + problems.front().detail);
    }

    ImportResult result;
    result.schedule = propagate(instance, plan);
    result.plan = canonical(std::move(plan));
    auto compare = [&](const std::string& name, double propagated) {
        const auto it = values.find(name);
        if (it == values.end()) return;
        if (std::fabs(it->second - propagated) > kTimeTolerance) {
            result.mismatches.push_back(name + ": solver " + num(it->second) + ", propagated " + num(propagated));
        }
    };
    for (const auto& st : instance.stations()) {
        compare(ta(st.id), result.schedule.arrive[static_cast<std::size_t>(st.id)]);
        compare(td(st.id), result.schedule.depart[static_cast<std::size_t>(st.id)]);
    }
    for (const auto& c : instance.customers()) {
        compare(tc(c.id), result.schedule.complete[static_cast<std::size_t>(c.id)]);
        compare(tt(c.id), result.schedule.tardiness[static_cast<std::size_t>(c.id)]);
    }
    return result;
}

}  // namespace mothership
