#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "mothership/eval.hpp"
#include "mothership/exact.hpp"
#include "mothership/fixtures.hpp"
#include "mothership/heuristic.hpp"
#include "mothership/instgen.hpp"
#include "mothership/mipexport.hpp"
#include "mothership/serialize.hpp"
#include "render.hpp"

namespace mothership::cli {

namespace {

// Bad arguments, unreadable files or malformed documents.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Constraint violations or infeasibility.
class ViolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) throw UsageError("cannot write '" + path + "'");
}

struct Source {
    std::string fixture;
    std::string instance_path;
    std::string plan_path;
};

void add_source(CLI::App* cmd, Source& src, bool with_plan) {
    auto* fixture = cmd->add_option("--fixture", src.fixture, "Built-in instance: small or medium");
    auto* instance = cmd->add_option("--instance", src.instance_path, "Instance JSON file");
    fixture->excludes(instance);
    if (with_plan) cmd->add_option("--plan", src.plan_path, "Plan JSON file (default: the fixture's plan)");
}

struct Loaded {
    Instance instance;
    std::optional<RoutePlan> plan;
    std::optional<Fixture> fixture;
};

Loaded load(const Source& src, bool need_plan) {
    std::optional<Fixture> fixture;
    std::optional<Instance> instance;
    if (!src.fixture.empty()) {
        try {
            fixture = builtin_fixture(src.fixture);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        instance = fixture->instance;
    } else if (!src.instance_path.empty()) {
        instance = parse_instance(read_file(src.instance_path));
    } else {
        throw UsageError("one of --fixture or --instance is required");
    }
    std::optional<RoutePlan> plan;
    if (!src.plan_path.empty()) {
        plan = parse_plan(read_file(src.plan_path));
    } else if (fixture) {
        plan = fixture->plan;
    }
    if (need_plan && !plan) throw UsageError("--plan is required with --instance");
    return {std::move(*instance), std::move(plan), std::move(fixture)};
}

enum class Format { Table, Csv, Json };

void add_format(CLI::App* cmd, Format& format) {
    cmd->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"table", Format::Table}, {"csv", Format::Csv}, {"json", Format::Json}}));
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

// ---------------------------------------------------------------- commands

int cmd_generate(const GeneratorParams& params, const std::string& output, std::ostream& out) {
    Instance instance = [&] {
        try {
            return generate(params);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    emit(serialize_instance(instance), output, out);
    return kOk;
}

int cmd_validate(const Source& src, Format format, std::ostream& out) {
    const Loaded in = load(src, true);
    const auto violations = validate(in.instance, *in.plan);
    switch (format) {
        case Format::Json: out << serialize_violations(violations); break;
        case Format::Csv:
            out << "kind,detail\n";
            for (const auto& v : violations) out << csv_quote(to_string(v.kind)) << ',' << csv_quote(v.detail) << "\n";
            break;
        case Format::Table:
            if (violations.empty()) out << "feasible\n";
            for (const auto& v : violations) out << to_string(v.kind) << "  " << v.detail << "\n";
            break;
    }
    return violations.empty() ? kOk : kViolations;
}

int cmd_evaluate(const Source& src, Format format, std::ostream& out) {
    const Loaded in = load(src, true);
    Schedule schedule;
    try {
        schedule = propagate(in.instance, *in.plan);
    } catch (const PlanError& e) {
        throw ViolationError(e.what());
    }
    switch (format) {
        case Format::Json: out << serialize_schedule(in.instance, *in.plan, schedule); break;
        case Format::Csv: out << schedule_csv(in.instance, *in.plan, schedule); break;
        case Format::Table: {
            out << schedule_table(in.instance, *in.plan, schedule);
            out << "\nTimes are in time units (distance / speed); the published tables label them [min].\n";
            if (in.fixture && src.plan_path.empty()) {
                std::string printed;
                for (double v : in.fixture->published_objectives) printed += (printed.empty() ? "" : "/") + fixed(v, 2);
                out << "Published objective for this plan: " << printed << " (printed value; recomputed "
                    << fixed(schedule.objective, 4) << ").\n";
                for (const auto& note : in.fixture->notes) out << "Note: " << note << "\n";
            }
            const auto violations = validate(in.instance, *in.plan);
            for (const auto& v : violations) out << "Violation " << to_string(v.kind) << ": " << v.detail << "\n";
            break;
        }
    }
    return kOk;
}

struct SolveOptions {
    std::string method = "exact";
    std::uint64_t max_nodes = 0;
    double max_seconds = 0;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    unsigned restarts = 8;
    std::uint64_t iterations = 5000;
    unsigned kicks = 10;
    bool no_warm_start = false;
    bool timing = false;
    std::string output;
};

SolveReport run_solver(const Instance& instance, const SolveOptions& opt) {
    try {
        if (opt.method == "oracle") return solve_oracle(instance);
        if (opt.method == "exact") {
            Budget budget;
            if (opt.max_nodes > 0) budget.max_nodes = opt.max_nodes;
            if (opt.max_seconds > 0) budget.max_seconds = opt.max_seconds;
            budget.threads = opt.threads;
            budget.warm_start = !opt.no_warm_start;
            return solve_bnb(instance, budget);
        }
        SearchParams params;
        params.seed = opt.seed;
        params.restarts = opt.restarts;
        params.max_iterations = opt.iterations;
        params.kicks = opt.kicks;
        params.threads = opt.threads;
        if (opt.max_seconds > 0) params.max_seconds = opt.max_seconds;
        return solve_heuristic(instance, params);
    } catch (const SizeLimitError& e) {
        throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const InfeasibleError& e) {
        throw ViolationError(e.what());
    }
}

int cmd_solve(const Source& src, const SolveOptions& opt, Format format, std::ostream& out) {
    const Loaded in = load(src, false);
    const SolveReport report = run_solver(in.instance, opt);
    if (!opt.output.empty()) emit(serialize_plan(report.plan), opt.output, out);
    switch (format) {
        case Format::Json: out << serialize_report(report, opt.timing); break;
        case Format::Csv:
            out << "method,status,objective,lower_bound,gap,nodes" << (opt.timing ? ",wall_seconds" : "") << "\n";
            out << report.method << ',' << to_string(report.status) << ',' << exact(report.objective) << ','
                << exact(report.lower_bound) << ',' << exact(report.gap()) << ',' << report.nodes;
            if (opt.timing) out << ',' << exact(report.wall_seconds);
            out << "\n";
            break;
        case Format::Table:
            out << "method       " << report.method << "\n";
            out << "status       " << to_string(report.status) << "\n";
            out << "objective    " << fixed(report.objective, 4) << "\n";
            out << "lower bound  " << fixed(report.lower_bound, 4) << "\n";
            out << "gap          " << fixed(report.gap(), 4) << "\n";
            out << "nodes        " << report.nodes << "\n";
            if (opt.timing) out << "wall time    " << fixed(report.wall_seconds, 3) << " s\n";
            out << "plan         " << serialize_plan(report.plan);
            break;
    }
    return kOk;
}

int cmd_export(const Source& src, const std::string& form, bool robot_speed_legs, const std::string& output,
               std::ostream& out) {
    const Loaded in = load(src, false);
    ExportOptions options;
    options.robot_speed_legs = robot_speed_legs;
    emit(form == "bigm" ? export_bigm(in.instance, options) : export_miqcp(in.instance, options), output, out);
    return kOk;
}

int cmd_import(const Source& src, const std::string& solution, Format format, const std::string& output,
               std::ostream& out, std::ostream& err) {
    const Loaded in = load(src, false);
    ImportResult result;
    try {
        result = import_solution(in.instance, read_file(solution));
    } catch (const ImportError& e) {
        throw ViolationError(e.what());
    }
    for (const auto& m : result.mismatches) err << "warning: " << m << "\n";
    if (!output.empty()) emit(serialize_plan(result.plan), output, out);
    switch (format) {
        case Format::Json: out << serialize_plan(result.plan); break;
        case Format::Csv: out << schedule_csv(in.instance, result.plan, result.schedule); break;
        case Format::Table:
            out << "plan       " << serialize_plan(result.plan);
            out << "objective  " << fixed(result.schedule.objective, 4) << "\n";
            out << "mismatches " << result.mismatches.size() << "\n";
            break;
    }
    const auto violations = validate(in.instance, result.plan);
    return violations.empty() ? kOk : kViolations;
}

struct BenchOptions {
    std::uint64_t seed = 1;
    int count = 5;
    int stations = 2;
    int robots = 2;
    int customers = 6;
    double width = 40;
    double height = 40;
    double range = 120;
    std::uint64_t max_nodes = 200000;
    bool no_time = false;
};

int cmd_bench(const BenchOptions& opt, std::ostream& out) {
    out << "suite,instance,method,status,objective,lower_bound,nodes" << (opt.no_time ? "" : ",seconds") << "\n";
    auto row = [&](const std::string& suite, const std::string& name, const SolveReport& r) {
        out << suite << ',' << name << ',' << r.method << ',' << to_string(r.status) << ',' << exact(r.objective) << ','
            << exact(r.lower_bound) << ',' << r.nodes;
        if (!opt.no_time) out << ',' << fixed(r.wall_seconds, 6);
        out << "\n";
    };
    Budget budget;
    budget.max_nodes = opt.max_nodes;
    SearchParams params;
    params.seed = opt.seed;
    params.max_seconds = std::numeric_limits<double>::infinity();
    auto run_both = [&](const std::string& suite, const std::string& name, const Instance& instance) {
        try {
            row(suite, name, solve_bnb(instance, budget));
            row(suite, name, solve_heuristic(instance, params));
        } catch (const InfeasibleError&) {
            out << suite << ',' << name << ",none,infeasible,,,0" << (opt.no_time ? "" : ",0") << "\n";
        }
    };
    for (const auto& name : fixture_names()) run_both("fixture", name, builtin_fixture(name).instance);
    for (int i = 0; i < opt.count; ++i) {
        GeneratorParams g;
        g.seed = opt.seed + static_cast<std::uint64_t>(i);
        g.stations = opt.stations;
        g.robots = opt.robots;
        g.customers = opt.customers;
        g.width = opt.width;
        g.height = opt.height;
        g.robot_range = opt.range;
        try {
            run_both("generated", "seed" + std::to_string(g.seed), generate(g));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return kOk;
}

int cmd_plot(const Source& src, const std::string& output, std::ostream& out) {
    const Loaded in = load(src, true);
    if (const auto problems = check_structure(in.instance, *in.plan); !problems.empty()) {
        throw ViolationError(to_string(problems.front().kind) + ' ' + problems.front().detail);
    }
    emit(plot_svg(in.instance, *in.plan), output, out);
    return kOk;
}

int cmd_fixtures(const std::string& name, const std::string& what, Format format, std::ostream& out) {
    if (name.empty()) {
        if (format == Format::Json) {
            out << "[";
            bool first = true;
            for (const auto& n : fixture_names()) {
                out << (first ? "" : ",") << "\"" << n << "\"";
                first = false;
            }
            out << "]\n";
            return kOk;
        }
        out << (format == Format::Csv ? "name,stations,robots,customers\n" : "name    stations  robots  customers\n");
        for (const auto& n : fixture_names()) {
            const auto f = builtin_fixture(n);
            const auto& i = f.instance;
            if (format == Format::Csv) {
                out << n << ',' << i.station_count() << ',' << i.fleet_size() << ',' << i.customer_count() << "\n";
            } else {
                std::string padded = n + std::string(n.size() < 8 ? 8 - n.size() : 0, ' ');
                out << padded << i.station_count() << "         " << i.fleet_size() << "       " << i.customer_count()
                    << "\n";
            }
        }
        return kOk;
    }
    Fixture f = [&] {
        try {
            return builtin_fixture(name);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (what == "plan") {
        out << serialize_plan(f.plan);
    } else if (what == "notes") {
        for (const auto& note : f.notes) out << note << "\n";
    } else {
        out << serialize_instance(f.instance);
    }
    return kOk;
}

}  // namespace

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("mothership");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("MOTHERSHIP_LOG")) {
        const auto parsed = spdlog::level::from_str(level);
        // from_str maps unknown names to off; only honour real names.
        if (parsed != spdlog::level::off || std::string(level) == "off") spdlog::set_level(parsed);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vehicle-robot pickup and delivery routing: evaluation, exact and heuristic solvers, model export"};
    app.name(args.empty() ? "mothership" : args.front());
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Format format = Format::Table;
    Source src;

    GeneratorParams gen;
    std::string output;
    auto* generate_cmd = app.add_subcommand("generate", "Write a random instance");
    generate_cmd->add_option("--seed", gen.seed, "Generator seed");
    generate_cmd->add_option("--stations", gen.stations, "Number of stations")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--robots", gen.robots, "Robots on the vehicle")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--customers", gen.customers, "Number of customers")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--width", gen.width, "Region width")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--height", gen.height, "Region height")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--tr", gen.robot_range, "Robot travel range")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--vv", gen.vehicle_speed, "Vehicle speed")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--vr", gen.robot_speed, "Robot speed")->check(CLI::PositiveNumber);
    generate_cmd->add_option("-o,--output", output, "Output file (default stdout)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a plan against every constraint; exit 1 on violations");
    add_source(validate_cmd, src, true);
    add_format(validate_cmd, format);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Propagate the schedule of a plan");
    add_source(evaluate_cmd, src, true);
    add_format(evaluate_cmd, format);

    SolveOptions solve_opt;
    auto* solve_cmd = app.add_subcommand("solve", "Optimize an instance");
    add_source(solve_cmd, src, false);
    add_format(solve_cmd, format);
    solve_cmd->add_option("--method", solve_opt.method, "exact, heuristic or oracle")
        ->check(CLI::IsMember({"exact", "heuristic", "oracle"}));
    solve_cmd->add_option("--max-nodes", solve_opt.max_nodes, "Branch-and-bound node budget (0 = none)");
    solve_cmd->add_option("--max-seconds", solve_opt.max_seconds, "Wall-clock budget (0 = default)")
        ->check(CLI::NonNegativeNumber);
    solve_cmd->add_option("--threads", solve_opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--seed", solve_opt.seed, "Heuristic seed");
    solve_cmd->add_option("--restarts", solve_opt.restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--iterations", solve_opt.iterations, "Accepted moves per restart")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--kicks", solve_opt.kicks, "Perturbation rounds per restart");
    solve_cmd->add_flag("--no-warm-start", solve_opt.no_warm_start, "Skip the heuristic incumbent");
    solve_cmd->add_flag("--timing", solve_opt.timing, "Report wall time");
    solve_cmd->add_option("-o,--output", solve_opt.output, "Also write the plan JSON to this file");

    std::string form = "miqcp";
    bool robot_speed_legs = false;
    auto* export_cmd = app.add_subcommand("export", "Write the optimization model in LP format");
    add_source(export_cmd, src, false);
    export_cmd->add_option("--form", form, "miqcp or bigm")->check(CLI::IsMember({"miqcp", "bigm"}));
    export_cmd->add_flag("--robot-speed-legs", robot_speed_legs, "Divide vehicle legs by the robot speed in (13)");
    export_cmd->add_option("-o,--output", output, "Output file (default stdout)");

    std::string solution;
    auto* import_cmd = app.add_subcommand("import-solution", "Rebuild a plan from solver variable values");
    add_source(import_cmd, src, false);
    add_format(import_cmd, format);
    import_cmd->add_option("--solution", solution, "File of 'name value' lines")->required();
    import_cmd->add_option("-o,--output", output, "Also write the plan JSON to this file");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the fixture and generated suites; CSV on stdout");
    bench_cmd->add_option("--seed", bench.seed, "First generator seed");
    bench_cmd->add_option("--count", bench.count, "Generated instances")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--stations", bench.stations, "Stations per generated instance")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--robots", bench.robots, "Robots per generated instance")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--customers", bench.customers, "Customers per generated instance")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--width", bench.width, "Region width")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--height", bench.height, "Region height")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--tr", bench.range, "Robot travel range")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--max-nodes", bench.max_nodes, "Branch-and-bound node budget per instance")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--no-time", bench.no_time, "Omit the seconds column (byte-stable output)");

    auto* plot_cmd = app.add_subcommand("plot", "Render a plan as SVG");
    add_source(plot_cmd, src, true);
    plot_cmd->add_option("-o,--output", output, "Output file (default stdout)");

    std::string fixture_name;
    std::string what = "instance";
    auto* fixtures_cmd = app.add_subcommand("fixtures", "List built-in fixtures or print one");
    fixtures_cmd->add_option("name", fixture_name, "Fixture to print");
    fixtures_cmd->add_option("--what", what, "instance, plan or notes")
        ->check(CLI::IsMember({"instance", "plan", "notes"}));
    add_format(fixtures_cmd, format);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*generate_cmd) return cmd_generate(gen, output, out);
        if (*validate_cmd) return cmd_validate(src, format, out);
        if (*evaluate_cmd) return cmd_evaluate(src, format, out);
        if (*solve_cmd) return cmd_solve(src, solve_opt, format, out);
        if (*export_cmd) return cmd_export(src, form, robot_speed_legs, output, out);
        if (*import_cmd) return cmd_import(src, solution, format, output, out, err);
        if (*bench_cmd) return cmd_bench(bench, out);
        if (*plot_cmd) return cmd_plot(src, output, out);
        if (*fixtures_cmd) return cmd_fixtures(fixture_name, what, format, out);
    } catch (const ViolationError& e) {
        err << "error: " << e.what() << "\n";
        return kViolations;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InstanceError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace mothership::cli
