#include <gtest/gtest.h>

#include <random>

#include "mothership/eval.hpp"
#include "mothership/exact.hpp"
#include "mothership/fixtures.hpp"
#include "mothership/mipexport.hpp"
#include "support.hpp"

namespace mothership {
namespace {

using testing::LpModel;

std::string describe(const std::vector<LpModel::Failure>& failures) {
    std::string s;
    for (const auto& f : failures) s += f.row + " lhs=" + std::to_string(f.lhs) + ' ' + f.sense + ' ' + std::to_string(f.rhs) + "\n";
    return s;
}

TEST(VarNames, RoundTrip) {
    const VarRef refs[] = {{VarKind::Y, {0, 2}},       {VarKind::X, {1, 2, 10}}, {VarKind::Z, {0, 7, 1}},
                           {VarKind::W, {3, 4, 0, 11}}, {VarKind::Arrive, {3}},   {VarKind::Depart, {1}},
                           {VarKind::Complete, {12}},   {VarKind::Tardiness, {0}}};
    for (const auto& r : refs) {
        const auto parsed = parse_var_name(var_name(r));
        ASSERT_TRUE(parsed.has_value()) << var_name(r);
        EXPECT_EQ(*parsed, r);
    }
    EXPECT_EQ(var_name({VarKind::W, {0, 1, 3, 5}}), "w_0_1_3_5");
    EXPECT_EQ(var_name({VarKind::Arrive, {2}}), "ta_2");
    for (const char* bad : {"y_1", "x_1_2", "q_1", "ta_", "ta_01", "w_1_2_3_4_5", "tt_-1", "y_1_a", ""}) {
        EXPECT_FALSE(parse_var_name(bad).has_value()) << bad;
    }
}

TEST(Export, SmallFixtureCounts) {
    const auto f = builtin_fixture("small");
    const LpModel quad(export_miqcp(f.instance));
    // y: 3*2, x/z: 2*2*8 each, w: 2*2*8*8; ta/td per station, tc/tt per customer.
    EXPECT_EQ(quad.binary_count(), 6u + 32u + 32u + 256u);
    EXPECT_EQ(quad.variable_count(), 326u + 20u);
    EXPECT_EQ(quad.row_count(), 122u);
    EXPECT_TRUE(quad.has_quadratic());
    const LpModel linear(export_bigm(f.instance));
    EXPECT_EQ(linear.binary_count(), 326u);
    EXPECT_FALSE(linear.has_quadratic());
}

TEST(Export, HeaderDocumentsCountsAndBigM) {
    const auto f = builtin_fixture("small");
    const std::string lp = export_bigm(f.instance);
    EXPECT_NE(lp.find("326 binary"), std::string::npos);
    EXPECT_NE(lp.find("20 continuous"), std::string::npos);
    EXPECT_NE(lp.find("\\ M = "), std::string::npos);
    EXPECT_NE(lp.find("L_0_*"), std::string::npos);
    EXPECT_EQ(lp.find("td_0"), std::string::npos);
    for (std::size_t start = 0, end; (end = lp.find('\n', start)) != std::string::npos; start = end + 1) {
        if (lp[start] == '\\') continue;
        EXPECT_LE(end - start, 100u) << lp.substr(start, end - start);
    }
}

TEST(Export, FixturePlanSatisfiesBothModels) {
    const auto f = builtin_fixture("small");
    const auto values = plan_values(f.instance, f.plan);
    for (const auto& text : {export_miqcp(f.instance), export_bigm(f.instance)}) {
        const LpModel model(text);
        const auto failures = model.check(values, 1e-6);
        EXPECT_TRUE(failures.empty()) << describe(failures);
        EXPECT_NEAR(model.objective(values), 36.37122987569252, 1e-9);
    }
}

TEST(Export, FeasiblePlansSatisfyBothModels) {
    std::mt19937_64 rng(51);
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        const Instance inst = testing::random_instance(rng, 1 + i % 3, 1 + i % 3, 1 + i % 5);
        const RoutePlan plan = testing::random_feasible_plan(inst, rng);
        if (plan.tour.empty()) continue;
        const auto values = plan_values(inst, plan);
        const double expected = propagate(inst, plan).objective;
        for (const auto& text : {export_miqcp(inst), export_bigm(inst)}) {
            const LpModel model(text);
            const auto failures = model.check(values, 1e-6);
            ASSERT_TRUE(failures.empty()) << "case " << i << "\n" << describe(failures);
            ASSERT_NEAR(model.objective(values), expected, 1e-6 * (1 + expected));
        }
        ++checked;
    }
    EXPECT_GT(checked, 80);
}

TEST(Export, BrokenAssignmentsViolateSomeRow) {
    const auto f = builtin_fixture("small");
    const LpModel quad(export_miqcp(f.instance));
    const LpModel linear(export_bigm(f.instance));
    auto expect_violation = [&](auto mutate, const char* what) {
        auto values = plan_values(f.instance, f.plan);
        mutate(values);
        EXPECT_FALSE(quad.check(values, 1e-6).empty()) << what;
        EXPECT_FALSE(linear.check(values, 1e-6).empty()) << what;
    };
    expect_violation([](auto& v) { v["tc_4"] -= 1.0; }, "early completion");
    expect_violation([](auto& v) { v["td_2"] -= 1.0; }, "early departure");
    expect_violation([](auto& v) { v.erase("w_0_2_4_2"); }, "broken chain");
    expect_violation([](auto& v) { v["y_1_2"] = 1; }, "extra vehicle arc");
    expect_violation([](auto& v) { v["tt_0"] = 0; }, "missing tardiness");
}

TEST(Export, RangeViolationIsCaught) {
    const auto f = builtin_fixture("medium");
    const LpModel model(export_bigm(f.instance));
    const auto failures = model.check(plan_values(f.instance, f.plan), 1e-6);
    ASSERT_EQ(failures.size(), 1u) << describe(failures);
    EXPECT_EQ(failures[0].row, "c9_0_4");
}

TEST(Export, RobotSpeedLegsOption) {
    const auto f = builtin_fixture("small");
    ExportOptions literal;
    literal.robot_speed_legs = true;
    const std::string a = export_miqcp(f.instance);
    const std::string b = export_miqcp(f.instance, literal);
    EXPECT_NE(a, b);
    EXPECT_NE(b.find("literal mode"), std::string::npos);
    // y_0_2 leg: sqrt(6250) / 5 in literal mode, / 50 otherwise.
    EXPECT_NE(b.find("15.811388300841898 y_0_2"), std::string::npos);
    EXPECT_NE(a.find("1.5811388300841898 y_0_2"), std::string::npos);
}

TEST(Export, Deterministic) {
    const auto f = builtin_fixture("medium");
    EXPECT_EQ(export_miqcp(f.instance), export_miqcp(f.instance));
    EXPECT_EQ(export_bigm(f.instance), export_bigm(f.instance));
}

// Nonzero binaries of the published small solution, typed in by hand.
constexpr const char* kPublishedSmall = R"(# nonzero binaries
y_0_2 1
y_1_0 1
y_2_1 1
x_0_1_3 1
x_0_2_4 1
x_1_1_0 1
x_1_2_6 1
z_0_1_2 1
z_0_5_1 1
z_1_6_2 1
z_1_7_1 1
w_0_1_3_5 1
w_0_2_2_1 1
w_0_2_4_2 1
w_1_1_0_7 1
)";

TEST(Import, PublishedSmallSolutionRoundTrips) {
    const auto f = builtin_fixture("small");
    const auto result = import_solution(f.instance, kPublishedSmall);
    EXPECT_EQ(result.plan, canonical(f.plan));
    EXPECT_TRUE(result.mismatches.empty());
    EXPECT_NEAR(result.schedule.objective, 36.37122987569252, 1e-12);
}

TEST(Import, FormatSolutionRoundTrips) {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 100; ++i) {
        const Instance inst = testing::random_instance(rng, 1 + i % 4, 1 + i % 3, 1 + i % 7);
        const RoutePlan plan = testing::random_plan(inst, rng);
        const auto result = import_solution(inst, format_solution(plan_values(inst, plan)));
        ASSERT_EQ(result.plan, canonical(plan)) << "case " << i;
        ASSERT_TRUE(result.mismatches.empty());
    }
}

TEST(Import, ReportsTimeMismatches) {
    const auto f = builtin_fixture("small");
    auto values = plan_values(f.instance, f.plan);
    values["tc_3"] += 0.5;
    values["ta_1"] += 1e-6;  // within tolerance
    const auto result = import_solution(f.instance, format_solution(values));
    ASSERT_EQ(result.mismatches.size(), 1u);
    EXPECT_EQ(result.mismatches[0].rfind("tc_3", 0), 0u);
}

TEST(Import, Errors) {
    const auto f = builtin_fixture("small");
    const std::string good = kPublishedSmall;
    auto expect_error = [&](const std::string& text, const std::string& fragment) {
        try {
            import_solution(f.instance, text);
            ADD_FAILURE() << "expected ImportError containing '" << fragment << "'";
        } catch (const ImportError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_error("", "(10)");
    expect_error(good + "bogus 1\n", "unknown variable");
    expect_error(good + "y_0_1 0.5\n", "fractional");
    expect_error(good + "ta_1\n", "expected 'name value'");
    std::string no_collect = good;
    no_collect.replace(no_collect.find("z_0_5_1 1"), 9, "z_0_5_1 0");
    expect_error(no_collect, "(11)");
    std::string loop = good;
    loop.replace(loop.find("y_1_0 1"), 7, "y_1_2 1");
    loop.replace(loop.find("y_0_2 1"), 7, "y_0_1 1");
    expect_error(loop, "(");
    // Customer 5 collected by robot 1 instead of robot 0: the chain of robot
    // 0 at station 1 ends without a collection.
    std::string wrong_robot = good;
    wrong_robot.replace(wrong_robot.find("z_0_5_1 1"), 9, "z_1_5_1 1");
    expect_error(wrong_robot, "(8)");
}

}  // namespace
}  // namespace mothership
