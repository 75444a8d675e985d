#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cosim/errors.hpp"
#include "cosim/function_units.hpp"
#include "cosim/model_library.hpp"

using namespace cosim;

namespace {

std::vector<double> eval(const FunctionUnitSpec& spec, std::vector<double> in) {
    const auto fu = make_function_unit(spec);
    std::vector<double> out(fu->output_count());
    fu->evaluate(in, out, 0.0);
    return out;
}

}  // namespace

TEST(FunctionUnits, Catalogue) {
    const auto kinds = function_unit_kinds();
    for (const char* k : {"constant", "gain", "sum", "unit_convert", "splitter", "force_aggregator", "switchboard"}) {
        EXPECT_NE(std::find(kinds.begin(), kinds.end(), k), kinds.end()) << k;
    }
    EXPECT_THROW(make_function_unit({"x", "teleporter", {}}), InvalidConfig);
    EXPECT_THROW(make_function_unit({"x", "gain", {{"gian", "2"}}}), InvalidConfig);
    EXPECT_THROW(make_function_unit({"x", "sum", {{"arity", "0"}}}), InvalidConfig);
}

TEST(FunctionUnits, LinearKinds) {
    EXPECT_EQ(eval({"c", "constant", {{"value", "4.5"}}}, {}), std::vector<double>{4.5});
    EXPECT_EQ(eval({"g", "gain", {{"gain", "-2"}}}, {3.0}), std::vector<double>{-6.0});
    EXPECT_EQ(eval({"s", "sum", {{"arity", "3"}}}, {1.0, 2.0, 4.0}), std::vector<double>{7.0});
    EXPECT_EQ(eval({"p", "splitter", {{"arity", "2"}}}, {1.5}), (std::vector<double>{1.5, 1.5}));
}

TEST(FunctionUnits, UnitConversion) {
    const auto rpm = eval({"u", "unit_convert", {{"from", "rad/s"}, {"to", "rpm"}}}, {1.0});
    EXPECT_NEAR(rpm[0], 60.0 / (2.0 * 3.141592653589793), 1e-12);
    EXPECT_EQ(eval({"u", "unit_convert", {{"from", "kN"}, {"to", "N"}}}, {2.5})[0], 2500.0);
    EXPECT_THROW(make_function_unit({"u", "unit_convert", {{"from", "kN"}, {"to", "m"}}}), InvalidConfig);
}

TEST(FunctionUnits, ForceAggregatorSumsForcesAndMoments) {
    // F1 = (1, 0, 0) at r1 = (0, 2, 0); F2 = (0, 3, 0) at r2 = (4, 0, 0).
    const auto out = eval({"f", "force_aggregator", {{"arity", "2"}}}, {1, 0, 0, 0, 2, 0, 0, 3, 0, 4, 0, 0});
    EXPECT_EQ(out, (std::vector<double>{1, 3, 0, 0, 0, -2 + 12}));
}

TEST(FunctionUnits, SwitchboardHonoursBreakers) {
    // v_bus, i1, i2, breaker1, breaker2 -> i_bus, v1, v2
    const auto out = eval({"b", "switchboard", {{"legs", "2"}}}, {400, 5, 7, 1, 0});
    EXPECT_EQ(out, (std::vector<double>{5, 400, 0}));
}

TEST(Plan, OrdersChainedUnitsAndConvertsUnits) {
    SystemDescription s;
    s.t_end = 1.0;
    s.step_policy = FixedStep{0.1};
    s.slaves = {{"src", "sine_source", {}, {}}, {"sink", "integrator", {}, {}}};
    // Declared in reverse dependency order on purpose.
    s.function_units = {{"second", "gain", {{"gain", "10"}}}, {"first", "gain", {{"gain", "2"}}}};
    s.signals = {{{"src", "y"}, {"first", "u"}}, {{"first", "y"}, {"second", "u"}}, {{"second", "y"}, {"sink", "u"}}};
    auto registry = builtin_registry();
    ValidationReport report;
    const auto topo = resolve_topology(s, SourceResolver(registry), report);
    ASSERT_TRUE(report.ok());
    const auto p = plan(topo, s);
    std::vector<double> values(topo.ports().size(), 0.0);
    values[*topo.find_port({"src", "y"})] = 0.5;
    p.evaluate(values, 0.0);
    EXPECT_EQ(values[*topo.find_port({"sink", "u"})], 10.0);
    EXPECT_EQ(p.init_passes(), 3u);
}

TEST(Plan, RefusesLoops) {
    SystemDescription s;
    s.t_end = 1.0;
    s.step_policy = FixedStep{0.1};
    s.slaves = {{"src", "sine_source", {}, {}}};
    s.function_units = {{"l", "gain", {{"gain", "2"}}}, {"r", "gain", {{"gain", "3"}}}};
    s.signals = {{{"l", "y"}, {"r", "u"}}, {{"r", "y"}, {"l", "u"}}};
    auto registry = builtin_registry();
    ValidationReport report;
    const auto topo = resolve_topology(s, SourceResolver(registry), report);
    EXPECT_THROW(plan(topo, s), AlgebraicLoop);
}
