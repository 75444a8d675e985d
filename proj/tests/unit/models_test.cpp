#include <gtest/gtest.h>

#include <cmath>

#include "cosim/errors.hpp"
#include "cosim/model_library.hpp"
#include "oracles.hpp"

using namespace cosim;

namespace {

std::unique_ptr<LocalSlave> started(const std::string& id, const ParameterMap& p = {}) {
    auto s = builtin_registry().create(id, p);
    s->setup(0.0, 100.0);
    s->initialize();
    return s;
}

double output(LocalSlave& s, const std::string& name) {
    const std::size_t i[] = {s.descriptor().index_of(name)};
    return s.get_outputs(i)[0];
}

void input(LocalSlave& s, const std::string& name, double v) {
    const std::pair<std::size_t, double> x[] = {{s.descriptor().index_of(name), v}};
    s.set_inputs(x);
}

}  // namespace

TEST(MassSpringDamper, IntegralCausalityFollowsHarmonicSolution) {
    auto s = started("msd_integral", {{"x0", 1.0}, {"v0", 0.5}});
    input(*s, "force", 0.0);
    double t = 0.0;
    for (int i = 0; i < 300; ++i, t += 0.01) ASSERT_TRUE(s->do_step(t, 0.01).ok());
    const auto x = oracle::harmonic(1.0, 0.5, 3.0);
    EXPECT_NEAR(output(*s, "position"), x[0], 1e-9);
    EXPECT_NEAR(output(*s, "velocity"), x[1], 1e-9);
}

TEST(MassSpringDamper, DifferentialCausalityAnswersWithForce) {
    // Constant velocity: no inertia term after the first step.
    auto s = started("msd_differential", {{"m", 2.0}, {"d", 0.5}, {"k", 3.0}, {"x0", 0.1}});
    input(*s, "velocity", 0.2);
    double t = 0.0;
    for (int i = 0; i < 10; ++i, t += 0.1) ASSERT_TRUE(s->do_step(t, 0.1).ok());
    const double x = 0.1 + 0.2 * 1.0;
    EXPECT_NEAR(output(*s, "position"), x, 1e-12);
    EXPECT_NEAR(output(*s, "force"), 0.5 * 0.2 + 3.0 * x, 1e-12);
}

TEST(MassSpringDamper, HybridSwitchKeepsOutputsAndEnergy) {
    auto s = started("msd_hybrid", {{"x0", 1.0}, {"k", 4.0}});
    input(*s, "force", 0.3);
    double t = 0.0;
    for (int i = 0; i < 77; ++i, t += 0.01) s->do_step(t, 0.01);
    auto& m = dynamic_cast<MassSpringDamper&>(s->model());
    const double v = output(*s, "velocity");
    const double x = output(*s, "position");
    const double e = m.energy();

    switch_causality(*s, CausalityMode::differential);
    EXPECT_EQ(s->descriptor().variables[MassSpringDamper::force].causality, Causality::output);
    EXPECT_EQ(s->descriptor().variables[MassSpringDamper::velocity].causality, Causality::input);
    input(*s, "velocity", v);
    EXPECT_NEAR(output(*s, "force"), 0.3, 1e-12);
    EXPECT_EQ(output(*s, "position"), x);
    EXPECT_NEAR(m.energy(), e, 1e-12 * e);

    s->do_step(t, 0.01);
    switch_causality(*s, CausalityMode::integral);
    EXPECT_EQ(s->descriptor().variables[MassSpringDamper::velocity].causality, Causality::output);
}

TEST(MassSpringDamper, OnlyHybridModelsSwitch) {
    auto s = started("msd_integral");
    EXPECT_THROW(switch_causality(*s, CausalityMode::differential), InvalidState);
    auto fresh = builtin_registry().create("msd_hybrid");
    EXPECT_THROW(switch_causality(*fresh, CausalityMode::differential), InvalidState);
}

TEST(QuarterCar, HalvesAtRestStayAtRest) {
    auto chassis = started("quarter_car_chassis");
    auto wheel = started("quarter_car_wheel");
    input(*chassis, "wheel_velocity", 0.0);
    input(*wheel, "force", 0.0);
    for (double t = 0.0; t < 1.0; t += 0.01) {
        chassis->do_step(t, 0.01);
        wheel->do_step(t, 0.01);
    }
    EXPECT_EQ(output(*chassis, "force"), 0.0);
    EXPECT_EQ(output(*wheel, "position"), 0.0);
}

TEST(QuarterCar, SuspensionMayLiveInEitherHalf) {
    const auto registry = builtin_registry();
    EXPECT_TRUE(registry.describe("quarter_car_wheel", {{"suspension", 1}}).find("chassis_velocity"));
    EXPECT_TRUE(registry.describe("quarter_car_chassis", {{"suspension", 0}}).find("velocity"));
    EXPECT_FALSE(registry.describe("quarter_car_chassis", {{"suspension", 0}}).find("wheel_velocity"));
}

TEST(SignalBlocks, SineSourceIsExactAtCommunicationPoints) {
    auto s = started("sine_source", {{"amplitude", 2.0}, {"angular_frequency", 3.0}, {"phase", 0.1}, {"offset", 1.0}});
    s->do_step(0.0, 0.25);
    EXPECT_DOUBLE_EQ(output(*s, "y"), 2.0 * std::sin(3.0 * 0.25 + 0.1) + 1.0);
}

TEST(SignalBlocks, SumLagsOneStepAndIntegratorRamps) {
    auto sum = started("sum", {{"arity", 3}});
    input(*sum, "u1", 1.0);
    input(*sum, "u2", 2.0);
    input(*sum, "u3", 3.0);
    EXPECT_EQ(output(*sum, "y"), 0.0);
    sum->do_step(0.0, 0.1);
    EXPECT_EQ(output(*sum, "y"), 6.0);

    auto integ = started("integrator", {{"y0", 1.0}});
    input(*integ, "u", 2.0);
    for (int i = 0; i < 10; ++i) integ->do_step(0.1 * i, 0.1);
    EXPECT_NEAR(output(*integ, "y"), 3.0, 1e-12);
}

TEST(PowerPlant, GeneratorSwitchesBetweenModes) {
    auto g = started("generator");
    input(*g, "current", 10.0);
    g->do_step(0.0, 0.01);
    EXPECT_EQ(g->descriptor().variables[0].kind, VariableKind::effort);
    switch_causality(*g, GeneratorMode::current_injecting);
    EXPECT_EQ(g->descriptor().variables[0].causality, Causality::input);
    switch_causality(*g, GeneratorMode::voltage_setting);
    EXPECT_EQ(g->descriptor().variables[0].causality, Causality::output);
}

TEST(PowerPlant, MotorDrawsCurrentUnderVoltage) {
    auto m = started("el_motor", {{"load_torque", 0.0}});
    input(*m, "voltage", 100.0);
    for (int i = 0; i < 100; ++i) m->do_step(0.01 * i, 0.01);
    EXPECT_GT(output(*m, "speed"), 0.0);
    EXPECT_GT(output(*m, "current"), 0.0);
}

TEST(Vessel, ThrusterReportsForceAtItsPosition) {
    auto th = started("thruster", {{"thrust", 1000.0}, {"time_constant", 0.5}, {"azimuth", 0.0}, {"x", -5.0}, {"h", 1e-3}});
    th->do_step(0.0, 1.0);
    EXPECT_NEAR(output(*th, "force_x"), 1000.0 * (1.0 - std::exp(-2.0)), 1e-6);
    EXPECT_NEAR(output(*th, "force_y"), 0.0, 1e-9);
    EXPECT_EQ(output(*th, "position_x"), -5.0);
}
