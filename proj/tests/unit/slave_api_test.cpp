#include <gtest/gtest.h>

#include "cosim/errors.hpp"
#include "cosim/local_slave.hpp"
#include "cosim/model_library.hpp"

using namespace cosim;

TEST(LocalSlave, EnforcesLifecycle) {
    auto slave = builtin_registry().create("msd_integral");
    const std::pair<std::size_t, double> f[] = {{0, 1.0}};
    EXPECT_THROW(slave->do_step(0.0, 0.1), InvalidState);
    EXPECT_THROW(slave->initialize(), InvalidState);
    slave->setup(0.0, 1.0);
    EXPECT_THROW(slave->setup(0.0, 1.0), InvalidState);
    EXPECT_THROW(slave->set_inputs(f), InvalidState);
    slave->initialize();
    EXPECT_EQ(slave->state(), LifecycleState::initialized);
    slave->set_inputs(f);
    EXPECT_TRUE(slave->do_step(0.0, 0.1).ok());
    EXPECT_EQ(slave->state(), LifecycleState::stepping);
    slave->terminate();
    EXPECT_THROW(slave->terminate(), InvalidState);
    EXPECT_THROW(slave->do_step(0.1, 0.1), InvalidState);
}

TEST(LocalSlave, ChecksVariableRoles) {
    auto slave = builtin_registry().create("msd_integral");
    slave->setup(0.0, 1.0);
    slave->initialize();
    const std::pair<std::size_t, double> to_output[] = {{1, 1.0}};
    const std::pair<std::size_t, double> missing[] = {{9, 1.0}};
    EXPECT_THROW(slave->set_inputs(to_output), NotAnInput);
    EXPECT_THROW(slave->set_inputs(missing), UnknownVariable);
    const std::size_t input[] = {0};
    EXPECT_THROW(slave->get_outputs(input), NotAnOutput);
}

TEST(LocalSlave, RejectsStepsOutOfSequence) {
    auto slave = builtin_registry().create("msd_integral");
    slave->setup(0.0, 1.0);
    slave->initialize();
    const auto late = slave->do_step(0.5, 0.1);
    EXPECT_FALSE(late.ok());
    EXPECT_DOUBLE_EQ(late.end_time, 0.0);
    EXPECT_FALSE(slave->do_step(0.0, 0.0).ok());
    EXPECT_TRUE(slave->do_step(0.0, 0.1).ok());
    EXPECT_DOUBLE_EQ(slave->current_time(), 0.1);
}

TEST(Registry, ResolvesParameters) {
    const auto registry = builtin_registry();
    EXPECT_TRUE(registry.contains("quarter_car_chassis"));
    EXPECT_THROW(registry.describe("nope"), UnknownModel);
    EXPECT_THROW(registry.create("msd_integral", {{"mass", 1.0}}), UnknownParameter);
    EXPECT_THROW(registry.create("msd_integral", {{"m", -1.0}}), InvalidParameter);
    const auto d = registry.describe("msd_integral");
    EXPECT_EQ(d.model_id, "msd_integral");
    EXPECT_EQ(d.variables.size(), 3u);
}

TEST(Registry, RejectsDuplicateIds) {
    ModelRegistry registry;
    register_builtin_models(registry);
    EXPECT_THROW(register_builtin_models(registry), InvalidConfig);
}
