#pragma once

#include <optional>

#include "cosim/local_slave.hpp"
#include "cosim/rk4.hpp"

namespace cosim {

/// Adds every built-in model to `registry`:
///
///   msd_integral, msd_differential, msd_hybrid   mass-spring-damper in either causality
///   quarter_car_chassis, quarter_car_wheel       the two halves of a quarter car
///   sine_source, sum, integrator, static_gain    signal blocks
///   voltage_source, resistor                     a resistive DC circuit
///   generator, el_motor                          power plant demo
///   hull, thruster                               vessel demo
void register_builtin_models(ModelRegistry& registry);

/// A registry holding the built-in models.
ModelRegistry builtin_registry();

enum class CausalityMode { integral, differential };

/// Mass-spring-damper with variables (force, velocity, position).
///
/// Integral causality takes the force and outputs velocity (flow) and
/// position. Differential causality takes the velocity and outputs the
/// force m*dv/dt + d*v + k*x, with dv/dt from a backward difference of the
/// latched inputs (zero on the first step). A low-pass filter with time
/// constant ten micro steps tracks the velocity input so the velocity state
/// can be restored when switching back to integral causality.
class MassSpringDamper : public Model {
public:
    struct Parameters {
        double mass = 1.0;
        double damping = 0.0;
        double stiffness = 1.0;
        double position = 0.0;
        double velocity = 0.0;
        SolverConfig solver;
    };

    enum : std::size_t { force = 0, velocity = 1, position = 2 };

    MassSpringDamper(const Parameters& p, CausalityMode mode, bool switchable);

    SlaveDescriptor descriptor() const override;
    void set_input(std::size_t variable, double value) override;
    double get_output(std::size_t variable) const override;
    void do_step(double t, double dt) override;

    CausalityMode mode() const { return mode_; }
    bool switchable() const { return switchable_; }

    /// Swaps input and output roles so that outputs stay continuous:
    /// integral->differential seeds dv/dt with the current acceleration so the
    /// reported force equals the last force input; differential->integral
    /// restores the velocity state from the low-pass filter.
    void switch_causality(CausalityMode target);

    /// 0.5*(m*v^2 + k*x^2) with v the velocity state or input.
    double energy() const;
    double position_state() const { return x_; }
    double velocity_state() const { return mode_ == CausalityMode::integral ? v_ : v_in_; }
    double filtered_velocity() const { return v_filter_; }

private:
    double force_output() const;

    Parameters p_;
    CausalityMode mode_;
    bool switchable_;
    double x_ = 0.0;
    double v_ = 0.0;
    double force_in_ = 0.0;
    double v_in_ = 0.0;
    double v_prev_ = 0.0;
    double dt_prev_ = 0.0;
    bool have_prev_ = false;
    double accel_ = 0.0;
    std::optional<double> seeded_accel_;
    double v_filter_ = 0.0;
    double last_micro_step_ = 0.0;
};

/// Switches a hybrid mass-spring-damper slave between steps. Throws
/// InvalidState when called on a non-hybrid model, before initialization
/// or during a step.
void switch_causality(LocalSlave& slave, CausalityMode target);

enum class GeneratorMode { voltage_setting, current_injecting };

/// Switches a generator slave between voltage-setting and current-injecting.
void switch_causality(LocalSlave& slave, GeneratorMode target);

}  // namespace cosim
