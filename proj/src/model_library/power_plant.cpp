#include <array>
#include <cmath>

#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim {
namespace detail {
namespace {

// Behavioral generator with variables (voltage, current, frequency).
//
// Voltage-setting: outputs V = V_nom - r*i_f, where i_f lags the drawn current
// input. Current-injecting: takes the bus voltage and outputs the current it
// draws, -i_inj, with i_inj lagging P_set/V. Currents are positive when drawn
// from the bus. The frequency follows a power droop in both modes.
class Generator final : public Model {
public:
    struct Parameters {
        double voltage, droop_resistance, power, current_time_constant;
        double frequency, frequency_time_constant, frequency_droop, rated_power;
        SolverConfig solver;
    };

    Generator(const Parameters& p, GeneratorMode mode) : p_(p), mode_(mode), f_(p.frequency) {}

    SlaveDescriptor descriptor() const override {
        SlaveDescriptor d;
        if (mode_ == GeneratorMode::voltage_setting) {
            d.variables = {output("voltage", VariableKind::effort, "V"), input("current", VariableKind::flow, "A"),
                           output("frequency", VariableKind::signal, "Hz")};
        } else {
            d.variables = {input("voltage", VariableKind::effort, "V"), output("current", VariableKind::flow, "A"),
                           output("frequency", VariableKind::signal, "Hz")};
        }
        return d;
    }

    void set_input(std::size_t variable, double value) override {
        if (variable == 0) {
            v_in_ = value;
        } else {
            i_in_ = value;
        }
    }

    double get_output(std::size_t variable) const override {
        switch (variable) {
            case 0: return p_.voltage - p_.droop_resistance * i_;
            case 1: return -i_;
            default: return f_;
        }
    }

    void do_step(double t, double dt) override {
        const bool setting = mode_ == GeneratorMode::voltage_setting;
        const double target = setting ? i_in_ : (std::abs(v_in_) > 1e-9 ? p_.power / v_in_ : 0.0);
        std::array<double, 2> s{i_, f_};
        rk4_integrate(s, t, dt, p_.solver, [&](double, const std::array<double, 2>& y) {
            const double v = setting ? p_.voltage - p_.droop_resistance * y[0] : v_in_;
            const double f_ref = p_.frequency * (1.0 - p_.frequency_droop * v * y[0] / p_.rated_power);
            return std::array<double, 2>{(target - y[0]) / p_.current_time_constant,
                                         (f_ref - y[1]) / p_.frequency_time_constant};
        });
        check_finite(s[0], "current");
        check_finite(s[1], "frequency");
        i_ = s[0];
        f_ = s[1];
    }

    // The current state carries over; the new inputs start from the values
    // the other causality was exchanging.
    void switch_mode(GeneratorMode target) {
        if (target == mode_) return;
        if (target == GeneratorMode::current_injecting) {
            v_in_ = get_output(0);
        } else {
            i_in_ = i_;
        }
        mode_ = target;
    }

private:
    Parameters p_;
    GeneratorMode mode_;
    double i_ = 0.0;  // delivered current: filtered draw or injected current
    double f_;
    double v_in_ = 0.0;
    double i_in_ = 0.0;
};

// Separately excited DC motor driving a constant load torque:
//   L di/dt = V - R i - K w,   J dw/dt = K i - b w - T_load.
class ElMotor final : public Model {
public:
    struct Parameters {
        double r, l, k, j, b, load;
        SolverConfig solver;
    };

    explicit ElMotor(const Parameters& p) : p_(p) {}

    SlaveDescriptor descriptor() const override {
        return {{},
                {input("voltage", VariableKind::effort, "V"), output("current", VariableKind::flow, "A"),
                 output("torque", VariableKind::signal, "N*m"), output("speed", VariableKind::signal, "rad/s")},
                {},
                {}};
    }

    void set_input(std::size_t, double value) override { v_ = value; }

    double get_output(std::size_t variable) const override {
        switch (variable) {
            case 1: return s_[0];
            case 2: return p_.k * s_[0];
            default: return s_[1];
        }
    }

    void do_step(double t, double dt) override {
        const double v = v_;
        rk4_integrate(s_, t, dt, p_.solver, [&](double, const std::array<double, 2>& y) {
            return std::array<double, 2>{(v - p_.r * y[0] - p_.k * y[1]) / p_.l,
                                         (p_.k * y[0] - p_.b * y[1] - p_.load) / p_.j};
        });
        check_finite(s_[0], "current");
        check_finite(s_[1], "speed");
    }

private:
    Parameters p_;
    std::array<double, 2> s_{0.0, 0.0};
    double v_ = 0.0;
};

}  // namespace

void register_power_plant_models(ModelRegistry& registry) {
    registry.add("generator",
                 {{"voltage_setting", 1.0},
                  {"voltage", 400.0},
                  {"droop_resistance", 0.05},
                  {"power", 1e4},
                  {"current_time_constant", 0.05},
                  {"frequency", 50.0},
                  {"frequency_time_constant", 1.0},
                  {"frequency_droop", 0.05},
                  {"rated_power", 5e4},
                  {"h", 0.0}},
                 [](const ParameterMap& p) {
                     Generator::Parameters g{require_positive(p, "voltage"),
                                             require_non_negative(p, "droop_resistance"),
                                             require_finite(p, "power"),
                                             require_positive(p, "current_time_constant"),
                                             require_positive(p, "frequency"),
                                             require_positive(p, "frequency_time_constant"),
                                             require_non_negative(p, "frequency_droop"),
                                             require_positive(p, "rated_power"),
                                             {}};
                     g.solver.micro_step = require_non_negative(p, "h");
                     const auto mode = require_flag(p, "voltage_setting") ? GeneratorMode::voltage_setting
                                                                          : GeneratorMode::current_injecting;
                     return std::make_unique<Generator>(g, mode);
                 });
    registry.add("el_motor",
                 {{"resistance", 0.5},
                  {"inductance", 0.01},
                  {"motor_constant", 2.0},
                  {"inertia", 5.0},
                  {"friction", 0.1},
                  {"load_torque", 100.0},
                  {"h", 0.0}},
                 [](const ParameterMap& p) {
                     ElMotor::Parameters m{require_positive(p, "resistance"),
                                           require_positive(p, "inductance"),
                                           require_positive(p, "motor_constant"),
                                           require_positive(p, "inertia"),
                                           require_non_negative(p, "friction"),
                                           require_finite(p, "load_torque"),
                                           {}};
                     m.solver.micro_step = require_non_negative(p, "h");
                     return std::make_unique<ElMotor>(m);
                 });
}

}  // namespace detail

void switch_causality(LocalSlave& slave, GeneratorMode target) {
    slave.reconfigure([&](Model& model) {
        auto* generator = dynamic_cast<detail::Generator*>(&model);
        if (generator == nullptr) throw InvalidState("slave '" + slave.instance_id() + "' is not a generator");
        generator->switch_mode(target);
    });
}

}  // namespace cosim
