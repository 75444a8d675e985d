#include <array>
#include <cmath>

#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim::detail {
namespace {

// Planar rigid hull with linear damping in body coordinates. Integrates the
// earth-fixed pose (north, east, heading) from the body velocities.
class Hull final : public Model {
public:
    struct Parameters {
        double mass, inertia, surge_damping, sway_damping, yaw_damping;
        SolverConfig solver;
    };

    explicit Hull(const Parameters& p) : p_(p) {}

    SlaveDescriptor descriptor() const override {
        return {{},
                {input("force_x", VariableKind::signal, "N"), input("force_y", VariableKind::signal, "N"),
                 input("moment_z", VariableKind::signal, "N*m"), output("surge", VariableKind::signal, "m/s"),
                 output("sway", VariableKind::signal, "m/s"), output("yaw_rate", VariableKind::signal, "rad/s"),
                 output("north", VariableKind::signal, "m"), output("east", VariableKind::signal, "m"),
                 output("heading", VariableKind::signal, "rad")},
                {},
                {}};
    }

    void set_input(std::size_t variable, double value) override { tau_[variable] = value; }
    double get_output(std::size_t variable) const override { return s_[variable - 3]; }

    void do_step(double t, double dt) override {
        const auto tau = tau_;
        rk4_integrate(s_, t, dt, p_.solver, [&](double, const std::array<double, 6>& y) {
            const double c = std::cos(y[5]), s = std::sin(y[5]);
            return std::array<double, 6>{
                (tau[0] + p_.mass * y[1] * y[2] - p_.surge_damping * y[0]) / p_.mass,
                (tau[1] - p_.mass * y[0] * y[2] - p_.sway_damping * y[1]) / p_.mass,
                (tau[2] - p_.yaw_damping * y[2]) / p_.inertia,
                c * y[0] - s * y[1],
                s * y[0] + c * y[1],
                y[2]};
        });
        for (double v : s_) check_finite(v, "hull state");
    }

private:
    Parameters p_;
    std::array<double, 3> tau_{};
    std::array<double, 6> s_{};  // u, v, r, north, east, heading
};

// Fixed-azimuth thruster whose thrust follows the set point with a first
// order lag. Reports its force vector and mounting position in body axes.
class Thruster final : public Model {
public:
    struct Parameters {
        double thrust, time_constant, azimuth;
        std::array<double, 3> position;
        SolverConfig solver;
    };

    explicit Thruster(const Parameters& p) : p_(p) {}

    SlaveDescriptor descriptor() const override {
        return {{},
                {output("force_x", VariableKind::signal, "N"), output("force_y", VariableKind::signal, "N"),
                 output("force_z", VariableKind::signal, "N"), output("position_x", VariableKind::signal, "m"),
                 output("position_y", VariableKind::signal, "m"), output("position_z", VariableKind::signal, "m")},
                {},
                {}};
    }

    void set_input(std::size_t, double) override {}

    double get_output(std::size_t variable) const override {
        switch (variable) {
            case 0: return thrust_[0] * std::cos(p_.azimuth);
            case 1: return thrust_[0] * std::sin(p_.azimuth);
            case 2: return 0.0;
            default: return p_.position[variable - 3];
        }
    }

    void do_step(double t, double dt) override {
        rk4_integrate(thrust_, t, dt, p_.solver, [&](double, const std::array<double, 1>& y) {
            return std::array<double, 1>{(p_.thrust - y[0]) / p_.time_constant};
        });
        check_finite(thrust_[0], "thrust");
    }

private:
    Parameters p_;
    std::array<double, 1> thrust_{0.0};
};

}  // namespace

void register_vessel_models(ModelRegistry& registry) {
    registry.add("hull",
                 {{"mass", 1e5},
                  {"inertia", 1e7},
                  {"surge_damping", 5e3},
                  {"sway_damping", 1e4},
                  {"yaw_damping", 1e6},
                  {"h", 0.0}},
                 [](const ParameterMap& p) {
                     Hull::Parameters h{require_positive(p, "mass"),
                                        require_positive(p, "inertia"),
                                        require_non_negative(p, "surge_damping"),
                                        require_non_negative(p, "sway_damping"),
                                        require_non_negative(p, "yaw_damping"),
                                        {}};
                     h.solver.micro_step = require_non_negative(p, "h");
                     return std::make_unique<Hull>(h);
                 });
    registry.add("thruster",
                 {{"thrust", 1e4},
                  {"time_constant", 2.0},
                  {"azimuth", 0.0},
                  {"x", 0.0},
                  {"y", 0.0},
                  {"z", 0.0},
                  {"h", 0.0}},
                 [](const ParameterMap& p) {
                     Thruster::Parameters th{require_finite(p, "thrust"),
                                             require_positive(p, "time_constant"),
                                             require_finite(p, "azimuth"),
                                             {require_finite(p, "x"), require_finite(p, "y"), require_finite(p, "z")},
                                             {}};
                     th.solver.micro_step = require_non_negative(p, "h");
                     return std::make_unique<Thruster>(th);
                 });
}

}  // namespace cosim::detail
