#include <array>

#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim::detail {
namespace {

// Road height seen by the tyre: a step of `height` at `time`.
struct Road {
    double height = 0.0;
    double time = 0.0;

    double at(double t) const { return t >= time ? height : 0.0; }
};

// Chassis mass. With the suspension inside, the partner's velocity comes in
// and the suspension force on the wheel goes out; the wheel position is
// tracked by integrating that velocity. Without it, the suspension force
// comes in and the chassis velocity goes out.
class Chassis final : public Model {
public:
    struct Parameters {
        double m, k, d, x0, v0, wheel_x0;
        bool suspension;
        SolverConfig solver;
    };

    explicit Chassis(const Parameters& p) : p_(p), s_{p.x0, p.v0, p.wheel_x0} {}

    SlaveDescriptor descriptor() const override {
        SlaveDescriptor d;
        if (p_.suspension) {
            d.variables = {input("wheel_velocity", VariableKind::flow, "m/s"),
                           output("force", VariableKind::effort, "N", true),
                           output("position", VariableKind::signal, "m"),
                           output("velocity", VariableKind::signal, "m/s")};
        } else {
            d.variables = {input("force", VariableKind::effort, "N"),
                           output("velocity", VariableKind::flow, "m/s"),
                           output("position", VariableKind::signal, "m")};
        }
        return d;
    }

    void set_input(std::size_t, double value) override { u_ = value; }

    double get_output(std::size_t variable) const override {
        if (p_.suspension) {
            switch (variable) {
                case 1: return p_.k * (s_[0] - s_[2]) + p_.d * (s_[1] - u_);
                case 2: return s_[0];
                default: return s_[1];
            }
        }
        return variable == 1 ? s_[1] : s_[0];
    }

    void do_step(double t, double dt) override {
        const double u = u_;
        rk4_integrate(s_, t, dt, p_.solver, [&](double, const std::array<double, 3>& y) {
            double force = u;
            if (p_.suspension) force = -p_.k * (y[0] - y[2]) - p_.d * (y[1] - u);
            return std::array<double, 3>{y[1], force / p_.m, p_.suspension ? u : 0.0};
        });
        check_finite(s_[0], "chassis position");
        check_finite(s_[1], "chassis velocity");
    }

private:
    Parameters p_;
    std::array<double, 3> s_;  // position, velocity, wheel position estimate
    double u_ = 0.0;
};

// Wheel mass on the tyre spring. The suspension variants mirror Chassis.
class Wheel final : public Model {
public:
    struct Parameters {
        double m, kt, k, d, x0, v0, chassis_x0;
        Road road;
        bool suspension;
        SolverConfig solver;
    };

    explicit Wheel(const Parameters& p) : p_(p), s_{p.x0, p.v0, p.chassis_x0} {}

    SlaveDescriptor descriptor() const override {
        SlaveDescriptor d;
        if (p_.suspension) {
            d.variables = {input("chassis_velocity", VariableKind::flow, "m/s"),
                           output("force", VariableKind::effort, "N", true),
                           output("position", VariableKind::signal, "m"),
                           output("velocity", VariableKind::signal, "m/s")};
        } else {
            d.variables = {input("force", VariableKind::effort, "N"),
                           output("velocity", VariableKind::flow, "m/s"),
                           output("position", VariableKind::signal, "m")};
        }
        return d;
    }

    void set_input(std::size_t, double value) override { u_ = value; }

    double get_output(std::size_t variable) const override {
        if (p_.suspension) {
            switch (variable) {
                case 1: return p_.k * (s_[0] - s_[2]) + p_.d * (s_[1] - u_);
                case 2: return s_[0];
                default: return s_[1];
            }
        }
        return variable == 1 ? s_[1] : s_[0];
    }

    void do_step(double t, double dt) override {
        const double u = u_;
        rk4_integrate(s_, t, dt, p_.solver, [&](double tau, const std::array<double, 3>& y) {
            double force = u;
            if (p_.suspension) force = -p_.k * (y[0] - y[2]) - p_.d * (y[1] - u);
            const double tyre = -p_.kt * (y[0] - p_.road.at(tau));
            return std::array<double, 3>{y[1], (force + tyre) / p_.m, p_.suspension ? u : 0.0};
        });
        check_finite(s_[0], "wheel position");
        check_finite(s_[1], "wheel velocity");
    }

private:
    Parameters p_;
    std::array<double, 3> s_;  // position, velocity, chassis position estimate
    double u_ = 0.0;
};

}  // namespace

void register_quarter_car_models(ModelRegistry& registry) {
    registry.add("quarter_car_chassis",
                 {{"m", 400.0}, {"k", 1.5e4}, {"d", 1e3}, {"x0", 0.0}, {"v0", 0.0}, {"wheel_x0", 0.0},
                  {"suspension", 1.0}, {"h", 0.0}},
                 [](const ParameterMap& p) {
                     Chassis::Parameters c{require_positive(p, "m"),    require_non_negative(p, "k"),
                                           require_non_negative(p, "d"), require_finite(p, "x0"),
                                           require_finite(p, "v0"),      require_finite(p, "wheel_x0"),
                                           require_flag(p, "suspension"), {}};
                     c.solver.micro_step = require_non_negative(p, "h");
                     return std::make_unique<Chassis>(c);
                 });
    registry.add("quarter_car_wheel",
                 {{"m", 40.0}, {"kt", 1.5e5}, {"k", 1.5e4}, {"d", 1e3}, {"x0", 0.0}, {"v0", 0.0},
                  {"chassis_x0", 0.0}, {"road_height", 0.0}, {"road_time", 0.0}, {"suspension", 0.0}, {"h", 0.0}},
                 [](const ParameterMap& p) {
                     Wheel::Parameters w{require_positive(p, "m"),
                                         require_non_negative(p, "kt"),
                                         require_non_negative(p, "k"),
                                         require_non_negative(p, "d"),
                                         require_finite(p, "x0"),
                                         require_finite(p, "v0"),
                                         require_finite(p, "chassis_x0"),
                                         {require_finite(p, "road_height"), require_finite(p, "road_time")},
                                         require_flag(p, "suspension"),
                                         {}};
                     w.solver.micro_step = require_non_negative(p, "h");
                     return std::make_unique<Wheel>(w);
                 });
}

}  // namespace cosim::detail
