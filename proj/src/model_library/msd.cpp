#include <array>

#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim {

MassSpringDamper::MassSpringDamper(const Parameters& p, CausalityMode mode, bool switchable)
    : p_(p), mode_(mode), switchable_(switchable), x_(p.position), v_(p.velocity) {
    v_in_ = v_;
    v_prev_ = v_;
    v_filter_ = v_;
    // Start in equilibrium with the initial state in integral causality.
    force_in_ = 0.0;
}

SlaveDescriptor MassSpringDamper::descriptor() const {
    using detail::input;
    using detail::output;
    SlaveDescriptor d;
    if (mode_ == CausalityMode::integral) {
        d.variables = {input("force", VariableKind::effort, "N"),
                       output("velocity", VariableKind::flow, "m/s"),
                       output("position", VariableKind::signal, "m")};
    } else {
        d.variables = {output("force", VariableKind::effort, "N", true),
                       input("velocity", VariableKind::flow, "m/s"),
                       output("position", VariableKind::signal, "m")};
    }
    return d;
}

void MassSpringDamper::set_input(std::size_t variable, double value) {
    if (variable == force) {
        force_in_ = value;
    } else {
        v_in_ = value;
    }
}

double MassSpringDamper::force_output() const {
    return p_.mass * accel_ + p_.damping * v_in_ + p_.stiffness * x_;
}

double MassSpringDamper::get_output(std::size_t variable) const {
    switch (variable) {
        case force: return force_output();
        case velocity: return v_;
        default: return x_;
    }
}

void MassSpringDamper::do_step(double t, double dt) {
    const auto n = p_.solver.steps_for(dt);
    last_micro_step_ = dt / static_cast<double>(n);

    if (mode_ == CausalityMode::integral) {
        std::array<double, 2> s{x_, v_};
        const double m = p_.mass, d = p_.damping, k = p_.stiffness, f = force_in_;
        rk4_integrate(s, t, dt, p_.solver, [&](double, const std::array<double, 2>& y) {
            return std::array<double, 2>{y[1], (f - d * y[1] - k * y[0]) / m};
        });
        detail::check_finite(s[0], "position");
        detail::check_finite(s[1], "velocity");
        x_ = s[0];
        v_ = s[1];
        return;
    }

    if (seeded_accel_) {
        accel_ = *seeded_accel_;
        seeded_accel_.reset();
    } else if (have_prev_ && dt_prev_ > 0.0) {
        accel_ = (v_in_ - v_prev_) / dt_prev_;
    } else {
        accel_ = 0.0;
    }

    // Position follows the held velocity; the filter state tracks it with
    // time constant ten micro steps.
    const double v = v_in_;
    const double tau = 10.0 * last_micro_step_;
    std::array<double, 2> s{x_, v_filter_};
    rk4_integrate(s, t, dt, p_.solver, [&](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{v, (v - y[1]) / tau};
    });
    detail::check_finite(s[0], "position");
    x_ = s[0];
    v_filter_ = s[1];
    v_prev_ = v_in_;
    dt_prev_ = dt;
    have_prev_ = true;
}

void MassSpringDamper::switch_causality(CausalityMode target) {
    if (!switchable_) throw InvalidState("model has fixed causality");
    if (target == mode_) return;
    if (target == CausalityMode::differential) {
        const double a = (force_in_ - p_.damping * v_ - p_.stiffness * x_) / p_.mass;
        accel_ = a;
        seeded_accel_ = a;
        v_in_ = v_;
        v_prev_ = v_;
        have_prev_ = true;
        v_filter_ = v_;
    } else {
        force_in_ = force_output();
        v_ = v_filter_;
        seeded_accel_.reset();
    }
    mode_ = target;
}

double MassSpringDamper::energy() const {
    const double v = velocity_state();
    return 0.5 * (p_.mass * v * v + p_.stiffness * x_ * x_);
}

void switch_causality(LocalSlave& slave, CausalityMode target) {
    slave.reconfigure([&](Model& model) {
        auto* msd = dynamic_cast<MassSpringDamper*>(&model);
        if (msd == nullptr) throw InvalidState("slave '" + slave.instance_id() + "' has no switchable causality");
        msd->switch_causality(target);
    });
}

namespace detail {

namespace {

MassSpringDamper::Parameters msd_parameters(const ParameterMap& p) {
    MassSpringDamper::Parameters out;
    out.mass = require_positive(p, "m");
    out.damping = require_non_negative(p, "d");
    out.stiffness = require_non_negative(p, "k");
    out.position = require_finite(p, "x0");
    out.velocity = require_finite(p, "v0");
    out.solver.micro_step = require_non_negative(p, "h");
    return out;
}

std::vector<ParameterDescriptor> msd_parameter_list() {
    return {{"m", 1.0}, {"d", 0.0}, {"k", 1.0}, {"x0", 0.0}, {"v0", 0.0}, {"h", 0.0}};
}

}  // namespace

void register_msd_models(ModelRegistry& registry) {
    registry.add("msd_integral", msd_parameter_list(), [](const ParameterMap& p) {
        return std::make_unique<MassSpringDamper>(msd_parameters(p), CausalityMode::integral, false);
    });
    registry.add("msd_differential", msd_parameter_list(), [](const ParameterMap& p) {
        return std::make_unique<MassSpringDamper>(msd_parameters(p), CausalityMode::differential, false);
    });
    auto hybrid = msd_parameter_list();
    hybrid.push_back({"differential", 0.0});
    registry.add("msd_hybrid", hybrid, [](const ParameterMap& p) {
        const auto mode = require_flag(p, "differential") ? CausalityMode::differential : CausalityMode::integral;
        return std::make_unique<MassSpringDamper>(msd_parameters(p), mode, true);
    });
}

}  // namespace detail
}  // namespace cosim
