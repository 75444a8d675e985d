#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cosim/model_library.hpp"
#include "model_util.hpp"

namespace cosim::detail {
namespace {

class SineSource final : public Model {
public:
    SineSource(double amplitude, double omega, double phase, double offset)
        : a_(amplitude), w_(omega), phi_(phase), c_(offset) {}

    SlaveDescriptor descriptor() const override { return {{}, {output("y", VariableKind::signal, "1")}, {}, {}}; }
    void setup(double t_start, double) override { t_ = t_start; }
    void set_input(std::size_t, double) override {}
    double get_output(std::size_t) const override { return c_ + a_ * std::sin(w_ * t_ + phi_); }
    void do_step(double t, double dt) override { t_ = t + dt; }

private:
    double a_, w_, phi_, c_;
    double t_ = 0.0;
};

// Adds its inputs inside the step, so the sum of the values held at t_i only
// appears at t_{i+1}.
class SumBlock final : public Model {
public:
    explicit SumBlock(std::size_t arity) : u_(arity, 0.0) {}

    SlaveDescriptor descriptor() const override {
        SlaveDescriptor d;
        for (std::size_t i = 0; i < u_.size(); ++i) {
            d.variables.push_back(input("u" + std::to_string(i + 1), VariableKind::signal, "1"));
        }
        d.variables.push_back(output("y", VariableKind::signal, "1"));
        return d;
    }
    void set_input(std::size_t variable, double value) override { u_[variable] = value; }
    double get_output(std::size_t) const override { return y_; }
    void do_step(double, double) override {
        y_ = 0.0;
        for (double u : u_) y_ += u;
    }

private:
    std::vector<double> u_;
    double y_ = 0.0;
};

class Integrator final : public Model {
public:
    explicit Integrator(double y0) : y_(y0) {}

    SlaveDescriptor descriptor() const override {
        return {{}, {input("u", VariableKind::signal, "1"), output("y", VariableKind::signal, "1")}, {}, {}};
    }
    void set_input(std::size_t, double value) override { u_ = value; }
    double get_output(std::size_t) const override { return y_; }
    void do_step(double, double dt) override {
        y_ += u_ * dt;
        check_finite(y_, "y");
    }

private:
    double y_;
    double u_ = 0.0;
};

class StaticGain final : public Model {
public:
    explicit StaticGain(double gain) : k_(gain) {}

    SlaveDescriptor descriptor() const override {
        return {{}, {input("u", VariableKind::signal, "1"), output("y", VariableKind::signal, "1", true)}, {}, {}};
    }
    void set_input(std::size_t, double value) override { u_ = value; }
    double get_output(std::size_t) const override { return k_ * u_; }
    void do_step(double, double) override {}

private:
    double k_;
    double u_ = 0.0;
};

class VoltageSource final : public Model {
public:
    explicit VoltageSource(double v) : v_(v) {}

    SlaveDescriptor descriptor() const override {
        return {{},
                {output("voltage", VariableKind::effort, "V"), input("current", VariableKind::flow, "A")},
                {},
                {}};
    }
    void set_input(std::size_t, double value) override { i_ = value; }
    double get_output(std::size_t) const override { return v_; }
    void do_step(double, double) override {}

private:
    double v_;
    double i_ = 0.0;
};

class Resistor final : public Model {
public:
    explicit Resistor(double r) : r_(r) {}

    SlaveDescriptor descriptor() const override {
        return {{},
                {input("voltage", VariableKind::effort, "V"), output("current", VariableKind::flow, "A", true)},
                {},
                {}};
    }
    void set_input(std::size_t, double value) override { v_ = value; }
    double get_output(std::size_t) const override { return v_ / r_; }
    void do_step(double, double) override {}

private:
    double r_;
    double v_ = 0.0;
};

}  // namespace

void register_signal_models(ModelRegistry& registry) {
    registry.add("sine_source", {{"amplitude", 1.0}, {"angular_frequency", 1.0}, {"phase", 0.0}, {"offset", 0.0}},
                 [](const ParameterMap& p) {
                     return std::make_unique<SineSource>(require_finite(p, "amplitude"),
                                                         require_finite(p, "angular_frequency"),
                                                         require_finite(p, "phase"), require_finite(p, "offset"));
                 });
    registry.add("sum", {{"arity", 2.0}}, [](const ParameterMap& p) {
        const double n = p.at("arity");
        if (!(n >= 1.0 && n <= 64.0) || n != std::floor(n)) throw InvalidParameter("arity must be an integer in 1..64");
        return std::make_unique<SumBlock>(static_cast<std::size_t>(n));
    });
    registry.add("integrator", {{"y0", 0.0}},
                 [](const ParameterMap& p) { return std::make_unique<Integrator>(require_finite(p, "y0")); });
    registry.add("static_gain", {{"gain", 1.0}},
                 [](const ParameterMap& p) { return std::make_unique<StaticGain>(require_finite(p, "gain")); });
    registry.add("voltage_source", {{"voltage", 12.0}},
                 [](const ParameterMap& p) { return std::make_unique<VoltageSource>(require_finite(p, "voltage")); });
    registry.add("resistor", {{"resistance", 6.0}},
                 [](const ParameterMap& p) { return std::make_unique<Resistor>(require_positive(p, "resistance")); });
}

}  // namespace cosim::detail
