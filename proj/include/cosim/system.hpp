#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cosim {

/// `entity.variable`, where entity names a slave or a function unit.
struct VariableRef {
    std::string entity;
    std::string variable;

    std::string to_string() const { return entity + "." + variable; }
    friend auto operator<=>(const VariableRef&, const VariableRef&) = default;
};

/// Throws InvalidConfig if `text` is not of the form `entity.variable`.
VariableRef parse_variable_ref(const std::string& text);

struct SlaveSpec {
    std::string name;
    std::string model_id;
    /// HOST:PORT of a slave provider; empty means in-process.
    std::optional<std::string> provider;
    std::map<std::string, double> parameters;

    friend bool operator==(const SlaveSpec&, const SlaveSpec&) = default;
};

/// One end of a power bond: the variable the entity outputs and the one it
/// receives. Whether the output is the effort or the flow is read from the
/// entity's descriptor.
struct BondSide {
    VariableRef output;
    VariableRef input;

    friend bool operator==(const BondSide&, const BondSide&) = default;
};

/// Reference direction for power accounting.
enum class BondOrientation { into_a, into_b };

struct PowerBond {
    std::string name;
    BondSide side_a;
    BondSide side_b;
    BondOrientation orientation = BondOrientation::into_a;

    friend bool operator==(const PowerBond&, const PowerBond&) = default;
};

struct SignalConnection {
    VariableRef source;
    VariableRef target;

    friend bool operator==(const SignalConnection&, const SignalConnection&) = default;
};

/// A function unit instantiation. Settings are kind-specific (arity, gain,
/// unit, ...) and interpreted by the function unit catalogue.
struct FunctionUnitSpec {
    std::string name;
    std::string kind;
    std::map<std::string, std::string> settings;

    friend bool operator==(const FunctionUnitSpec&, const FunctionUnitSpec&) = default;
};

struct FixedStep {
    double dt = 0.0;

    friend bool operator==(const FixedStep&, const FixedStep&) = default;
};

struct AdaptiveStep {
    double dt0 = 0.0;
    double dt_min = 0.0;
    double dt_max = 0.0;
    double tolerance = 1e-4;
    double safety = 0.8;
    double exponent = 0.5;
    double ratio_min = 0.5;
    double ratio_max = 2.0;

    friend bool operator==(const AdaptiveStep&, const AdaptiveStep&) = default;
};

using StepPolicy = std::variant<FixedStep, AdaptiveStep>;

/// Declarative model of a co-simulation.
struct SystemDescription {
    double t_start = 0.0;
    double t_end = 0.0;
    StepPolicy step_policy = FixedStep{};
    std::vector<SlaveSpec> slaves;
    std::vector<FunctionUnitSpec> function_units;
    std::vector<PowerBond> bonds;
    std::vector<SignalConnection> signals;

    const SlaveSpec* find_slave(const std::string& name) const;

    friend bool operator==(const SystemDescription&, const SystemDescription&) = default;
};

/// Initial step size of either policy.
double initial_step(const StepPolicy& policy);

}  // namespace cosim
