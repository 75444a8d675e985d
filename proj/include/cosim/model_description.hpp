#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cosim/units.hpp"

namespace cosim {

enum class Causality { input, output };

/// Role of a variable in a power bond. Signals never take part in bonds.
enum class VariableKind { flow, effort, signal };

std::string_view to_string(Causality c);
std::string_view to_string(VariableKind k);

struct VariableDescriptor {
    std::string name;
    Causality causality = Causality::output;
    VariableKind kind = VariableKind::signal;
    Unit unit;
    /// Output depends on same-instant input values.
    bool direct_feedthrough = false;

    friend bool operator==(const VariableDescriptor&, const VariableDescriptor&) = default;
};

struct SlaveCapabilities {
    bool supports_variable_step = true;

    friend bool operator==(const SlaveCapabilities&, const SlaveCapabilities&) = default;
};

struct ParameterDescriptor {
    std::string name;
    double default_value = 0.0;

    friend bool operator==(const ParameterDescriptor&, const ParameterDescriptor&) = default;
};

/// Interface metadata of a model blueprint. Also used to describe the ports of
/// a function unit, in which case every output is direct feed-through.
struct SlaveDescriptor {
    std::string model_id;
    std::vector<VariableDescriptor> variables;
    SlaveCapabilities capabilities;
    std::vector<ParameterDescriptor> parameters;

    std::optional<std::size_t> find(std::string_view name) const;
    /// Throws UnknownVariable.
    std::size_t index_of(std::string_view name) const;

    friend bool operator==(const SlaveDescriptor&, const SlaveDescriptor&) = default;
};

/// Throws InvalidConfig on empty variable lists or duplicate names.
void check_descriptor(const SlaveDescriptor& descriptor);

}  // namespace cosim
