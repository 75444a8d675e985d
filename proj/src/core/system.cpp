#include "cosim/system.hpp"

#include "cosim/errors.hpp"

namespace cosim {

VariableRef parse_variable_ref(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == text.size() ||
        text.find('.', dot + 1) != std::string::npos) {
        throw InvalidConfig("expected 'entity.variable', got '" + text + "'");
    }
    return {text.substr(0, dot), text.substr(dot + 1)};
}

const SlaveSpec* SystemDescription::find_slave(const std::string& name) const {
    for (const auto& s : slaves) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

double initial_step(const StepPolicy& policy) {
    if (const auto* fixed = std::get_if<FixedStep>(&policy)) return fixed->dt;
    return std::get<AdaptiveStep>(policy).dt0;
}

}  // namespace cosim
