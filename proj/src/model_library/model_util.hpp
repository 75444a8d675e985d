#pragma once

#include <cmath>
#include <string>

#include "cosim/errors.hpp"
#include "cosim/local_slave.hpp"

namespace cosim::detail {

inline VariableDescriptor input(std::string name, VariableKind kind, const char* unit) {
    return {std::move(name), Causality::input, kind, parse_unit(unit), false};
}

inline VariableDescriptor output(std::string name, VariableKind kind, const char* unit, bool feedthrough = false) {
    return {std::move(name), Causality::output, kind, parse_unit(unit), feedthrough};
}

inline double require_positive(const ParameterMap& p, const std::string& name) {
    const double v = p.at(name);
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter(name + " must be positive");
    return v;
}

inline double require_non_negative(const ParameterMap& p, const std::string& name) {
    const double v = p.at(name);
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter(name + " must be non-negative");
    return v;
}

inline double require_finite(const ParameterMap& p, const std::string& name) {
    const double v = p.at(name);
    if (!std::isfinite(v)) throw InvalidParameter(name + " must be finite");
    return v;
}

inline bool require_flag(const ParameterMap& p, const std::string& name) {
    const double v = p.at(name);
    if (v != 0.0 && v != 1.0) throw InvalidParameter(name + " must be 0 or 1");
    return v == 1.0;
}

inline void check_finite(double value, const char* what) {
    if (!std::isfinite(value)) throw StepFailure(std::string("diverged: ") + what + " is not finite");
}

void register_msd_models(ModelRegistry& registry);
void register_quarter_car_models(ModelRegistry& registry);
void register_signal_models(ModelRegistry& registry);
void register_power_plant_models(ModelRegistry& registry);
void register_vessel_models(ModelRegistry& registry);

}  // namespace cosim::detail
