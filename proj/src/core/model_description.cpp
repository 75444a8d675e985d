#include "cosim/model_description.hpp"

#include <set>

#include "cosim/errors.hpp"

namespace cosim {

std::string_view to_string(Causality c) {
    return c == Causality::input ? "input" : "output";
}

std::string_view to_string(VariableKind k) {
    switch (k) {
        case VariableKind::flow: return "flow";
        case VariableKind::effort: return "effort";
        case VariableKind::signal: return "signal";
    }
    return "signal";
}

std::optional<std::size_t> SlaveDescriptor::find(std::string_view name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t SlaveDescriptor::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw UnknownVariable("'" + model_id + "' has no variable '" + std::string(name) + "'");
}

void check_descriptor(const SlaveDescriptor& descriptor) {
    if (descriptor.variables.empty()) {
        throw InvalidConfig("model '" + descriptor.model_id + "' declares no variables");
    }
    std::set<std::string_view> seen;
    for (const auto& v : descriptor.variables) {
        if (!seen.insert(v.name).second) {
            throw InvalidConfig("model '" + descriptor.model_id + "' declares '" + v.name + "' twice");
        }
    }
}

}  // namespace cosim
