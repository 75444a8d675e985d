#include "cosim/report.hpp"

#include <algorithm>
#include <sstream>

#include "cosim/config.hpp"

namespace cosim {

std::string_view to_string(FindingKind kind) {
    switch (kind) {
        case FindingKind::no_slaves: return "no_slaves";
        case FindingKind::duplicate_name: return "duplicate_name";
        case FindingKind::unknown_model: return "unknown_model";
        case FindingKind::unknown_parameter: return "unknown_parameter";
        case FindingKind::invalid_parameter: return "invalid_parameter";
        case FindingKind::invalid_function_unit: return "invalid_function_unit";
        case FindingKind::unknown_entity: return "unknown_entity";
        case FindingKind::unknown_variable: return "unknown_variable";
        case FindingKind::wrong_direction: return "wrong_direction";
        case FindingKind::unwired_input: return "unwired_input";
        case FindingKind::multiply_wired_input: return "multiply_wired_input";
        case FindingKind::dimension_mismatch: return "dimension_mismatch";
        case FindingKind::invalid_bond: return "invalid_bond";
        case FindingKind::algebraic_loop: return "algebraic_loop";
        case FindingKind::step_policy: return "step_policy";
    }
    return "unknown";
}

std::string format_descriptor(const SlaveDescriptor& d) {
    std::size_t width = 8;
    for (const auto& v : d.variables) width = std::max(width, v.name.size());
    const auto pad = [](std::string s, std::size_t n) {
        s.resize(std::max(n, s.size()), ' ');
        return s;
    };

    std::ostringstream out;
    out << "model " << d.model_id << "\n";
    out << "variables:\n";
    out << "  " << pad("name", width) << "  " << pad("causality", 9) << "  " << pad("kind", 6) << "  "
        << pad("unit", 8) << "  feedthrough\n";
    for (const auto& v : d.variables) {
        out << "  " << pad(v.name, width) << "  " << pad(std::string(to_string(v.causality)), 9) << "  "
            << pad(std::string(to_string(v.kind)), 6) << "  " << pad(v.unit.symbol(), 8) << "  "
            << (v.causality == Causality::output ? (v.direct_feedthrough ? "yes" : "no") : "-") << "\n";
    }
    out << "parameters:\n";
    for (const auto& p : d.parameters) out << "  " << p.name << " = " << format_real(p.default_value) << "\n";
    out << "variable step: " << (d.capabilities.supports_variable_step ? "yes" : "no") << "\n";
    return out.str();
}

std::string format_findings(const ValidationReport& report) {
    std::ostringstream out;
    for (const auto& f : report.findings) out << to_string(f.kind) << ": " << f.message << "\n";
    return out.str();
}

}  // namespace cosim
