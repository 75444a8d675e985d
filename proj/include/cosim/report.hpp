#pragma once

#include <string>

#include "cosim/model_description.hpp"
#include "cosim/topology.hpp"

namespace cosim {

/// Human-readable interface listing: variables with causality, kind, unit and
/// feed-through, then parameters with defaults.
std::string format_descriptor(const SlaveDescriptor& d);

/// One line per finding, prefixed with its kind.
std::string format_findings(const ValidationReport& report);

std::string_view to_string(FindingKind kind);

}  // namespace cosim
