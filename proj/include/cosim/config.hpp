#pragma once

// Text format for system descriptions.
//
//   # comment
//   [simulation]
//   t_start = 0
//   t_end = 10
//   step = fixed            # or adaptive
//   dt = 1e-3               # adaptive: initial step; also dt_min, dt_max,
//                           # tolerance, safety, exponent, ratio_min, ratio_max
//   [slave chassis]
//   model = quarter_car_chassis
//   provider = 127.0.0.1:7100   # optional
//   m = 400                     # any other key overrides a parameter
//   [bond suspension]
//   side_a = chassis.force, chassis.wheel_velocity    # output, input
//   side_b = wheel.velocity, wheel.force
//   orientation = into_a
//   [signal]
//   source = a.y
//   target = b.u
//   [fu neg]
//   kind = gain
//   gain = -1                   # other keys are settings of the kind

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosim/system.hpp"

namespace cosim {

struct Diagnostic {
    std::size_t line = 0;
    std::string message;

    std::string to_string() const { return "line " + std::to_string(line) + ": " + message; }
    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
    std::optional<SystemDescription> system;
    /// Every problem found, in line order. Empty iff `system` is set.
    std::vector<Diagnostic> diagnostics;
};

ParseResult parse_config(std::string_view text);

/// Reads and parses a file; an unreadable file is a diagnostic on line 0.
ParseResult load_config(const std::string& path);

/// Canonical text for a description; parse_config(emit_config(s)) == s.
std::string emit_config(const SystemDescription& sys);

/// Shortest decimal that reads back to the same double.
std::string format_real(double v);

/// Whole-string decimal parse; nullopt on any trailing garbage.
std::optional<double> parse_real(std::string_view text);

}  // namespace cosim
