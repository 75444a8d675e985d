#pragma once

#include <stdexcept>
#include <string>

namespace cosim {

/// Machine-readable error category. Values cross the wire in ERROR frames,
/// so existing numbers must never be reused.
enum class ErrorCode : unsigned {
    generic = 1,
    dimension_mismatch = 2,
    unknown_model = 3,
    unknown_parameter = 4,
    invalid_parameter = 5,
    unknown_variable = 6,
    not_an_input = 7,
    not_an_output = 8,
    invalid_state = 9,
    algebraic_loop = 10,
    protocol_error = 11,
    version_mismatch = 12,
    spawn_limit_exceeded = 13,
    connection_lost = 14,
    timeout = 15,
    run_aborted = 16,
    invalid_config = 17,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define COSIM_DEFINE_ERROR(Name, Code)                                  \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(Code, what) {}  \
    }

COSIM_DEFINE_ERROR(DimensionMismatch, ErrorCode::dimension_mismatch);
COSIM_DEFINE_ERROR(UnknownModel, ErrorCode::unknown_model);
COSIM_DEFINE_ERROR(UnknownParameter, ErrorCode::unknown_parameter);
COSIM_DEFINE_ERROR(InvalidParameter, ErrorCode::invalid_parameter);
COSIM_DEFINE_ERROR(UnknownVariable, ErrorCode::unknown_variable);
COSIM_DEFINE_ERROR(NotAnInput, ErrorCode::not_an_input);
COSIM_DEFINE_ERROR(NotAnOutput, ErrorCode::not_an_output);
COSIM_DEFINE_ERROR(InvalidState, ErrorCode::invalid_state);
COSIM_DEFINE_ERROR(AlgebraicLoop, ErrorCode::algebraic_loop);
COSIM_DEFINE_ERROR(ProtocolError, ErrorCode::protocol_error);
COSIM_DEFINE_ERROR(VersionMismatch, ErrorCode::version_mismatch);
COSIM_DEFINE_ERROR(SpawnLimitExceeded, ErrorCode::spawn_limit_exceeded);
COSIM_DEFINE_ERROR(ConnectionLost, ErrorCode::connection_lost);
COSIM_DEFINE_ERROR(Timeout, ErrorCode::timeout);
COSIM_DEFINE_ERROR(RunAborted, ErrorCode::run_aborted);
COSIM_DEFINE_ERROR(InvalidConfig, ErrorCode::invalid_config);

#undef COSIM_DEFINE_ERROR

/// Re-raises an error received from a peer as the matching local exception type.
[[noreturn]] void throw_error(ErrorCode code, const std::string& what);

}  // namespace cosim
