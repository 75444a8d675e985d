#include "cosim/errors.hpp"

namespace cosim {

void throw_error(ErrorCode code, const std::string& what) {
    switch (code) {
        case ErrorCode::dimension_mismatch: throw DimensionMismatch(what);
        case ErrorCode::unknown_model: throw UnknownModel(what);
        case ErrorCode::unknown_parameter: throw UnknownParameter(what);
        case ErrorCode::invalid_parameter: throw InvalidParameter(what);
        case ErrorCode::unknown_variable: throw UnknownVariable(what);
        case ErrorCode::not_an_input: throw NotAnInput(what);
        case ErrorCode::not_an_output: throw NotAnOutput(what);
        case ErrorCode::invalid_state: throw InvalidState(what);
        case ErrorCode::algebraic_loop: throw AlgebraicLoop(what);
        case ErrorCode::protocol_error: throw ProtocolError(what);
        case ErrorCode::version_mismatch: throw VersionMismatch(what);
        case ErrorCode::spawn_limit_exceeded: throw SpawnLimitExceeded(what);
        case ErrorCode::connection_lost: throw ConnectionLost(what);
        case ErrorCode::timeout: throw Timeout(what);
        case ErrorCode::run_aborted: throw RunAborted(what);
        case ErrorCode::invalid_config: throw InvalidConfig(what);
        case ErrorCode::generic: break;
    }
    throw Error(code, what);
}

}  // namespace cosim
