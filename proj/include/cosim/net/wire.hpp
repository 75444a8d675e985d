#pragma once

// Binary protocol between masters, slave providers and remote slaves.
//
// Frame: u32 big-endian payload length, u8 message type, payload. Payload
// fields are u64 big-endian integers, binary64 big-endian reals (bit
// patterns preserved, NaN payloads included), strings as u32 length + UTF-8
// bytes and lists as u32 count + elements.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cosim/model_description.hpp"

namespace cosim::net {

inline constexpr std::uint16_t protocol_version = 1;
inline constexpr std::size_t max_payload = 64u << 20;

enum class MessageType : std::uint8_t {
    hello = 0x01,
    hello_ok = 0x02,
    list_models = 0x03,
    model_list = 0x04,
    describe = 0x05,
    description = 0x06,
    spawn = 0x07,
    spawned = 0x08,
    setup = 0x09,
    initialize = 0x0A,
    set_inputs = 0x0B,
    step = 0x0C,
    step_ok = 0x0D,
    step_fail = 0x0E,
    get_outputs = 0x0F,
    outputs = 0x10,
    terminate = 0x11,
    terminated = 0x12,
    ok = 0x13,
    error = 0x14,
};

using Parameters = std::vector<std::pair<std::string, double>>;

namespace msg {

struct Hello { std::uint64_t version = protocol_version; };
struct HelloOk { std::uint64_t version = protocol_version; };
struct ListModels {};
struct ModelList { std::vector<std::string> models; };
struct Describe { std::string model_id; Parameters parameters; };
struct Description { SlaveDescriptor descriptor; };
struct Spawn { std::string model_id; Parameters parameters; std::string instance_id; };
struct Spawned { std::string host; std::uint64_t port = 0; std::string instance_id; };
struct Setup { double t_start = 0.0; double t_end = 0.0; };
struct Initialize {};
struct SetInputs { std::vector<std::pair<std::uint64_t, double>> values; };
struct Step { double t = 0.0; double dt = 0.0; };
struct StepOk { double end_time = 0.0; };
struct StepFail { double end_time = 0.0; std::string diagnostic; };
struct GetOutputs { std::vector<std::uint64_t> variables; };
struct Outputs { std::vector<double> values; };
struct Terminate {};
struct Terminated {};
struct Ok {};
struct Error { std::uint64_t code = 0; std::string text; };

}  // namespace msg

using Message = std::variant<msg::Hello, msg::HelloOk, msg::ListModels, msg::ModelList, msg::Describe,
                             msg::Description, msg::Spawn, msg::Spawned, msg::Setup, msg::Initialize,
                             msg::SetInputs, msg::Step, msg::StepOk, msg::StepFail, msg::GetOutputs, msg::Outputs,
                             msg::Terminate, msg::Terminated, msg::Ok, msg::Error>;

MessageType type_of(const Message& m);
std::string_view to_string(MessageType t);

/// Complete frame bytes for a message.
std::vector<std::uint8_t> encode(const Message& m);

/// Decodes one complete frame. Throws ProtocolError on truncation, trailing
/// bytes or an unknown type.
Message decode(std::span<const std::uint8_t> frame);

/// Decodes a payload of a known type.
Message decode_payload(std::uint8_t type, std::span<const std::uint8_t> payload);

}  // namespace cosim::net
