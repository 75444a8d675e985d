#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "cosim/errors.hpp"
#include "cosim/net/wire.hpp"

namespace cosim::net {

using Millis = std::chrono::milliseconds;

inline constexpr Millis control_timeout{5000};
inline constexpr Millis default_step_timeout{60000};

/// HOST:PORT. Throws InvalidConfig.
struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    static Endpoint parse(const std::string& text);
    std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Connected TCP stream carrying frames. Errors surface as ConnectionLost
/// or Timeout.
class Connection {
public:
    Connection() = default;
    explicit Connection(int fd);
    Connection(Connection&& other) noexcept;
    Connection& operator=(Connection&& other) noexcept;
    ~Connection();

    static Connection connect(const Endpoint& to, Millis timeout = control_timeout);

    bool is_open() const { return fd_ >= 0; }
    void close();

    /// True once a frame (or a hangup) is waiting; false after `timeout`.
    bool readable(Millis timeout) const;

    void send(const Message& m, Millis timeout = control_timeout);
    Message receive(Millis timeout = control_timeout);

    /// Sends a request and returns the reply; an ERROR reply is rethrown as
    /// the matching exception.
    Message request(const Message& m, Millis timeout = control_timeout);

private:
    void write_all(const std::uint8_t* data, std::size_t size, Millis timeout);
    void read_all(std::uint8_t* data, std::size_t size, Millis timeout);

    int fd_ = -1;
};

/// Listening socket on an address; port 0 picks a free port.
class Listener {
public:
    Listener(const std::string& host, std::uint16_t port);
    Listener(Listener&& other) noexcept;
    Listener& operator=(Listener&&) = delete;
    ~Listener();

    std::uint16_t port() const { return port_; }

    /// Waits up to `timeout` for a connection; an empty Connection on timeout.
    Connection accept(Millis timeout);

    void close();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Throws the exception matching an ERROR message.
[[noreturn]] void raise(const msg::Error& e);

/// Expects `reply` to hold T; throws ProtocolError otherwise.
template <class T>
T expect(Message reply) {
    if (auto* error = std::get_if<msg::Error>(&reply)) raise(*error);
    if (auto* m = std::get_if<T>(&reply)) return std::move(*m);
    throw_error(ErrorCode::protocol_error,
                "unexpected reply " + std::string(to_string(type_of(reply))));
}

}  // namespace cosim::net
