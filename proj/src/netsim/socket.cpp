#include "cosim/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace cosim::net {

namespace {

using Clock = std::chrono::steady_clock;

std::string sys_error(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

// Waits for `events` until `deadline`; false on timeout.
bool wait_for(int fd, short events, Clock::time_point deadline) {
    for (;;) {
        const auto left = std::chrono::duration_cast<Millis>(deadline - Clock::now()).count();
        if (left <= 0) return false;
        pollfd p{fd, events, 0};
        const int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
        if (r > 0) return true;
        if (r == 0) return false;
        if (errno != EINTR) throw ConnectionLost(sys_error("poll"));
    }
}

void set_nonblocking(int fd) {
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void tune(int fd) {
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    set_nonblocking(fd);
}

}  // namespace

Endpoint Endpoint::parse(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw InvalidConfig("expected HOST:PORT, got '" + text + "'");
    }
    Endpoint e;
    e.host = text.substr(0, colon);
    unsigned port = 0;
    const auto* first = text.data() + colon + 1;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, port);
    if (ec != std::errc{} || ptr != last || port == 0 || port > 65535) {
        throw InvalidConfig("bad port in '" + text + "'");
    }
    e.port = static_cast<std::uint16_t>(port);
    return e;
}

Connection::Connection(int fd) : fd_(fd) {}

Connection::Connection(Connection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Connection& Connection::operator=(Connection&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

Connection::~Connection() { close(); }

void Connection::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Connection Connection::connect(const Endpoint& to, Millis timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const auto port = std::to_string(to.port);
    if (const int rc = ::getaddrinfo(to.host.c_str(), port.c_str(), &hints, &found); rc != 0) {
        throw ConnectionLost("cannot resolve " + to.to_string() + ": " + ::gai_strerror(rc));
    }
    const auto deadline = Clock::now() + timeout;
    std::string last_error = "no address";
    for (auto* a = found; a != nullptr; a = a->ai_next) {
        const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
        if (fd < 0) continue;
        tune(fd);
        Connection c(fd);
        if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
            ::freeaddrinfo(found);
            return c;
        }
        if (errno != EINPROGRESS) {
            last_error = sys_error("connect");
            continue;
        }
        if (!wait_for(fd, POLLOUT, deadline)) {
            last_error = "connect timed out";
            continue;
        }
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err == 0) {
            ::freeaddrinfo(found);
            return c;
        }
        last_error = std::string("connect: ") + std::strerror(err);
    }
    ::freeaddrinfo(found);
    throw ConnectionLost("cannot connect to " + to.to_string() + ": " + last_error);
}

bool Connection::readable(Millis timeout) const {
    if (fd_ < 0) return true;
    return wait_for(fd_, POLLIN, Clock::now() + timeout);
}

void Connection::write_all(const std::uint8_t* data, std::size_t size, Millis timeout) {
    if (fd_ < 0) throw ConnectionLost("connection is closed");
    const auto deadline = Clock::now() + timeout;
    while (size > 0) {
        const auto n = ::send(fd_, data, size, MSG_NOSIGNAL);
        if (n > 0) {
            data += n;
            size -= static_cast<std::size_t>(n);
            continue;
        }
        if (n < 0 && errno == EINTR) continue;
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            if (!wait_for(fd_, POLLOUT, deadline)) throw Timeout("send timed out");
            continue;
        }
        throw ConnectionLost(sys_error("send"));
    }
}

void Connection::read_all(std::uint8_t* data, std::size_t size, Millis timeout) {
    if (fd_ < 0) throw ConnectionLost("connection is closed");
    const auto deadline = Clock::now() + timeout;
    while (size > 0) {
        const auto n = ::recv(fd_, data, size, 0);
        if (n > 0) {
            data += n;
            size -= static_cast<std::size_t>(n);
            continue;
        }
        if (n == 0) throw ConnectionLost("peer closed the connection");
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) {
            if (!wait_for(fd_, POLLIN, deadline)) throw Timeout("receive timed out");
            continue;
        }
        throw ConnectionLost(sys_error("recv"));
    }
}

void Connection::send(const Message& m, Millis timeout) {
    const auto bytes = encode(m);
    write_all(bytes.data(), bytes.size(), timeout);
}

Message Connection::receive(Millis timeout) {
    std::uint8_t header[5];
    read_all(header, sizeof header, timeout);
    const std::uint32_t length = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                                 (std::uint32_t{header[2]} << 8) | header[3];
    if (length > max_payload) throw ProtocolError("frame too large");
    std::vector<std::uint8_t> payload(length);
    read_all(payload.data(), payload.size(), timeout);
    return decode_payload(header[4], payload);
}

Message Connection::request(const Message& m, Millis timeout) {
    send(m, timeout);
    auto reply = receive(timeout);
    if (auto* e = std::get_if<msg::Error>(&reply)) raise(*e);
    return reply;
}

Listener::Listener(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* found = nullptr;
    const auto service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &found);
        rc != 0) {
        throw InvalidConfig("cannot resolve listen address " + host + ": " + ::gai_strerror(rc));
    }
    fd_ = ::socket(found->ai_family, found->ai_socktype, found->ai_protocol);
    if (fd_ < 0) {
        ::freeaddrinfo(found);
        throw ConnectionLost(sys_error("socket"));
    }
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd_, found->ai_addr, found->ai_addrlen) != 0 || ::listen(fd_, 64) != 0) {
        const auto why = sys_error("bind/listen");
        ::freeaddrinfo(found);
        close();
        throw ConnectionLost(why + " on port " + std::to_string(port));
    }
    ::freeaddrinfo(found);
    set_nonblocking(fd_);
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

Listener::Listener(Listener&& other) noexcept : fd_(other.fd_), port_(other.port_) { other.fd_ = -1; }

Listener::~Listener() { close(); }

void Listener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Connection Listener::accept(Millis timeout) {
    if (fd_ < 0) return {};
    if (!wait_for(fd_, POLLIN, Clock::now() + timeout)) return {};
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) return {};
    tune(fd);
    return Connection(fd);
}

void raise(const msg::Error& e) {
    const auto code = e.code >= 1 && e.code <= static_cast<std::uint64_t>(ErrorCode::invalid_config)
                          ? static_cast<ErrorCode>(e.code)
                          : ErrorCode::generic;
    throw_error(code, e.text);
}

}  // namespace cosim::net
