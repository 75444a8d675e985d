#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cosim/local_slave.hpp"
#include "cosim/net/socket.hpp"

namespace cosim::net {

struct ProviderConfig {
    std::string host = "127.0.0.1";
    /// 0 picks a free port.
    std::uint16_t port = 0;
    /// Published model ids; empty publishes the whole registry.
    std::vector<std::string> models;
    std::size_t max_slaves = 64;
};

/// Publishes models of a registry and spawns slaves on request. Each
/// spawned slave gets its own listening endpoint and serves exactly one
/// master connection.
class SlaveProvider {
public:
    /// Binds immediately; throws InvalidConfig for model ids missing from the
    /// registry.
    SlaveProvider(const ModelRegistry& registry, ProviderConfig config);
    ~SlaveProvider();
    SlaveProvider(const SlaveProvider&) = delete;
    SlaveProvider& operator=(const SlaveProvider&) = delete;

    std::uint16_t port() const { return listener_.port(); }
    Endpoint endpoint() const { return {config_.host, port()}; }
    std::size_t live_slaves() const { return live_; }

    /// Serves on a background thread until stop().
    void start();
    /// Serves on the calling thread until stop() is called elsewhere.
    void serve();
    void stop();

private:
    void accept_loop();
    void serve_control(Connection c);
    void serve_slave(Listener& listener, LocalSlave& slave);
    Message handle_control(const Message& m);
    void launch(std::function<void()> job);

    const ModelRegistry& registry_;
    ProviderConfig config_;
    Listener listener_;
    std::atomic<bool> stop_{false};
    std::atomic<std::size_t> live_{0};
    std::thread acceptor_;
    std::mutex spawn_mutex_;

    struct Worker {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };
    std::mutex threads_mutex_;
    std::list<Worker> workers_;
};

/// Remote view of a slave behind a provider. Every call is one request and
/// its reply. Timeouts and lost connections during do_step come back as a
/// failed StepOutcome; elsewhere they throw.
class RemoteSlave final : public SlaveInstance {
public:
    static std::unique_ptr<RemoteSlave> connect(const Endpoint& endpoint, Millis step_timeout = default_step_timeout);

    const SlaveDescriptor& descriptor() const override { return descriptor_; }
    LifecycleState state() const override { return state_; }

    void setup(double t_start, double t_end) override;
    void initialize() override;
    void set_inputs(std::span<const std::pair<std::size_t, double>> values) override;
    StepOutcome do_step(double t, double dt) override;
    std::vector<double> get_outputs(std::span<const std::size_t> variables) override;
    void terminate() override;

private:
    RemoteSlave(Connection c, SlaveDescriptor d, Millis step_timeout);

    Connection connection_;
    SlaveDescriptor descriptor_;
    Millis step_timeout_;
    LifecycleState state_ = LifecycleState::created;
};

/// Control connection to a provider.
class ProviderClient {
public:
    /// Connects and negotiates the protocol version. Throws VersionMismatch
    /// or ConnectionLost.
    explicit ProviderClient(const Endpoint& endpoint);

    const Endpoint& endpoint() const { return endpoint_; }
    std::vector<std::string> list_models();
    SlaveDescriptor describe(const std::string& model_id, const ParameterMap& parameters = {});
    msg::Spawned spawn(const std::string& model_id, const ParameterMap& parameters, const std::string& instance_id);

private:
    Endpoint endpoint_;
    Connection connection_;
    std::mutex mutex_;
};

struct CatalogueEntry {
    std::string provider;
    std::string model_id;
    SlaveDescriptor descriptor;
};

struct Catalogue {
    std::vector<CatalogueEntry> entries;
    /// One per unreachable or misbehaving provider.
    std::vector<std::string> warnings;
};

/// Queries every provider; failures become warnings.
Catalogue discover(const std::vector<std::string>& providers);

/// Sends specs naming a provider to that provider and everything else to a
/// local source.
class RoutingSlaveSource final : public SlaveSource {
public:
    explicit RoutingSlaveSource(SlaveSource& local, Millis step_timeout = default_step_timeout)
        : local_(local), step_timeout_(step_timeout) {}

    SlaveDescriptor describe(const SlaveSpec& spec) override;
    std::unique_ptr<SlaveInstance> instantiate(const SlaveSpec& spec) override;

private:
    ProviderClient& client(const std::string& provider);

    SlaveSource& local_;
    Millis step_timeout_;
    std::mutex mutex_;
    std::vector<std::unique_ptr<ProviderClient>> clients_;
};

}  // namespace cosim::net
