#include "cosim/net/provider.hpp"

#include <algorithm>

#include "cosim/errors.hpp"

namespace cosim::net {

namespace {

constexpr Millis poll_interval{100};
// How long a spawned slave waits for its master before giving up the slot.
constexpr Millis spawn_accept_window{30000};

ParameterMap to_map(const Parameters& p) { return {p.begin(), p.end()}; }
Parameters to_list(const ParameterMap& p) { return {p.begin(), p.end()}; }

msg::Error error_reply(const std::exception& e) {
    if (const auto* ce = dynamic_cast<const Error*>(&e)) {
        return {static_cast<std::uint64_t>(ce->code()), ce->what()};
    }
    return {static_cast<std::uint64_t>(ErrorCode::generic), e.what()};
}

// Waits for the next frame, polling so that `stop` is honoured. Returns
// nullopt when stopping.
std::optional<Message> next_message(Connection& c, const std::atomic<bool>& stop) {
    while (!stop) {
        if (c.readable(poll_interval)) return c.receive(control_timeout);
    }
    return std::nullopt;
}

// HELLO handshake on the serving side. False if the peer was turned away.
bool greet(Connection& c, const Message& first) {
    const auto* hello = std::get_if<msg::Hello>(&first);
    if (hello == nullptr) {
        c.send(msg::Error{static_cast<std::uint64_t>(ErrorCode::protocol_error), "expected HELLO"});
        return false;
    }
    if (hello->version != protocol_version) {
        c.send(msg::Error{static_cast<std::uint64_t>(ErrorCode::version_mismatch),
                          "protocol version " + std::to_string(hello->version) + " not supported (server speaks " +
                              std::to_string(protocol_version) + ")"});
        return false;
    }
    c.send(msg::HelloOk{});
    return true;
}

}  // namespace

SlaveProvider::SlaveProvider(const ModelRegistry& registry, ProviderConfig config)
    : registry_(registry), config_(std::move(config)), listener_(config_.host, config_.port) {
    if (config_.models.empty()) config_.models = registry_.model_ids();
    for (const auto& id : config_.models) {
        if (!registry_.contains(id)) throw InvalidConfig("provider cannot publish unknown model '" + id + "'");
    }
}

SlaveProvider::~SlaveProvider() { stop(); }

void SlaveProvider::start() {
    acceptor_ = std::thread([this] { accept_loop(); });
}

void SlaveProvider::serve() { accept_loop(); }

void SlaveProvider::stop() {
    stop_ = true;
    if (acceptor_.joinable()) acceptor_.join();
    listener_.close();
    std::list<Worker> workers;
    {
        std::lock_guard lock(threads_mutex_);
        workers.swap(workers_);
    }
    for (auto& w : workers) w.thread.join();
}

void SlaveProvider::launch(std::function<void()> job) {
    std::lock_guard lock(threads_mutex_);
    // Reap finished workers so long-lived providers do not accumulate threads.
    for (auto it = workers_.begin(); it != workers_.end();) {
        if (*it->done) {
            it->thread.join();
            it = workers_.erase(it);
        } else {
            ++it;
        }
    }
    auto done = std::make_shared<std::atomic<bool>>(false);
    workers_.push_back({std::thread([job = std::move(job), done] {
                            try {
                                job();
                            } catch (...) {
                            }
                            *done = true;
                        }),
                        done});
}

void SlaveProvider::accept_loop() {
    while (!stop_) {
        auto c = listener_.accept(poll_interval);
        if (!c.is_open()) continue;
        launch([this, c = std::make_shared<Connection>(std::move(c))]() mutable { serve_control(std::move(*c)); });
    }
}

void SlaveProvider::serve_control(Connection c) {
    try {
        auto first = next_message(c, stop_);
        if (!first || !greet(c, *first)) return;
        while (auto m = next_message(c, stop_)) {
            Message reply;
            try {
                reply = handle_control(*m);
            } catch (const std::exception& e) {
                reply = error_reply(e);
            }
            c.send(reply);
        }
    } catch (const Error&) {
        // Peer went away or sent garbage; nothing to clean up.
    }
}

Message SlaveProvider::handle_control(const Message& m) {
    const auto published = [&](const std::string& id) {
        if (std::find(config_.models.begin(), config_.models.end(), id) == config_.models.end()) {
            throw UnknownModel("unknown model '" + id + "'");
        }
    };
    if (std::holds_alternative<msg::ListModels>(m)) return msg::ModelList{config_.models};
    if (const auto* d = std::get_if<msg::Describe>(&m)) {
        published(d->model_id);
        return msg::Description{registry_.describe(d->model_id, to_map(d->parameters))};
    }
    if (const auto* s = std::get_if<msg::Spawn>(&m)) {
        published(s->model_id);
        std::lock_guard lock(spawn_mutex_);
        if (live_ >= config_.max_slaves) {
            throw SpawnLimitExceeded("provider already runs " + std::to_string(live_.load()) + " of " +
                                     std::to_string(config_.max_slaves) + " slaves");
        }
        auto slave = registry_.create(s->model_id, to_map(s->parameters), s->instance_id);
        auto listener = std::make_shared<Listener>(config_.host, 0);
        const auto port = listener->port();
        ++live_;
        launch([this, listener, slave = std::shared_ptr<LocalSlave>(std::move(slave))] {
            serve_slave(*listener, *slave);
            --live_;
        });
        return msg::Spawned{config_.host, port, s->instance_id};
    }
    throw ProtocolError("unexpected " + std::string(to_string(type_of(m))) + " on provider control connection");
}

void SlaveProvider::serve_slave(Listener& listener, LocalSlave& slave) {
    Connection c;
    const auto deadline = std::chrono::steady_clock::now() + spawn_accept_window;
    while (!stop_ && !c.is_open() && std::chrono::steady_clock::now() < deadline) c = listener.accept(poll_interval);
    listener.close();
    if (!c.is_open()) return;

    try {
        auto first = next_message(c, stop_);
        if (!first || !greet(c, *first)) return;
        while (auto m = next_message(c, stop_)) {
            Message reply;
            bool done = false;
            try {
                std::visit(
                    [&](const auto& body) {
                        using T = std::decay_t<decltype(body)>;
                        if constexpr (std::is_same_v<T, msg::Describe>) {
                            reply = msg::Description{slave.descriptor()};
                        } else if constexpr (std::is_same_v<T, msg::Setup>) {
                            slave.setup(body.t_start, body.t_end);
                            reply = msg::Ok{};
                        } else if constexpr (std::is_same_v<T, msg::Initialize>) {
                            slave.initialize();
                            reply = msg::Ok{};
                        } else if constexpr (std::is_same_v<T, msg::SetInputs>) {
                            std::vector<std::pair<std::size_t, double>> values(body.values.begin(), body.values.end());
                            slave.set_inputs(values);
                            reply = msg::Ok{};
                        } else if constexpr (std::is_same_v<T, msg::Step>) {
                            const auto outcome = slave.do_step(body.t, body.dt);
                            if (outcome.ok()) {
                                reply = msg::StepOk{outcome.end_time};
                            } else {
                                reply = msg::StepFail{outcome.end_time, outcome.diagnostic};
                            }
                        } else if constexpr (std::is_same_v<T, msg::GetOutputs>) {
                            std::vector<std::size_t> variables(body.variables.begin(), body.variables.end());
                            reply = msg::Outputs{slave.get_outputs(variables)};
                        } else if constexpr (std::is_same_v<T, msg::Terminate>) {
                            slave.terminate();
                            reply = msg::Terminated{};
                            done = true;
                        } else {
                            throw ProtocolError("unexpected " + std::string(to_string(type_of(Message{body}))) +
                                                " on slave connection");
                        }
                    },
                    *m);
            } catch (const std::exception& e) {
                reply = error_reply(e);
            }
            c.send(reply);
            if (done) return;
        }
    } catch (const Error&) {
        // Master vanished; the slave dies with its connection.
    }
}

RemoteSlave::RemoteSlave(Connection c, SlaveDescriptor d, Millis step_timeout)
    : connection_(std::move(c)), descriptor_(std::move(d)), step_timeout_(step_timeout) {}

std::unique_ptr<RemoteSlave> RemoteSlave::connect(const Endpoint& endpoint, Millis step_timeout) {
    auto c = Connection::connect(endpoint);
    const auto hello = expect<msg::HelloOk>(c.request(msg::Hello{}));
    if (hello.version != protocol_version) {
        throw VersionMismatch("slave at " + endpoint.to_string() + " speaks protocol " + std::to_string(hello.version));
    }
    auto d = expect<msg::Description>(c.request(msg::Describe{}));
    return std::unique_ptr<RemoteSlave>(new RemoteSlave(std::move(c), std::move(d.descriptor), step_timeout));
}

void RemoteSlave::setup(double t_start, double t_end) {
    expect<msg::Ok>(connection_.request(msg::Setup{t_start, t_end}));
}

void RemoteSlave::initialize() {
    expect<msg::Ok>(connection_.request(msg::Initialize{}));
    state_ = LifecycleState::initialized;
}

void RemoteSlave::set_inputs(std::span<const std::pair<std::size_t, double>> values) {
    msg::SetInputs m;
    m.values.assign(values.begin(), values.end());
    std::stable_sort(m.values.begin(), m.values.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    expect<msg::Ok>(connection_.request(m));
}

StepOutcome RemoteSlave::do_step(double t, double dt) {
    Message reply;
    try {
        connection_.send(msg::Step{t, dt});
        reply = connection_.receive(step_timeout_);
    } catch (const Timeout& e) {
        connection_.close();
        return {StepOutcome::Status::failed, t, std::string("slave timed out: ") + e.what()};
    } catch (const ConnectionLost& e) {
        return {StepOutcome::Status::failed, t, std::string("connection lost: ") + e.what()};
    }
    if (const auto* ok = std::get_if<msg::StepOk>(&reply)) {
        state_ = LifecycleState::stepping;
        return {StepOutcome::Status::ok, ok->end_time, {}};
    }
    if (const auto* fail = std::get_if<msg::StepFail>(&reply)) {
        return {StepOutcome::Status::failed, fail->end_time, fail->diagnostic};
    }
    expect<msg::StepOk>(std::move(reply));
    return {};
}

std::vector<double> RemoteSlave::get_outputs(std::span<const std::size_t> variables) {
    msg::GetOutputs m;
    m.variables.assign(variables.begin(), variables.end());
    auto reply = expect<msg::Outputs>(connection_.request(m));
    if (reply.values.size() != variables.size()) throw ProtocolError("OUTPUTS carries the wrong number of values");
    return std::move(reply.values);
}

void RemoteSlave::terminate() {
    if (state_ == LifecycleState::terminated) throw InvalidState("terminate not allowed in state terminated");
    state_ = LifecycleState::terminated;
    expect<msg::Terminated>(connection_.request(msg::Terminate{}));
    connection_.close();
}

ProviderClient::ProviderClient(const Endpoint& endpoint)
    : endpoint_(endpoint), connection_(Connection::connect(endpoint)) {
    const auto hello = expect<msg::HelloOk>(connection_.request(msg::Hello{}));
    if (hello.version != protocol_version) {
        throw VersionMismatch("provider at " + endpoint.to_string() + " speaks protocol " +
                              std::to_string(hello.version));
    }
}

std::vector<std::string> ProviderClient::list_models() {
    std::lock_guard lock(mutex_);
    return expect<msg::ModelList>(connection_.request(msg::ListModels{})).models;
}

SlaveDescriptor ProviderClient::describe(const std::string& model_id, const ParameterMap& parameters) {
    std::lock_guard lock(mutex_);
    return expect<msg::Description>(connection_.request(msg::Describe{model_id, to_list(parameters)})).descriptor;
}

msg::Spawned ProviderClient::spawn(const std::string& model_id, const ParameterMap& parameters,
                                   const std::string& instance_id) {
    std::lock_guard lock(mutex_);
    auto spawned = expect<msg::Spawned>(connection_.request(msg::Spawn{model_id, to_list(parameters), instance_id}));
    // A wildcard listen address is not connectable; reuse the address we reached the provider on.
    if (spawned.host.empty() || spawned.host == "0.0.0.0") spawned.host = endpoint_.host;
    return spawned;
}

Catalogue discover(const std::vector<std::string>& providers) {
    Catalogue catalogue;
    for (const auto& address : providers) {
        try {
            ProviderClient client(Endpoint::parse(address));
            std::vector<CatalogueEntry> found;
            for (const auto& id : client.list_models()) found.push_back({address, id, client.describe(id)});
            catalogue.entries.insert(catalogue.entries.end(), found.begin(), found.end());
        } catch (const Error& e) {
            catalogue.warnings.push_back("provider " + address + ": " + e.what());
        }
    }
    return catalogue;
}

ProviderClient& RoutingSlaveSource::client(const std::string& provider) {
    std::lock_guard lock(mutex_);
    const auto endpoint = Endpoint::parse(provider);
    for (auto& c : clients_) {
        if (c->endpoint().host == endpoint.host && c->endpoint().port == endpoint.port) return *c;
    }
    clients_.push_back(std::make_unique<ProviderClient>(endpoint));
    return *clients_.back();
}

SlaveDescriptor RoutingSlaveSource::describe(const SlaveSpec& spec) {
    if (!spec.provider) return local_.describe(spec);
    return client(*spec.provider).describe(spec.model_id, spec.parameters);
}

std::unique_ptr<SlaveInstance> RoutingSlaveSource::instantiate(const SlaveSpec& spec) {
    if (!spec.provider) return local_.instantiate(spec);
    const auto spawned = client(*spec.provider).spawn(spec.model_id, spec.parameters, spec.name);
    return RemoteSlave::connect({spawned.host, static_cast<std::uint16_t>(spawned.port)}, step_timeout_);
}

}  // namespace cosim::net
