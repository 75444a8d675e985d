#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosim/slave.hpp"

namespace cosim {

/// Thrown by Model::do_step to reject a step.
class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The physics behind a local slave. LocalSlave owns the lifecycle and
/// argument checking, so implementations only see legal calls.
class Model {
public:
    virtual ~Model() = default;

    /// Current interface. May change only through a causality switch.
    virtual SlaveDescriptor descriptor() const = 0;

    virtual void setup(double /*t_start*/, double /*t_end*/) {}
    virtual void initialize() {}
    virtual void set_input(std::size_t variable, double value) = 0;
    virtual double get_output(std::size_t variable) const = 0;
    /// Advances internal state from t to t + dt with the latched inputs.
    virtual void do_step(double t, double dt) = 0;
};

class LocalSlave final : public SlaveInstance {
public:
    LocalSlave(std::string instance_id, std::unique_ptr<Model> model, SlaveDescriptor descriptor);

    const std::string& instance_id() const { return instance_id_; }
    const SlaveDescriptor& descriptor() const override { return descriptor_; }
    LifecycleState state() const override { return state_; }
    /// Master clock as seen by this instance.
    double current_time() const { return time_; }

    void setup(double t_start, double t_end) override;
    void initialize() override;
    void set_inputs(std::span<const std::pair<std::size_t, double>> values) override;
    StepOutcome do_step(double t, double dt) override;
    std::vector<double> get_outputs(std::span<const std::size_t> variables) override;
    void terminate() override;

    Model& model() { return *model_; }
    const Model& model() const { return *model_; }

    /// Runs `change` on the model between steps and re-reads its interface.
    /// Throws InvalidState unless initialized and not inside do_step.
    void reconfigure(const std::function<void(Model&)>& change);

private:
    void require(bool condition, const char* operation) const;

    std::string instance_id_;
    std::unique_ptr<Model> model_;
    SlaveDescriptor descriptor_;
    LifecycleState state_ = LifecycleState::created;
    bool is_setup_ = false;
    std::atomic<bool> in_step_{false};
    double time_ = 0.0;
    std::optional<double> first_dt_;
};

using ModelFactory = std::function<std::unique_ptr<Model>(const ParameterMap&)>;

/// In-process catalogue of models addressable by string id.
class ModelRegistry : public SlaveSource {
public:
    /// Throws InvalidConfig if the id is taken.
    void add(std::string model_id, std::vector<ParameterDescriptor> parameters, ModelFactory factory);

    bool contains(const std::string& model_id) const;
    std::vector<std::string> model_ids() const;

    /// Throws UnknownModel, UnknownParameter, InvalidParameter.
    SlaveDescriptor describe(const std::string& model_id, const ParameterMap& parameters = {}) const;
    std::unique_ptr<LocalSlave> create(const std::string& model_id, const ParameterMap& parameters = {},
                                       std::string instance_id = {}) const;

    SlaveDescriptor describe(const SlaveSpec& spec) override;
    std::unique_ptr<SlaveInstance> instantiate(const SlaveSpec& spec) override;

private:
    struct Entry {
        std::string model_id;
        std::vector<ParameterDescriptor> parameters;
        ModelFactory factory;
    };

    const Entry& entry(const std::string& model_id) const;
    ParameterMap resolve(const Entry& e, const ParameterMap& overrides) const;
    std::pair<std::unique_ptr<Model>, SlaveDescriptor> build(const std::string& model_id,
                                                             const ParameterMap& parameters) const;

    std::vector<Entry> entries_;
};

}  // namespace cosim
