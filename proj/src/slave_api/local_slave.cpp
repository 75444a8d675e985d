#include "cosim/local_slave.hpp"

#include <algorithm>
#include <cmath>

#include "cosim/errors.hpp"

namespace cosim {

std::string_view to_string(LifecycleState s) {
    switch (s) {
        case LifecycleState::created: return "created";
        case LifecycleState::initialized: return "initialized";
        case LifecycleState::stepping: return "stepping";
        case LifecycleState::terminated: return "terminated";
    }
    return "unknown";
}

LocalSlave::LocalSlave(std::string instance_id, std::unique_ptr<Model> model, SlaveDescriptor descriptor)
    : instance_id_(std::move(instance_id)), model_(std::move(model)), descriptor_(std::move(descriptor)) {}

void LocalSlave::require(bool condition, const char* operation) const {
    if (!condition) {
        throw InvalidState(std::string(operation) + " not allowed in state " + std::string(to_string(state_)) +
                           (is_setup_ && state_ == LifecycleState::created ? " (after setup)" : ""));
    }
}

void LocalSlave::setup(double t_start, double t_end) {
    require(state_ == LifecycleState::created && !is_setup_, "setup");
    model_->setup(t_start, t_end);
    time_ = t_start;
    is_setup_ = true;
}

void LocalSlave::initialize() {
    require(state_ == LifecycleState::created && is_setup_, "initialize");
    model_->initialize();
    state_ = LifecycleState::initialized;
}

void LocalSlave::set_inputs(std::span<const std::pair<std::size_t, double>> values) {
    require(state_ == LifecycleState::initialized || state_ == LifecycleState::stepping, "set_inputs");
    for (const auto& [index, value] : values) {
        if (index >= descriptor_.variables.size()) {
            throw UnknownVariable(instance_id_ + ": no variable with index " + std::to_string(index));
        }
        if (descriptor_.variables[index].causality != Causality::input) {
            throw NotAnInput(instance_id_ + ": '" + descriptor_.variables[index].name + "' is not an input");
        }
    }
    for (const auto& [index, value] : values) model_->set_input(index, value);
}

StepOutcome LocalSlave::do_step(double t, double dt) {
    require(state_ == LifecycleState::initialized || state_ == LifecycleState::stepping, "do_step");
    const auto reject = [&](std::string why) {
        return StepOutcome{StepOutcome::Status::failed, time_, std::move(why)};
    };
    if (std::abs(t - time_) > 1e-9 * std::max(1.0, std::abs(t))) {
        return reject("step starts at " + std::to_string(t) + " but slave is at " + std::to_string(time_));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) return reject("step size must be positive, got " + std::to_string(dt));
    if (!descriptor_.capabilities.supports_variable_step && first_dt_ &&
        std::abs(dt - *first_dt_) > 1e-12 * *first_dt_) {
        return reject("variable step size not supported");
    }

    in_step_ = true;
    try {
        model_->do_step(t, dt);
    } catch (const StepFailure& e) {
        in_step_ = false;
        return reject(e.what());
    }
    in_step_ = false;
    if (!first_dt_) first_dt_ = dt;
    state_ = LifecycleState::stepping;
    time_ = t + dt;
    return {StepOutcome::Status::ok, time_, {}};
}

std::vector<double> LocalSlave::get_outputs(std::span<const std::size_t> variables) {
    require(state_ == LifecycleState::initialized || state_ == LifecycleState::stepping, "get_outputs");
    std::vector<double> values;
    values.reserve(variables.size());
    for (auto index : variables) {
        if (index >= descriptor_.variables.size()) {
            throw UnknownVariable(instance_id_ + ": no variable with index " + std::to_string(index));
        }
        if (descriptor_.variables[index].causality != Causality::output) {
            throw NotAnOutput(instance_id_ + ": '" + descriptor_.variables[index].name + "' is not an output");
        }
        values.push_back(model_->get_output(index));
    }
    return values;
}

void LocalSlave::terminate() {
    require(state_ != LifecycleState::terminated, "terminate");
    state_ = LifecycleState::terminated;
}

void LocalSlave::reconfigure(const std::function<void(Model&)>& change) {
    require((state_ == LifecycleState::initialized || state_ == LifecycleState::stepping) && !in_step_,
            "reconfigure");
    change(*model_);
    auto updated = model_->descriptor();
    updated.model_id = descriptor_.model_id;
    updated.parameters = descriptor_.parameters;
    descriptor_ = std::move(updated);
}

void ModelRegistry::add(std::string model_id, std::vector<ParameterDescriptor> parameters, ModelFactory factory) {
    if (contains(model_id)) throw InvalidConfig("model '" + model_id + "' registered twice");
    entries_.push_back({std::move(model_id), std::move(parameters), std::move(factory)});
}

bool ModelRegistry::contains(const std::string& model_id) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.model_id == model_id; });
}

std::vector<std::string> ModelRegistry::model_ids() const {
    std::vector<std::string> ids;
    for (const auto& e : entries_) ids.push_back(e.model_id);
    return ids;
}

const ModelRegistry::Entry& ModelRegistry::entry(const std::string& model_id) const {
    for (const auto& e : entries_) {
        if (e.model_id == model_id) return e;
    }
    throw UnknownModel("unknown model '" + model_id + "'");
}

ParameterMap ModelRegistry::resolve(const Entry& e, const ParameterMap& overrides) const {
    ParameterMap values;
    for (const auto& p : e.parameters) values[p.name] = p.default_value;
    for (const auto& [name, value] : overrides) {
        if (!values.count(name)) {
            throw UnknownParameter("model '" + e.model_id + "' has no parameter '" + name + "'");
        }
        values[name] = value;
    }
    return values;
}

std::pair<std::unique_ptr<Model>, SlaveDescriptor> ModelRegistry::build(const std::string& model_id,
                                                                        const ParameterMap& parameters) const {
    const auto& e = entry(model_id);
    auto model = e.factory(resolve(e, parameters));
    auto descriptor = model->descriptor();
    descriptor.model_id = e.model_id;
    descriptor.parameters = e.parameters;
    check_descriptor(descriptor);
    return {std::move(model), std::move(descriptor)};
}

SlaveDescriptor ModelRegistry::describe(const std::string& model_id, const ParameterMap& parameters) const {
    return build(model_id, parameters).second;
}

std::unique_ptr<LocalSlave> ModelRegistry::create(const std::string& model_id, const ParameterMap& parameters,
                                                  std::string instance_id) const {
    auto [model, descriptor] = build(model_id, parameters);
    if (instance_id.empty()) instance_id = model_id;
    return std::make_unique<LocalSlave>(std::move(instance_id), std::move(model), std::move(descriptor));
}

SlaveDescriptor ModelRegistry::describe(const SlaveSpec& spec) {
    return describe(spec.model_id, spec.parameters);
}

std::unique_ptr<SlaveInstance> ModelRegistry::instantiate(const SlaveSpec& spec) {
    return create(spec.model_id, spec.parameters, spec.name);
}

}  // namespace cosim
