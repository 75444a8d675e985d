#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cosim/model_description.hpp"
#include "cosim/system.hpp"

namespace cosim {

enum class LifecycleState { created, initialized, stepping, terminated };

std::string_view to_string(LifecycleState s);

struct StepOutcome {
    enum class Status { ok, failed };

    Status status = Status::ok;
    double end_time = 0.0;
    std::string diagnostic;

    bool ok() const { return status == Status::ok; }
};

using ParameterMap = std::map<std::string, double>;

/// The master's view of one running subsimulator. Instances know nothing of
/// their peers; all routing happens in the master.
///
/// Calls on one instance must not overlap. An instance may be handed between
/// threads between calls.
class SlaveInstance {
public:
    virtual ~SlaveInstance() = default;

    virtual const SlaveDescriptor& descriptor() const = 0;
    virtual LifecycleState state() const = 0;

    /// Legal once, in state created.
    virtual void setup(double t_start, double t_end) = 0;
    /// Legal once, after setup. Outputs become readable.
    virtual void initialize() = 0;

    /// Values are in each variable's declared unit and held constant over
    /// the next step.
    virtual void set_inputs(std::span<const std::pair<std::size_t, double>> values) = 0;

    /// A rejected step is reported through the outcome; lifecycle misuse
    /// throws InvalidState.
    virtual StepOutcome do_step(double t, double dt) = 0;

    virtual std::vector<double> get_outputs(std::span<const std::size_t> variables) = 0;

    virtual void terminate() = 0;
};

/// Creates slave instances and answers descriptor queries for them.
class SlaveSource {
public:
    virtual ~SlaveSource() = default;
    virtual SlaveDescriptor describe(const SlaveSpec& spec) = 0;
    virtual std::unique_ptr<SlaveInstance> instantiate(const SlaveSpec& spec) = 0;
};

}  // namespace cosim
