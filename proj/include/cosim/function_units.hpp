#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cosim/model_description.hpp"
#include "cosim/slave.hpp"
#include "cosim/system.hpp"
#include "cosim/topology.hpp"

namespace cosim {

/// A stateless transformation evaluated at communication points. The
/// descriptor lists all inputs first, then all outputs; every output is
/// direct feed-through.
class FunctionUnit {
public:
    virtual ~FunctionUnit() = default;

    const SlaveDescriptor& descriptor() const { return descriptor_; }
    std::size_t input_count() const { return inputs_; }
    std::size_t output_count() const { return descriptor_.variables.size() - inputs_; }

    /// outputs = g(inputs, t). Must not keep anything between calls.
    virtual void evaluate(std::span<const double> inputs, std::span<double> outputs, double t) const = 0;

protected:
    /// `variables` must be inputs followed by outputs.
    explicit FunctionUnit(SlaveDescriptor descriptor);

private:
    SlaveDescriptor descriptor_;
    std::size_t inputs_ = 0;
};

/// Builds a unit from the catalogue:
///
///   kind              settings                      ports
///   constant          value, unit                   y
///   gain              gain, unit, type              u -> y
///   sum               arity, unit, type             u1..un -> y
///   unit_convert      from, to, type                u -> y
///   splitter          arity, unit, type             u -> y1..yn
///   force_aggregator  arity                         F{j}_x/y/z, r{j}_x/y/z -> F_x/y/z, M_x/y/z
///   switchboard       legs                          v_bus, i1..in, breaker1..n -> i_bus, v1..vn
///
/// `type` is the variable kind of every port (signal, effort or flow), so
/// that linear units can sit inside a power bond. Throws InvalidConfig.
std::unique_ptr<FunctionUnit> make_function_unit(const FunctionUnitSpec& spec);

std::vector<std::string> function_unit_kinds();

/// Resolves slaves through a SlaveSource and function units through the
/// catalogue.
class SourceResolver : public DescriptorResolver {
public:
    explicit SourceResolver(SlaveSource& source) : source_(source) {}
    SlaveDescriptor slave(const SlaveSpec& spec) const override { return source_.describe(spec); }
    SlaveDescriptor function_unit(const FunctionUnitSpec& spec) const override;

private:
    SlaveSource& source_;
};

/// values[to] = values[from] converted between the two port units.
struct CopyOp {
    std::size_t from;
    std::size_t to;
    double from_scale = 1.0;
    double to_scale = 1.0;

    friend bool operator==(const CopyOp&, const CopyOp&) = default;
};

/// Evaluates the function unit with the given entity index.
struct EvalOp {
    std::size_t entity;

    friend bool operator==(const EvalOp&, const EvalOp&) = default;
};

using PlanOp = std::variant<CopyOp, EvalOp>;

/// Ordered copies and function unit invocations that compute every input of
/// a system from its slave outputs at one instant. Operates on a vector
/// indexed by global port (see Topology).
class EvaluationPlan {
public:
    const std::vector<PlanOp>& ops() const { return ops_; }

    /// Passes needed at initialization to settle feed-through chains.
    std::size_t init_passes() const { return init_passes_; }

    /// Fills all inputs (slave and function unit) and function unit outputs
    /// from the slave outputs already in `values`.
    void evaluate(std::span<double> values, double t) const;

private:
    friend EvaluationPlan plan(const Topology& topology, const SystemDescription& sys);

    struct Unit {
        std::size_t entity;
        std::size_t first_port;
        std::shared_ptr<const FunctionUnit> fu;
    };

    std::vector<PlanOp> ops_;
    std::vector<Unit> units_;
    std::size_t init_passes_ = 1;
};

/// Orders the function units of `topology` so that every unit runs after
/// the units feeding it. Throws AlgebraicLoop naming a cycle.
EvaluationPlan plan(const Topology& topology, const SystemDescription& sys);

}  // namespace cosim
