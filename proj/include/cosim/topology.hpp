#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cosim/model_description.hpp"
#include "cosim/system.hpp"

namespace cosim {

/// Supplies interface descriptors for the entities of a system description.
class DescriptorResolver {
public:
    virtual ~DescriptorResolver() = default;
    /// Throws UnknownModel, UnknownParameter or InvalidParameter.
    virtual SlaveDescriptor slave(const SlaveSpec& spec) const = 0;
    /// Throws InvalidConfig for unknown kinds or bad settings.
    virtual SlaveDescriptor function_unit(const FunctionUnitSpec& spec) const = 0;
};

enum class FindingKind {
    no_slaves,
    duplicate_name,
    unknown_model,
    unknown_parameter,
    invalid_parameter,
    invalid_function_unit,
    unknown_entity,
    unknown_variable,
    wrong_direction,
    unwired_input,
    multiply_wired_input,
    dimension_mismatch,
    invalid_bond,
    algebraic_loop,
    step_policy,
};

struct Finding {
    FindingKind kind;
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    bool has(FindingKind kind) const;
    void add(FindingKind kind, std::string message) { findings.push_back({kind, std::move(message)}); }

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

enum class EntityKind { slave, function_unit };

struct Entity {
    std::string name;
    EntityKind kind;
    SlaveDescriptor descriptor;
    /// Global index of the entity's first variable; variables are contiguous
    /// and in descriptor order.
    std::size_t first_port = 0;
    /// Index into SystemDescription::slaves or ::function_units.
    std::size_t spec_index = 0;
};

struct PortInfo {
    std::size_t entity;
    std::size_t variable;
};

/// Output port feeding an input port, with the unit scales of both ends.
struct Link {
    std::size_t source;
    std::size_t target;
    double source_scale = 1.0;
    double target_scale = 1.0;
};

/// Ports of one power bond. The effort side outputs the effort and receives the
/// flow; the flow side does the opposite.
struct BondPorts {
    std::string name;
    std::size_t effort_out;
    std::size_t effort_side_flow_in;
    std::size_t flow_out;
    std::size_t flow_side_effort_in;
    bool side_a_outputs_effort = false;
    BondOrientation orientation = BondOrientation::into_a;
};

/// Flattened connection structure of a system: entities, global ports,
/// links and bonds. Built during validation and reused by planning and the
/// master.
class Topology {
public:
    const std::vector<Entity>& entities() const { return entities_; }
    const std::vector<PortInfo>& ports() const { return ports_; }
    const std::vector<Link>& links() const { return links_; }
    const std::vector<BondPorts>& bonds() const { return bonds_; }

    std::optional<std::size_t> find_entity(const std::string& name) const;
    std::optional<std::size_t> find_port(const VariableRef& ref) const;
    const VariableDescriptor& variable(std::size_t port) const;
    std::string port_name(std::size_t port) const;

    /// Same-instant dependency cycles, each as entity names with the first
    /// repeated at the end ("A", "B", "A").
    std::vector<std::vector<std::string>> algebraic_loops() const;

    /// Number of same-instant evaluation hops (function units and feed-through
    /// slave outputs) along the longest dependency path. Requires an acyclic
    /// topology.
    std::size_t longest_chain() const;

    /// Same-instant successors of each port.
    std::vector<std::vector<std::size_t>> dependency_graph() const;

private:
    friend Topology resolve_topology(const SystemDescription&, const DescriptorResolver&,
                                     ValidationReport&);

    std::vector<Entity> entities_;
    std::vector<PortInfo> ports_;
    std::vector<Link> links_;
    std::vector<BondPorts> bonds_;
};

/// Resolves descriptors and wiring; problems are appended to `findings` and
/// the offending items left out of the topology.
Topology resolve_topology(const SystemDescription& sys, const DescriptorResolver& resolver,
                          ValidationReport& findings);

/// Complete static check of a system description. Pure: equal inputs give
/// equal reports.
ValidationReport validate_system(const SystemDescription& sys, const DescriptorResolver& resolver);

std::string format_loop(const std::vector<std::string>& loop);

}  // namespace cosim
