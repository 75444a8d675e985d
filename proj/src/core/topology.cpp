#include "cosim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "cosim/errors.hpp"

namespace cosim {

bool ValidationReport::has(FindingKind kind) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == kind; });
}

std::optional<std::size_t> Topology::find_entity(const std::string& name) const {
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (entities_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> Topology::find_port(const VariableRef& ref) const {
    const auto e = find_entity(ref.entity);
    if (!e) return std::nullopt;
    const auto v = entities_[*e].descriptor.find(ref.variable);
    if (!v) return std::nullopt;
    return entities_[*e].first_port + *v;
}

const VariableDescriptor& Topology::variable(std::size_t port) const {
    const auto& p = ports_.at(port);
    return entities_[p.entity].descriptor.variables[p.variable];
}

std::string Topology::port_name(std::size_t port) const {
    const auto& p = ports_.at(port);
    return entities_[p.entity].name + "." + entities_[p.entity].descriptor.variables[p.variable].name;
}

std::vector<std::vector<std::size_t>> Topology::dependency_graph() const {
    std::vector<std::vector<std::size_t>> next(ports_.size());
    for (const auto& link : links_) next[link.source].push_back(link.target);
    for (const auto& entity : entities_) {
        const auto& vars = entity.descriptor.variables;
        for (std::size_t out = 0; out < vars.size(); ++out) {
            if (vars[out].causality != Causality::output) continue;
            if (entity.kind == EntityKind::slave && !vars[out].direct_feedthrough) continue;
            for (std::size_t in = 0; in < vars.size(); ++in) {
                if (vars[in].causality == Causality::input) {
                    next[entity.first_port + in].push_back(entity.first_port + out);
                }
            }
        }
    }
    for (auto& succ : next) std::sort(succ.begin(), succ.end());
    return next;
}

namespace {

// Tarjan's strongly connected components, iterative.
std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<std::size_t>>& next) {
    const std::size_t n = next.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [node, edge] = frames.back();
            if (edge < next[node].size()) {
                const auto succ = next[node][edge++];
                if (index[succ] == unvisited) {
                    index[succ] = low[succ] = counter++;
                    stack.push_back(succ);
                    on_stack[succ] = true;
                    frames.emplace_back(succ, 0);
                } else if (on_stack[succ]) {
                    low[node] = std::min(low[node], index[succ]);
                }
                continue;
            }
            if (low[node] == index[node]) {
                std::vector<std::size_t> component;
                std::size_t member;
                do {
                    member = stack.back();
                    stack.pop_back();
                    on_stack[member] = false;
                    component.push_back(member);
                } while (member != node);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            const auto finished = node;
            frames.pop_back();
            if (!frames.empty()) {
                auto& parent = frames.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }
    return components;
}

// A cycle through the smallest port of a non-trivial component.
std::vector<std::size_t> cycle_in(const std::vector<std::size_t>& component,
                                  const std::vector<std::vector<std::size_t>>& next) {
    const std::set<std::size_t> members(component.begin(), component.end());
    const auto start = component.front();
    std::map<std::size_t, std::size_t> parent;
    std::vector<std::size_t> queue{start};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto node = queue[head];
        for (auto succ : next[node]) {
            if (!members.count(succ)) continue;
            if (succ == start) {
                std::vector<std::size_t> path{node};
                while (path.back() != start) path.push_back(parent.at(path.back()));
                std::reverse(path.begin(), path.end());
                path.push_back(start);
                return path;
            }
            if (!parent.count(succ)) {
                parent[succ] = node;
                queue.push_back(succ);
            }
        }
    }
    return {};
}

}  // namespace

std::vector<std::vector<std::string>> Topology::algebraic_loops() const {
    const auto next = dependency_graph();
    std::vector<std::vector<std::string>> loops;
    for (const auto& component : strongly_connected(next)) {
        if (component.size() < 2) continue;
        const auto cycle = cycle_in(component, next);
        std::vector<std::string> names;
        for (auto port : cycle) {
            const auto& name = entities_[ports_[port].entity].name;
            if (names.empty() || names.back() != name) names.push_back(name);
        }
        // The first and last port may sit on the same entity; rotate so the
        // loop is reported starting at an entity boundary.
        if (names.size() > 1 && names.front() == names.back()) names.pop_back();
        const auto smallest = std::min_element(names.begin(), names.end());
        std::rotate(names.begin(), smallest, names.end());
        names.push_back(names.front());
        loops.push_back(std::move(names));
    }
    std::sort(loops.begin(), loops.end());
    return loops;
}

std::size_t Topology::longest_chain() const {
    const auto next = dependency_graph();
    const std::size_t n = next.size();
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& succ : next) {
        for (auto s : succ) ++indegree[s];
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) order.push_back(i);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (auto s : next[order[head]]) {
            if (--indegree[s] == 0) order.push_back(s);
        }
    }
    if (order.size() != n) throw AlgebraicLoop("dependency graph is cyclic");

    // Hops are the input->output edges inside an entity.
    std::vector<std::size_t> depth(n, 0);
    std::size_t longest = 0;
    for (auto node : order) {
        for (auto s : next[node]) {
            const bool internal = ports_[node].entity == ports_[s].entity;
            depth[s] = std::max(depth[s], depth[node] + (internal ? 1 : 0));
            longest = std::max(longest, depth[s]);
        }
    }
    return longest;
}

std::string format_loop(const std::vector<std::string>& loop) {
    std::string out;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        if (i > 0) out += "->";
        out += loop[i];
    }
    return out;
}

Topology resolve_topology(const SystemDescription& sys, const DescriptorResolver& resolver,
                          ValidationReport& report) {
    Topology topo;
    std::map<std::string, std::size_t> seen;

    const auto add_entity = [&](const std::string& name, EntityKind kind, std::size_t spec_index,
                                const std::function<SlaveDescriptor()>& describe) {
        if (seen.count(name)) {
            report.add(FindingKind::duplicate_name, "duplicate entity name '" + name + "'");
            return;
        }
        seen[name] = spec_index;
        SlaveDescriptor descriptor;
        try {
            descriptor = describe();
        } catch (const UnknownModel& e) {
            report.add(FindingKind::unknown_model, name + ": " + e.what());
            return;
        } catch (const UnknownParameter& e) {
            report.add(FindingKind::unknown_parameter, name + ": " + e.what());
            return;
        } catch (const InvalidParameter& e) {
            report.add(FindingKind::invalid_parameter, name + ": " + e.what());
            return;
        } catch (const Error& e) {
            report.add(kind == EntityKind::function_unit ? FindingKind::invalid_function_unit
                                                         : FindingKind::unknown_model,
                       name + ": " + e.what());
            return;
        }
        Entity entity{name, kind, std::move(descriptor), topo.ports_.size(), spec_index};
        for (std::size_t v = 0; v < entity.descriptor.variables.size(); ++v) {
            topo.ports_.push_back({topo.entities_.size(), v});
        }
        topo.entities_.push_back(std::move(entity));
    };

    if (sys.slaves.empty()) report.add(FindingKind::no_slaves, "no slaves");
    for (std::size_t i = 0; i < sys.slaves.size(); ++i) {
        const auto& spec = sys.slaves[i];
        add_entity(spec.name, EntityKind::slave, i, [&] { return resolver.slave(spec); });
    }
    for (std::size_t i = 0; i < sys.function_units.size(); ++i) {
        const auto& spec = sys.function_units[i];
        add_entity(spec.name, EntityKind::function_unit, i, [&] { return resolver.function_unit(spec); });
    }

    // Resolves a reference and checks its causality; nullopt after a finding.
    const auto resolve = [&](const VariableRef& ref, Causality expected,
                             const std::string& context) -> std::optional<std::size_t> {
        const auto entity = topo.find_entity(ref.entity);
        if (!entity) {
            if (!seen.count(ref.entity)) {
                report.add(FindingKind::unknown_entity, context + ": unknown entity '" + ref.entity + "'");
            }
            return std::nullopt;
        }
        const auto port = topo.find_port(ref);
        if (!port) {
            report.add(FindingKind::unknown_variable, context + ": unknown variable '" + ref.to_string() + "'");
            return std::nullopt;
        }
        if (topo.variable(*port).causality != expected) {
            report.add(FindingKind::wrong_direction, context + ": '" + ref.to_string() + "' is not an " +
                                                         std::string(to_string(expected)));
            return std::nullopt;
        }
        return port;
    };

    const auto link = [&](std::size_t source, std::size_t target, const std::string& context) {
        const auto& from = topo.variable(source).unit;
        const auto& to = topo.variable(target).unit;
        if (!from.convertible_to(to)) {
            report.add(FindingKind::dimension_mismatch,
                       context + ": " + topo.port_name(source) + " " + from.dimension().to_string() + " -> " +
                           topo.port_name(target) + " " + to.dimension().to_string());
            return false;
        }
        topo.links_.push_back({source, target, from.scale_to_si(), to.scale_to_si()});
        return true;
    };

    for (const auto& bond : sys.bonds) {
        const auto context = "bond '" + bond.name + "'";
        const auto a_out = resolve(bond.side_a.output, Causality::output, context);
        const auto a_in = resolve(bond.side_a.input, Causality::input, context);
        const auto b_out = resolve(bond.side_b.output, Causality::output, context);
        const auto b_in = resolve(bond.side_b.input, Causality::input, context);
        if (!a_out || !a_in || !b_out || !b_in) continue;

        const auto side_role = [&](std::size_t out, std::size_t in) -> std::optional<bool> {
            const auto ko = topo.variable(out).kind;
            const auto ki = topo.variable(in).kind;
            if (ko == VariableKind::effort && ki == VariableKind::flow) return true;
            if (ko == VariableKind::flow && ki == VariableKind::effort) return false;
            return std::nullopt;
        };
        const auto a_effort = side_role(*a_out, *a_in);
        const auto b_effort = side_role(*b_out, *b_in);
        if (!a_effort || !b_effort) {
            report.add(FindingKind::invalid_bond,
                       context + ": each side must output one of effort/flow and receive the other");
            continue;
        }
        if (*a_effort == *b_effort) {
            report.add(FindingKind::invalid_bond, context + ": both sides output " +
                                                      std::string(*a_effort ? "effort" : "flow"));
            continue;
        }
        BondPorts ports;
        ports.name = bond.name;
        ports.side_a_outputs_effort = *a_effort;
        ports.orientation = bond.orientation;
        ports.effort_out = *a_effort ? *a_out : *b_out;
        ports.effort_side_flow_in = *a_effort ? *a_in : *b_in;
        ports.flow_out = *a_effort ? *b_out : *a_out;
        ports.flow_side_effort_in = *a_effort ? *b_in : *a_in;
        try {
            check_power_bond(topo.variable(ports.effort_out).unit, topo.variable(ports.flow_out).unit);
        } catch (const DimensionMismatch& e) {
            report.add(FindingKind::dimension_mismatch, context + ": " + e.what());
            continue;
        }
        const bool ok_effort = link(ports.effort_out, ports.flow_side_effort_in, context);
        const bool ok_flow = link(ports.flow_out, ports.effort_side_flow_in, context);
        if (ok_effort && ok_flow) topo.bonds_.push_back(std::move(ports));
    }

    for (const auto& signal : sys.signals) {
        const auto context = "signal " + signal.source.to_string() + "->" + signal.target.to_string();
        const auto source = resolve(signal.source, Causality::output, context);
        const auto target = resolve(signal.target, Causality::input, context);
        if (source && target) link(*source, *target, context);
    }

    std::vector<std::size_t> wired(topo.ports_.size(), 0);
    for (const auto& l : topo.links_) ++wired[l.target];
    for (std::size_t p = 0; p < topo.ports_.size(); ++p) {
        if (topo.variable(p).causality != Causality::input) continue;
        if (wired[p] == 0) {
            report.add(FindingKind::unwired_input, "unwired input " + topo.port_name(p));
        } else if (wired[p] > 1) {
            report.add(FindingKind::multiply_wired_input,
                       "input " + topo.port_name(p) + " wired " + std::to_string(wired[p]) + " times");
        }
    }
    return topo;
}

ValidationReport validate_system(const SystemDescription& sys, const DescriptorResolver& resolver) {
    ValidationReport report;
    const auto topo = resolve_topology(sys, resolver, report);

    for (const auto& loop : topo.algebraic_loops()) {
        report.add(FindingKind::algebraic_loop, "algebraic loop " + format_loop(loop));
    }

    const auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(sys.t_start) || !finite(sys.t_end) || sys.t_end < sys.t_start) {
        report.add(FindingKind::step_policy, "t_end must not precede t_start");
    }
    if (const auto* fixed = std::get_if<FixedStep>(&sys.step_policy)) {
        if (!(fixed->dt > 0.0) || !finite(fixed->dt)) {
            report.add(FindingKind::step_policy, "fixed step size must be positive");
        } else {
            // Slaves that cannot vary their step must see the same dt throughout,
            // including the last step.
            const double span = sys.t_end - sys.t_start;
            const double steps = span / fixed->dt;
            const bool divides = std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps);
            for (const auto& entity : topo.entities()) {
                if (entity.kind == EntityKind::slave && !entity.descriptor.capabilities.supports_variable_step &&
                    !divides) {
                    report.add(FindingKind::step_policy,
                               entity.name + ": fixed-step slave needs dt to divide the horizon");
                }
            }
        }
    } else {
        const auto& a = std::get<AdaptiveStep>(sys.step_policy);
        if (!(a.dt_min > 0.0) || !(a.dt_min <= a.dt0) || !(a.dt0 <= a.dt_max) || !finite(a.dt_max)) {
            report.add(FindingKind::step_policy, "step bounds must satisfy 0 < dt_min <= dt <= dt_max");
        }
        if (!(a.tolerance > 0.0)) report.add(FindingKind::step_policy, "tolerance must be positive");
        if (!(a.safety > 0.0) || !(a.exponent > 0.0)) {
            report.add(FindingKind::step_policy, "safety and exponent must be positive");
        }
        if (!(a.ratio_min > 0.0 && a.ratio_min < 1.0 && a.ratio_max > 1.0)) {
            report.add(FindingKind::step_policy, "step ratio bounds must satisfy 0 < min < 1 < max");
        }
    }
    return report;
}

}  // namespace cosim
