#include <algorithm>
#include <queue>

#include "cosim/errors.hpp"
#include "cosim/function_units.hpp"

namespace cosim {

EvaluationPlan plan(const Topology& topology, const SystemDescription& sys) {
    const auto loops = topology.algebraic_loops();
    if (!loops.empty()) throw AlgebraicLoop("algebraic loop " + format_loop(loops.front()));

    const auto& entities = topology.entities();
    const auto& ports = topology.ports();
    const auto is_fu = [&](std::size_t entity) { return entities[entity].kind == EntityKind::function_unit; };

    // FU-to-FU dependencies; Kahn's algorithm with the lowest entity index
    // first keeps the order deterministic.
    std::vector<std::vector<std::size_t>> next(entities.size());
    std::vector<std::size_t> indegree(entities.size(), 0);
    for (const auto& link : topology.links()) {
        const auto from = ports[link.source].entity;
        const auto to = ports[link.target].entity;
        if (is_fu(from) && is_fu(to) && from != to) {
            next[from].push_back(to);
            ++indegree[to];
        }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t e = 0; e < entities.size(); ++e) {
        if (is_fu(e) && indegree[e] == 0) ready.push(e);
    }

    EvaluationPlan result;
    const auto copy = [](const Link& l) { return CopyOp{l.source, l.target, l.source_scale, l.target_scale}; };
    while (!ready.empty()) {
        const auto e = ready.top();
        ready.pop();
        for (const auto& link : topology.links()) {
            if (ports[link.target].entity == e) result.ops_.push_back(copy(link));
        }
        result.ops_.push_back(EvalOp{e});
        result.units_.push_back({e, entities[e].first_port,
                                 make_function_unit(sys.function_units.at(entities[e].spec_index))});
        for (auto s : next[e]) {
            if (--indegree[s] == 0) ready.push(s);
        }
    }
    for (const auto& link : topology.links()) {
        if (!is_fu(ports[link.target].entity)) result.ops_.push_back(copy(link));
    }
    result.init_passes_ = 1 + topology.longest_chain();
    return result;
}

void EvaluationPlan::evaluate(std::span<double> values, double t) const {
    std::size_t next_unit = 0;
    for (const auto& op : ops_) {
        if (const auto* c = std::get_if<CopyOp>(&op)) {
            const double v = values[c->from];
            values[c->to] = c->from_scale == c->to_scale ? v : v * c->from_scale / c->to_scale;
        } else {
            const auto& unit = units_[next_unit++];
            const auto n_in = unit.fu->input_count();
            unit.fu->evaluate(values.subspan(unit.first_port, n_in),
                              values.subspan(unit.first_port + n_in, unit.fu->output_count()), t);
        }
    }
}

}  // namespace cosim
