#include <algorithm>
#include <cmath>
#include <cstring>

#include "cosim/errors.hpp"
#include "cosim/master.hpp"

namespace cosim {

namespace {

bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

bool bit_identical(const StepRecord& a, const StepRecord& b) {
    const auto scalars = [](const StepRecord& r) { return std::vector<double>{r.t, r.dt, r.energy.epsilon}; };
    if (a.index != b.index || !same_bits(scalars(a), scalars(b)) || !same_bits(a.held, b.held) ||
        !same_bits(a.values, b.values) || a.energy.bonds.size() != b.energy.bonds.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.energy.bonds.size(); ++i) {
        const auto& x = a.energy.bonds[i];
        const auto& y = b.energy.bonds[i];
        const double xs[] = {x.p1, x.p2, x.dp, x.de, x.cumulative_de};
        const double ys[] = {y.p1, y.p2, y.dp, y.de, y.cumulative_de};
        if (x.bond != y.bond || !same_bits(xs, ys)) return false;
    }
    return true;
}

namespace {

std::string describe_findings(const ValidationReport& report) {
    std::string text = "invalid system:";
    for (const auto& f : report.findings) text += "\n  " + f.message;
    return text;
}

}  // namespace

ValidationReport validate_system(const SystemDescription& sys, SlaveSource& source) {
    return validate_system(sys, SourceResolver(source));
}

SimulationRun::SimulationRun(SystemDescription sys, Topology topology, RunOptions options)
    : sys_(std::move(sys)), topology_(std::move(topology)), options_(options), t_(sys_.t_start) {}

SimulationRun::~SimulationRun() {
    for (auto& s : slaves_) {
        if (s && s->state() != LifecycleState::terminated) {
            try {
                s->terminate();
            } catch (...) {
            }
        }
    }
}

std::unique_ptr<SimulationRun> initialize_run(const SystemDescription& sys, SlaveSource& source,
                                              std::vector<std::shared_ptr<Observer>> observers,
                                              RunOptions options) {
    SourceResolver resolver(source);
    ValidationReport report = validate_system(sys, resolver);
    if (!report.ok()) throw InvalidConfig(describe_findings(report));
    ValidationReport again;
    auto topology = resolve_topology(sys, resolver, again);

    std::unique_ptr<SimulationRun> run(new SimulationRun(sys, std::move(topology), options));
    run->plan_ = plan(run->topology_, run->sys_);
    run->observers_ = std::move(observers);
    run->accountant_ = std::make_unique<EnergyAccountant>(run->topology_);
    run->values_.assign(run->topology_.ports().size(), 0.0);

    const auto& entities = run->topology_.entities();
    for (std::size_t e = 0; e < entities.size(); ++e) {
        if (entities[e].kind != EntityKind::slave) continue;
        SimulationRun::SlavePorts p{e, entities[e].first_port, {}, {}};
        const auto& vars = entities[e].descriptor.variables;
        for (std::size_t v = 0; v < vars.size(); ++v) {
            (vars[v].causality == Causality::input ? p.inputs : p.outputs).push_back(v);
        }
        run->ports_.push_back(std::move(p));
    }

    // Step policy. Slaves without variable step support force fixed steps.
    bool variable_ok = true;
    for (const auto& e : entities) {
        if (e.kind == EntityKind::slave && !e.descriptor.capabilities.supports_variable_step) {
            variable_ok = false;
            if (std::holds_alternative<AdaptiveStep>(sys.step_policy)) {
                run->warnings_.push_back("slave '" + e.name +
                                         "' does not support variable steps; using fixed steps of dt0");
            }
        }
    }
    if (const auto* a = std::get_if<AdaptiveStep>(&sys.step_policy)) {
        run->adaptive_ = variable_ok;
        run->controller_ = StepController::from(*a);
        run->dt_ = a->dt0;
    } else {
        run->dt_ = std::get<FixedStep>(sys.step_policy).dt;
    }

    const auto hardware = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const auto threads = options.threads == 0 ? std::min(run->ports_.size(), hardware) : options.threads;
    run->pool_ = std::make_unique<WorkerPool>(threads > 1 ? threads : 0);

    // Instantiation is sequential so that partial failures are simple to
    // unwind: the destructor terminates whatever was created.
    for (const auto& p : run->ports_) {
        const auto& spec = sys.slaves.at(entities[p.entity].spec_index);
        auto instance = source.instantiate(spec);
        if (!instance) throw InvalidState("slave source returned no instance for '" + spec.name + "'");
        if (instance->descriptor().variables != entities[p.entity].descriptor.variables) {
            throw InvalidState("slave '" + spec.name + "' does not match its description");
        }
        run->slaves_.push_back(std::move(instance));
    }
    for (auto& s : run->slaves_) s->setup(sys.t_start, sys.t_end);
    for (auto& s : run->slaves_) s->initialize();

    run->read_outputs(run->values_);
    run->plan_.evaluate(run->values_, sys.t_start);
    for (std::size_t pass = 0; pass < run->plan_.init_passes(); ++pass) {
        run->write_inputs();
        run->read_outputs(run->values_);
        run->plan_.evaluate(run->values_, sys.t_start);
    }

    const RunInfo info{run->sys_, run->topology_, sys.t_start, run->values_};
    run->notify([&](Observer& o) { o.on_initialized(info); });
    return run;
}

SlaveInstance& SimulationRun::slave(const std::string& name) {
    for (std::size_t i = 0; i < ports_.size(); ++i) {
        if (topology_.entities()[ports_[i].entity].name == name) return *slaves_[i];
    }
    throw UnknownVariable("no slave named '" + name + "'");
}

void SimulationRun::read_outputs(std::vector<double>& into) {
    pool_->run(slaves_.size(), [&](std::size_t i) {
        const auto& p = ports_[i];
        if (p.outputs.empty()) return;
        const auto values = slaves_[i]->get_outputs(p.outputs);
        for (std::size_t k = 0; k < p.outputs.size(); ++k) into[p.first_port + p.outputs[k]] = values[k];
    });
}

void SimulationRun::write_inputs() {
    pool_->run(slaves_.size(), [&](std::size_t i) {
        const auto& p = ports_[i];
        if (p.inputs.empty()) return;
        std::vector<std::pair<std::size_t, double>> pairs;
        pairs.reserve(p.inputs.size());
        for (auto v : p.inputs) pairs.emplace_back(v, values_[p.first_port + v]);
        slaves_[i]->set_inputs(pairs);
    });
}

bool SimulationRun::finished() const {
    return finished_ || aborted_ || t_ >= sys_.t_end;
}

// Fixed steps sit on the grid t_start + i*dt so that rounding does not
// accumulate; the last step is cut to end exactly at t_end.
double SimulationRun::next_time() const {
    if (!adaptive_) {
        const double next = sys_.t_start + static_cast<double>(index_ + 1) * dt_;
        if (next > sys_.t_end || sys_.t_end - next < 1e-9 * dt_) return sys_.t_end;
        return next;
    }
    const double remaining = sys_.t_end - t_;
    double dt = dt_;
    if (dt >= remaining) return sys_.t_end;
    if (remaining - dt < controller_.dt_min) {
        if (remaining <= controller_.dt_max) return sys_.t_end;
        dt = 0.5 * remaining;
    }
    return t_ + dt;
}

void SimulationRun::notify(const std::function<void(Observer&)>& call) {
    for (auto it = observers_.begin(); it != observers_.end();) {
        const auto start = std::chrono::steady_clock::now();
        bool drop = false;
        std::string why;
        try {
            call(**it);
        } catch (const std::exception& e) {
            drop = true;
            why = e.what();
        } catch (...) {
            drop = true;
            why = "unknown exception";
        }
        if (!drop && std::chrono::steady_clock::now() - start > options_.observer_timeout) {
            drop = true;
            why = "dispatch timeout exceeded";
        }
        if (drop) {
            warnings_.push_back("observer dropped: " + why);
            it = observers_.erase(it);
        } else {
            ++it;
        }
    }
}

void SimulationRun::abort(const std::string& reason) {
    aborted_ = true;
    const RunEnd end{true, t_, reason};
    notify([&](Observer& o) { o.on_terminated(end); });
    for (auto& s : slaves_) {
        try {
            if (s->state() != LifecycleState::terminated) s->terminate();
        } catch (...) {
        }
    }
    finished_ = true;
    throw RunAborted(reason);
}

StepRecord SimulationRun::step_once() {
    if (aborted_) throw InvalidState("run was aborted");
    if (finished()) throw InvalidState("run is finished");

    const double t = t_;
    const double t_next = next_time();
    const double dt = t_next - t;
    StepRecord record;
    record.index = index_;
    record.t = t;
    record.dt = dt;
    record.held = values_;

    try {
        write_inputs();
    } catch (const std::exception& e) {
        abort(std::string("set_inputs failed: ") + e.what());
    }

    std::vector<StepOutcome> outcomes(slaves_.size());
    try {
        pool_->run(slaves_.size(), [&](std::size_t i) { outcomes[i] = slaves_[i]->do_step(t, dt); });
    } catch (const std::exception& e) {
        abort(std::string("do_step failed: ") + e.what());
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& name = topology_.entities()[ports_[i].entity].name;
        if (!outcomes[i].ok()) {
            abort("slave '" + name + "' rejected step at t=" + std::to_string(t) + ": " + outcomes[i].diagnostic);
        }
        const double end = t + dt;
        if (std::abs(outcomes[i].end_time - end) > 1e-9 * std::max(1.0, std::abs(end))) {
            abort("slave '" + name + "' ended the step at " + std::to_string(outcomes[i].end_time));
        }
    }

    record.values = values_;
    try {
        read_outputs(record.values);
    } catch (const std::exception& e) {
        abort(std::string("get_outputs failed: ") + e.what());
    }
    plan_.evaluate(record.values, t_next);
    record.energy = accountant_->account(record.held, record.values, dt);

    notify([&](Observer& o) { o.on_step(record); });

    values_ = record.values;
    t_ = t_next;
    ++index_;
    if (adaptive_) dt_ = propose_step(controller_, record.energy.epsilon, dt);
    return record;
}

void SimulationRun::finish() {
    if (finished_) return;
    finished_ = true;
    for (auto& s : slaves_) {
        try {
            if (s->state() != LifecycleState::terminated) s->terminate();
        } catch (const std::exception& e) {
            warnings_.push_back(std::string("terminate failed: ") + e.what());
        }
    }
    const RunEnd end{false, t_, {}};
    notify([&](Observer& o) { o.on_terminated(end); });
}

SimulationResult SimulationRun::run_to_end() {
    SimulationResult result;
    while (!finished()) {
        auto record = step_once();
        ++result.steps;
        if (options_.keep_records) result.records.push_back(std::move(record));
    }
    if (aborted_) throw InvalidState("run was aborted");
    result.t_end = t_;
    result.final_values = values_;
    finish();
    result.warnings = warnings_;
    return result;
}

}  // namespace cosim
