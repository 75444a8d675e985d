#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cosim/ecco.hpp"
#include "cosim/function_units.hpp"
#include "cosim/slave.hpp"
#include "cosim/system.hpp"
#include "cosim/topology.hpp"

namespace cosim {

/// One accepted macro step from t to t + dt.
struct StepRecord {
    std::size_t index = 0;
    double t = 0.0;
    double dt = 0.0;
    /// Port values used during the step: inputs held over it.
    std::vector<double> held;
    /// Port values at t + dt: fresh outputs and the inputs for the next step.
    std::vector<double> values;
    EnergyReport energy;

    double end_time() const { return t + dt; }
    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Equality of every real by bit pattern, so NaN equals an identical NaN and
/// 0.0 differs from -0.0.
bool bit_identical(const StepRecord& a, const StepRecord& b);

struct RunInfo {
    const SystemDescription& system;
    const Topology& topology;
    double t_start;
    /// Port values after initialization.
    const std::vector<double>& values;
};

struct RunEnd {
    bool aborted = false;
    double t = 0.0;
    std::string reason;
};

/// Passive listener. Observers see everything and change nothing.
class Observer {
public:
    virtual ~Observer() = default;
    virtual void on_initialized(const RunInfo&) {}
    virtual void on_step(const StepRecord&) {}
    virtual void on_terminated(const RunEnd&) {}
};

struct RunOptions {
    /// An observer callback running longer than this, or throwing, is dropped.
    std::chrono::milliseconds observer_timeout{5000};
    /// Worker threads for slave calls; 0 picks one per slave, at most one
    /// per hardware thread. Remote slaves benefit from one per slave.
    std::size_t threads = 0;
    /// Keep every StepRecord in the result of run_to_end.
    bool keep_records = true;
};

struct SimulationResult {
    std::vector<StepRecord> records;
    std::size_t steps = 0;
    double t_end = 0.0;
    std::vector<double> final_values;
    std::vector<std::string> warnings;
};

/// Runs index-parallel jobs on a fixed set of threads and waits for all of
/// them.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t threads);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    /// Calls job(0..count-1) and returns once all calls have finished. The
    /// first exception thrown by a job is rethrown.
    void run(std::size_t count, const std::function<void(std::size_t)>& job);

private:
    void work();

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t count_ = 0;
    std::size_t next_ = 0;
    std::size_t finished_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

/// Explicit Jacobi co-simulation of one system.
class SimulationRun {
public:
    SimulationRun(const SimulationRun&) = delete;
    SimulationRun& operator=(const SimulationRun&) = delete;
    ~SimulationRun();

    double time() const { return t_; }
    std::size_t step_index() const { return index_; }
    bool finished() const;
    bool aborted() const { return aborted_; }

    const SystemDescription& system() const { return sys_; }
    const Topology& topology() const { return topology_; }
    const EvaluationPlan& plan() const { return plan_; }
    /// Current port values (see StepRecord::values).
    const std::vector<double>& values() const { return values_; }
    /// Step size the next step_once will use, before end-of-run trimming.
    double next_step_size() const { return dt_; }
    bool adaptive() const { return adaptive_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Direct access to one slave, for tests and tools.
    SlaveInstance& slave(const std::string& name);

    /// Throws RunAborted when a slave rejects the step; the run is then dead.
    StepRecord step_once();

    /// Steps to t_end and terminates the slaves.
    SimulationResult run_to_end();

    /// Terminates all slaves and notifies observers; idempotent.
    void finish();

private:
    friend std::unique_ptr<SimulationRun> initialize_run(const SystemDescription&, SlaveSource&,
                                                         std::vector<std::shared_ptr<Observer>>, RunOptions);

    SimulationRun(SystemDescription sys, Topology topology, RunOptions options);

    void read_outputs(std::vector<double>& into);
    void write_inputs();
    void abort(const std::string& reason);
    void notify(const std::function<void(Observer&)>& call);
    double next_time() const;

    struct SlavePorts {
        std::size_t entity;
        std::size_t first_port;
        std::vector<std::size_t> inputs;
        std::vector<std::size_t> outputs;
    };

    SystemDescription sys_;
    Topology topology_;
    EvaluationPlan plan_;
    RunOptions options_;
    std::vector<std::unique_ptr<SlaveInstance>> slaves_;
    std::vector<SlavePorts> ports_;
    std::unique_ptr<WorkerPool> pool_;
    std::vector<std::shared_ptr<Observer>> observers_;
    std::unique_ptr<EnergyAccountant> accountant_;
    std::vector<double> values_;
    std::vector<std::string> warnings_;
    bool adaptive_ = false;
    StepController controller_;
    double dt_ = 0.0;
    double t_ = 0.0;
    std::size_t index_ = 0;
    bool aborted_ = false;
    bool finished_ = false;
};

/// Validates, instantiates, sets up and initializes every slave, then
/// settles the inputs with plan().init_passes() evaluation passes. Throws
/// InvalidConfig on validation findings; slave errors propagate after the
/// slaves created so far are terminated.
std::unique_ptr<SimulationRun> initialize_run(const SystemDescription& sys, SlaveSource& source,
                                              std::vector<std::shared_ptr<Observer>> observers = {},
                                              RunOptions options = {});

/// Validation through a slave source.
ValidationReport validate_system(const SystemDescription& sys, SlaveSource& source);

}  // namespace cosim
