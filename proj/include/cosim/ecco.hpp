#pragma once

#include <span>
#include <string>
#include <vector>

#include "cosim/system.hpp"
#include "cosim/topology.hpp"

namespace cosim {

inline constexpr double energy_floor = 1e-12;    // J
inline constexpr double epsilon_floor = 1e-15;

/// Powers of one bond over one macro step, in W, positive into the side
/// named by the bond orientation.
struct BondPower {
    double p1 = 0.0;  // side a
    double p2 = 0.0;  // side b
    double dp = 0.0;  // -(p1 + p2)
};

/// Values seen by one bond over a step, in SI units. `held_*` are the inputs
/// held over the step, the others the outputs at its end.
struct BondSample {
    double held_effort = 0.0;
    double held_flow = 0.0;
    double effort = 0.0;
    double flow = 0.0;
};

/// The flow side experienced held effort times fresh flow, the effort side
/// minus fresh effort times held flow. `side_a_outputs_effort` tells which
/// side is side a.
BondPower residual_power(const BondSample& s, bool side_a_outputs_effort, BondOrientation orientation);

inline double residual_energy(double dp, double dt) { return dp * dt; }

struct BondEnergy {
    std::string bond;
    double p1 = 0.0;
    double p2 = 0.0;
    double dp = 0.0;
    double de = 0.0;
    double cumulative_de = 0.0;

    friend bool operator==(const BondEnergy&, const BondEnergy&) = default;
};

struct EnergyReport {
    std::vector<BondEnergy> bonds;
    double epsilon = 0.0;

    friend bool operator==(const EnergyReport&, const EnergyReport&) = default;
};

/// RMS over bonds of the residual energy relative to the transmitted energy
/// 0.5*(|p1| + |p2|)*dt. Zero without bonds.
double error_indicator(std::span<const BondEnergy> bonds, double dt);

struct StepController {
    double tolerance = 1e-4;
    double safety = 0.8;
    double exponent = 0.5;
    double ratio_min = 0.5;
    double ratio_max = 2.0;
    double dt_min = 0.0;
    double dt_max = 0.0;

    static StepController from(const AdaptiveStep& policy);
};

/// Next macro step from the error of the last one.
double propose_step(const StepController& c, double epsilon, double dt);

/// Accumulates per-bond residual energy over a run.
class EnergyAccountant {
public:
    explicit EnergyAccountant(const Topology& topology);

    /// `held` holds the port values used during the step, `fresh` those at
    /// its end, both indexed by global port in port units.
    EnergyReport account(std::span<const double> held, std::span<const double> fresh, double dt);

private:
    struct Bond {
        std::string name;
        std::size_t effort_out, effort_side_flow_in, flow_out, flow_side_effort_in;
        double effort_out_scale, flow_in_scale, flow_out_scale, effort_in_scale;
        bool side_a_outputs_effort;
        BondOrientation orientation;
    };

    std::vector<Bond> bonds_;
    std::vector<double> cumulative_;
};

}  // namespace cosim
