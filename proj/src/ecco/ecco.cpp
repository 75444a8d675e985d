#include "cosim/ecco.hpp"

#include <algorithm>
#include <cmath>

namespace cosim {

BondPower residual_power(const BondSample& s, bool side_a_outputs_effort, BondOrientation orientation) {
    const double into_flow_side = s.held_effort * s.flow;
    const double into_effort_side = -s.effort * s.held_flow;
    const double sign = orientation == BondOrientation::into_a ? 1.0 : -1.0;
    BondPower p;
    p.p1 = sign * (side_a_outputs_effort ? into_effort_side : into_flow_side);
    p.p2 = sign * (side_a_outputs_effort ? into_flow_side : into_effort_side);
    p.dp = -(p.p1 + p.p2);
    return p;
}

double error_indicator(std::span<const BondEnergy> bonds, double dt) {
    if (bonds.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& b : bonds) {
        const double scale = 0.5 * (std::abs(b.p1) + std::abs(b.p2)) * dt;
        const double r = b.de / std::max(scale, energy_floor);
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(bonds.size()));
}

StepController StepController::from(const AdaptiveStep& p) {
    return {p.tolerance, p.safety, p.exponent, p.ratio_min, p.ratio_max, p.dt_min, p.dt_max};
}

double propose_step(const StepController& c, double epsilon, double dt) {
    const double ratio = c.safety * std::pow(c.tolerance / std::max(epsilon, epsilon_floor), c.exponent);
    return std::clamp(dt * std::clamp(ratio, c.ratio_min, c.ratio_max), c.dt_min, c.dt_max);
}

EnergyAccountant::EnergyAccountant(const Topology& topology) {
    const auto scale = [&](std::size_t port) { return topology.variable(port).unit.scale_to_si(); };
    for (const auto& b : topology.bonds()) {
        bonds_.push_back({b.name, b.effort_out, b.effort_side_flow_in, b.flow_out, b.flow_side_effort_in,
                          scale(b.effort_out), scale(b.effort_side_flow_in), scale(b.flow_out),
                          scale(b.flow_side_effort_in), b.side_a_outputs_effort, b.orientation});
    }
    cumulative_.assign(bonds_.size(), 0.0);
}

EnergyReport EnergyAccountant::account(std::span<const double> held, std::span<const double> fresh, double dt) {
    EnergyReport report;
    report.bonds.reserve(bonds_.size());
    for (std::size_t k = 0; k < bonds_.size(); ++k) {
        const auto& b = bonds_[k];
        const BondSample s{held[b.flow_side_effort_in] * b.effort_in_scale,
                           held[b.effort_side_flow_in] * b.flow_in_scale, fresh[b.effort_out] * b.effort_out_scale,
                           fresh[b.flow_out] * b.flow_out_scale};
        const auto p = residual_power(s, b.side_a_outputs_effort, b.orientation);
        const double de = residual_energy(p.dp, dt);
        cumulative_[k] += de;
        report.bonds.push_back({b.name, p.p1, p.p2, p.dp, de, cumulative_[k]});
    }
    report.epsilon = error_indicator(report.bonds, dt);
    return report;
}

}  // namespace cosim
