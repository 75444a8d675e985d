#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace cosim {

/// Internal solver settings of a built-in model.
struct SolverConfig {
    /// Requested micro step; non-positive selects a tenth of the macro step.
    double micro_step = 0.0;

    /// Number of equal micro steps covering a macro step of length dt.
    std::size_t steps_for(double dt) const {
        if (!(micro_step > 0.0)) return 10;
        const double n = std::ceil(dt / micro_step * (1.0 - 1e-12));
        return n < 1.0 ? 1 : static_cast<std::size_t>(n);
    }
};

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
template <std::size_t N, class F>
void rk4_step(std::array<double, N>& x, double t, double h, F&& f) {
    using State = std::array<double, N>;
    const auto axpy = [](const State& a, double s, const State& b) {
        State r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const State k1 = f(t, x);
    const State k2 = f(t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const State k3 = f(t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const State k4 = f(t + h, axpy(x, h, k3));
    for (std::size_t i = 0; i < N; ++i) {
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Integrates x over [t, t + dt] in equal RK4 micro steps.
template <std::size_t N, class F>
void rk4_integrate(std::array<double, N>& x, double t, double dt, const SolverConfig& solver, F&& f) {
    const auto n = solver.steps_for(dt);
    const double h = dt / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) rk4_step(x, t + static_cast<double>(i) * h, h, f);
}

}  // namespace cosim
