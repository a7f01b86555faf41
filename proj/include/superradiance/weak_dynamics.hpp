// weak_dynamics.hpp - weak sample-reservoir coupling: closed-form sech pulse, its
// Dicke limit (g = 0), and the underlying ODE kept as a cross-check.

#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "core_model.hpp"
#include "trajectory.hpp"

namespace superradiance {

/// tau_c = 2 / ((1+alpha) N gamma)
inline double weak_tau_c(const DerivedParams& d) { return 2.0 / ((1.0 + d.alpha) * d.n() * d.sample.gamma); }

/// t0 = tau_c ln N
inline double weak_delay(const DerivedParams& d) { return weak_tau_c(d) * std::log(d.n()); }

inline double weak_default_window(const DerivedParams& d) { return weak_delay(d) + 5.0 * weak_tau_c(d); }

/// Closed-form state. `phase_rate` multiplies Omega in phi(t) = phi0 + rate*Omega*t.
inline BlochState weak_solution(const SampleParams& p, double t, double phi0 = std::numbers::pi / 2.0,
                                double phase_rate = 1.0) {
    const DerivedParams d = derive_params(p);
    const double x = (t - weak_delay(d)) / weak_tau_c(d);
    // sin(theta) = sech(x), cos(theta) = -tanh(x) picks the branch through pi/2 at t0.
    const double theta = std::atan2(1.0 / std::cosh(x), -std::tanh(x));
    return {theta, phi0 + phase_rate * d.Omega * t, t};
}

/// Representative-atom energy over omega0: -((1+alpha)/2) tanh((t-t0)/tau_c).
inline double weak_energy(const DerivedParams& d, double t) {
    return -0.5 * (1.0 + d.alpha) * std::tanh((t - weak_delay(d)) / weak_tau_c(d));
}

inline double weak_energy(const SampleParams& p, double t) { return weak_energy(derive_params(p), t); }

/// Emitted intensity over gamma*omega0: (N^2/4)(1+alpha)^2 sech^2((t-t0)/tau_c).
inline double weak_intensity(const DerivedParams& d, double t) {
    const double s = 1.0 / std::cosh((t - weak_delay(d)) / weak_tau_c(d));
    const double amplitude = 0.5 * d.n() * (1.0 + d.alpha);
    return amplitude * amplitude * s * s;
}

inline double weak_intensity(const SampleParams& p, double t) { return weak_intensity(derive_params(p), t); }

/// Samples the closed form on the uniform output grid.
inline BlochTrajectory sample_weak_solution(const SampleParams& p, const BlochState& init, double t_end,
                                            const IntegrationControl& ctrl = {}, double phase_rate = 1.0) {
    const DerivedParams d = derive_params(p);
    detail::check_window(t_end, ctrl);
    BlochTrajectory traj;
    traj.params = d;
    traj.dynamics = Regime::Weak;
    traj.source = TrajectorySource::WeakClosedForm;
    traj.t_end = t_end;
    const double spacing = output_grid_spacing(d, t_end, ctrl.max_samples);
    const std::size_t intervals = grid_intervals(t_end, spacing);
    traj.samples.reserve(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double t = static_cast<double>(k) * spacing;
        const BlochState s = weak_solution(p, t, init.phi, phase_rate);
        traj.samples.push_back({t, s.theta, s.phi});
    }
    return traj;
}

/// Numerically integrates d(theta)/dt = (N-1)(Gamma/2) sin(theta), d(phi)/dt = rate*Omega.
inline BlochTrajectory integrate_weak_ode(const SampleParams& p, const BlochState& init, double t_end,
                                          const IntegrationControl& ctrl = {}, double phase_rate = 1.0) {
    const DerivedParams d = derive_params(p);
    detail::check_window(t_end, ctrl);
    if (!std::isfinite(init.theta) || init.theta < 0.0 || init.theta > std::numbers::pi)
        throw parameter_error("theta0", "must lie in [0, pi]");
    BlochTrajectory traj;
    traj.params = d;
    traj.dynamics = Regime::Weak;
    traj.source = TrajectorySource::WeakOde;
    traj.t_end = t_end;
    const double spacing = output_grid_spacing(d, t_end, ctrl.max_samples);
    using State = std::array<double, 2>;
    const double a = d.collective_rate();
    const double phase_speed = phase_rate * d.Omega;
    auto rhs = [a, phase_speed](double, const State& y, State& dy) {
        dy[0] = a * std::sin(y[0]);
        dy[1] = phase_speed;
    };
    traj.samples = detail::run_on_grid<State>(
        rhs, State{init.theta, init.phi}, t_end, spacing, ctrl, std::numeric_limits<double>::infinity(),
        [](double t, const State& y) { return TrajectorySample{t, std::clamp(y[0], 0.0, std::numbers::pi), y[1]}; },
        [](double, const State&) {}, traj.stats);
    return traj;
}

}  // namespace superradiance
