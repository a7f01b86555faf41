// strong_dynamics.hpp - mean-field Bloch-angle equations for a dense sample strongly
// coupled to its reservoir, integrated coherently (incoherent terms dropped).

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "core_model.hpp"
#include "trajectory.hpp"

namespace superradiance {

/// d(theta)/dt = (N-1)(Gamma/2) sin(theta) sin^2(phi)
/// d(phi)/dt   = Omega - (N-1)(Gamma/4) cos(theta) sin(2 phi)
inline BlochRates rhs_strong(const BlochState& s, const DerivedParams& d) {
    const double a = d.collective_rate();
    const double sp = std::sin(s.phi);
    return {a * std::sin(s.theta) * sp * sp, d.Omega - 0.5 * a * std::cos(s.theta) * std::sin(2.0 * s.phi)};
}

/// Resolves the fast phase rotation: at least 20 steps per 2*pi/Omega.
inline double strong_max_step(const DerivedParams& d) { return 2.0 * std::numbers::pi / d.Omega / 20.0; }

/// sin(theta) level below which, once past pi/2, the pulse is considered over (sech(5)).
inline double emission_tail_level() { return 1.0 / std::cosh(5.0); }

namespace detail {

using AngleState = std::array<double, 2>;
using CartesianState = std::array<double, 3>;

inline auto strong_angle_rhs(const DerivedParams& d) {
    return [&d](double, const AngleState& y, AngleState& dy) {
        const BlochRates r = rhs_strong({y[0], y[1], 0.0}, d);
        dy[0] = r.dtheta_dt;
        dy[1] = r.dphi_dt;
    };
}

/// The angle equations rewritten for s = (sin th cos ph, sin th sin ph, cos th).
/// With rho^2 = sx^2 + sy^2 the flow conserves |s| exactly.
inline auto strong_cartesian_rhs(const DerivedParams& d) {
    return [&d](double, const CartesianState& s, CartesianState& ds) {
        const double a = d.collective_rate();
        const double sx = s[0], sy = s[1], sz = s[2];
        const double rho2 = sx * sx + sy * sy;
        if (rho2 == 0.0) {
            ds = {0.0, 0.0, 0.0};
            return;
        }
        ds[0] = 2.0 * a * sz * sx * sy * sy / rho2 - d.Omega * sy;
        ds[1] = d.Omega * sx + a * sz * sy * (sy * sy - sx * sx) / rho2;
        ds[2] = -a * sy * sy;
    };
}

inline double clamp_theta(double theta) { return std::clamp(theta, 0.0, std::numbers::pi); }

inline void check_state(const BlochState& s) {
    if (!std::isfinite(s.theta) || s.theta < 0.0 || s.theta > std::numbers::pi)
        throw parameter_error("theta0", "must lie in [0, pi]");
    if (!std::isfinite(s.phi)) throw parameter_error("phi0", "must be finite");
}

}  // namespace detail

/// Length of the default integration window: integrates until theta has crossed pi/2
/// and sin(theta) has decayed to sech(5). Poles are fixed points and get the predicted window.
inline double strong_emission_window(const SampleParams& p, const BlochState& init, const IntegrationControl& ctrl = {}) {
    const DerivedParams d = derive_params(p);
    detail::check_state(init);
    const double fallback = d.delay_time_pred + 5.0 * d.tau_c_pred;
    if (std::sin(init.theta) == 0.0) return fallback;

    const double horizon = static_cast<double>(ctrl.max_samples) * d.tau_1_pred / 10.0;
    const double tail = emission_tail_level();
    ode::DormandPrince<detail::AngleState> stepper({ctrl.rtol, ctrl.atol, strong_max_step(d)});
    detail::AngleState y{init.theta, init.phi};
    double t = 0.0;
    bool finished = false;
    try {
        stepper.advance(detail::strong_angle_rhs(d), y, t, horizon, [&](double, const detail::AngleState& s) {
            finished = s[0] > std::numbers::pi / 2.0 && std::sin(s[0]) < tail;
            return !finished;
        });
    } catch (const ode::step_underflow& e) {
        throw integration_error(e.what(), t, y[0], y[1]);
    }
    if (!finished) throw budget_error("emission does not finish within the sample budget");
    return t;
}

/// Integrates the strong-coupling Bloch equations on a uniform grid over [0, t_end].
inline BlochTrajectory integrate_strong(const SampleParams& p, const BlochState& init, double t_end,
                                        const IntegrationControl& ctrl = {}) {
    const DerivedParams d = derive_params(p);
    detail::check_window(t_end, ctrl);
    detail::check_state(init);
    BlochTrajectory traj;
    traj.params = d;
    traj.dynamics = Regime::Strong;
    traj.source = TrajectorySource::StrongAngles;
    traj.t_end = t_end;
    const double spacing = output_grid_spacing(d, t_end, ctrl.max_samples);
    traj.samples = detail::run_on_grid<detail::AngleState>(
        detail::strong_angle_rhs(d), detail::AngleState{init.theta, init.phi}, t_end, spacing, ctrl,
        strong_max_step(d),
        [](double t, const detail::AngleState& y) {
            return TrajectorySample{t, detail::clamp_theta(y[0]), y[1]};
        },
        [](double, const detail::AngleState&) {}, traj.stats);
    return traj;
}

/// Same physics integrated as a unit Bloch vector; reports the norm drift.
inline BlochTrajectory integrate_cartesian(const SampleParams& p, const BlochState& init, double t_end,
                                           const IntegrationControl& ctrl = {}) {
    const DerivedParams d = derive_params(p);
    detail::check_window(t_end, ctrl);
    detail::check_state(init);
    BlochTrajectory traj;
    traj.params = d;
    traj.dynamics = Regime::Strong;
    traj.source = TrajectorySource::StrongCartesian;
    traj.t_end = t_end;
    const double spacing = output_grid_spacing(d, t_end, ctrl.max_samples);

    const detail::CartesianState s0{std::sin(init.theta) * std::cos(init.phi),
                                    std::sin(init.theta) * std::sin(init.phi), std::cos(init.theta)};
    double last_phi = init.phi;
    auto observe = [&last_phi](double t, const detail::CartesianState& s) {
        const double rho = std::hypot(s[0], s[1]);
        const double theta = std::atan2(rho, s[2]);
        double phi = last_phi;
        if (rho > 0.0) {
            const double raw = std::atan2(s[1], s[0]);
            phi = raw + 2.0 * std::numbers::pi * std::round((last_phi - raw) / (2.0 * std::numbers::pi));
        }
        last_phi = phi;
        return TrajectorySample{t, detail::clamp_theta(theta), phi};
    };
    double drift = 0.0;
    auto track_norm = [&drift](double, const detail::CartesianState& s) {
        drift = std::max(drift, std::abs(std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]) - 1.0));
    };
    traj.samples = detail::run_on_grid<detail::CartesianState>(detail::strong_cartesian_rhs(d), s0, t_end, spacing,
                                                               ctrl, strong_max_step(d), observe, track_norm,
                                                               traj.stats);
    traj.stats.max_norm_drift = drift;
    traj.stats.norm_drift_warning = drift > norm_drift_warning_threshold;
    return traj;
}

}  // namespace superradiance
