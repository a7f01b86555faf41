// trajectory.hpp - Bloch-angle trajectories and the uniform output grid they are sampled on.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "core_model.hpp"
#include "ode.hpp"

namespace superradiance {

struct IntegrationControl {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t max_samples = 2'000'000;
    bool dense = false;  // also keep every natural integrator step
};

struct BlochState {
    double theta = 0.0;
    double phi = 0.0;  // accumulated, never wrapped
    double t = 0.0;
};

struct BlochRates {
    double dtheta_dt = 0.0;
    double dphi_dt = 0.0;
};

struct TrajectorySample {
    double t = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_local_error = 0.0;
    double accumulated_error = 0.0;
    double max_norm_drift = 0.0;  // Cartesian route only
    bool norm_drift_warning = false;
};

enum class TrajectorySource { StrongAngles, StrongCartesian, WeakClosedForm, WeakOde };

constexpr std::string_view to_string(TrajectorySource s) {
    switch (s) {
        case TrajectorySource::StrongAngles: return "strong_angles";
        case TrajectorySource::StrongCartesian: return "strong_cartesian";
        case TrajectorySource::WeakClosedForm: return "weak_closed_form";
        case TrajectorySource::WeakOde: return "weak_ode";
    }
    return "unknown";
}

struct BlochTrajectory {
    DerivedParams params;
    Regime dynamics = Regime::Strong;  // which equations produced the samples
    TrajectorySource source = TrajectorySource::StrongAngles;
    std::vector<TrajectorySample> samples;  // strictly increasing t, first at t = 0
    double t_end = 0.0;
    IntegratorStats stats;
};

inline constexpr double norm_drift_warning_threshold = 1e-6;

/// Tipping angle whose weak closed form at t = 0 (with t0 = tau_c ln N) is exactly this state.
inline double default_theta0(const DerivedParams& d) {
    const double n = d.n();
    return std::asin(2.0 / (n + 1.0 / n));
}

inline BlochState default_initial_state(const DerivedParams& d) {
    return {default_theta0(d), std::numbers::pi / 2.0, 0.0};
}

inline double finest_grid_spacing(const DerivedParams& d) {
    return std::min(d.tau_1_pred / 10.0, d.tau_c_pred / 1000.0);
}

/// Uniform spacing for [0, t_end]: the finest spacing unless that would exceed
/// max_samples, in which case the grid is coarsened down to tau_1_pred/10 at most.
inline double output_grid_spacing(const DerivedParams& d, double t_end, std::size_t max_samples) {
    if (max_samples < 2) throw budget_error("max_samples must be at least 2");
    const double fine = finest_grid_spacing(d);
    if (t_end / fine + 1.0 <= static_cast<double>(max_samples)) return fine;
    const double coarse = t_end / static_cast<double>(max_samples - 1);
    if (coarse > d.tau_1_pred / 10.0)
        throw budget_error("t_end = " + std::to_string(t_end) + " needs more than " + std::to_string(max_samples) +
                           " samples at 10 per tau_1");
    return coarse;
}

/// Number of grid points k*spacing <= t_end, k >= 1.
inline std::size_t grid_intervals(double t_end, double spacing) {
    auto n = static_cast<std::size_t>(std::floor(t_end / spacing));
    while (static_cast<double>(n + 1) * spacing <= t_end) ++n;
    while (n > 0 && static_cast<double>(n) * spacing > t_end) --n;
    return n;
}

namespace detail {

inline void check_window(double t_end, const IntegrationControl& ctrl) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw parameter_error("t_end", "must be finite and > 0");
    if (!(ctrl.rtol > 0.0)) throw parameter_error("rtol", "must be > 0");
    if (!(ctrl.atol > 0.0)) throw parameter_error("atol", "must be > 0");
}

/// Integrates `rhs` from t = 0 and records `observe(t, y)` on every grid point
/// (plus every accepted step when ctrl.dense). Steps are clipped to land on grid points.
template <class State, class Rhs, class Observe, class OnStep>
std::vector<TrajectorySample> run_on_grid(Rhs&& rhs, State y, double t_end, double spacing,
                                          const IntegrationControl& ctrl, double max_step, Observe&& observe,
                                          OnStep&& on_step, IntegratorStats& stats) {
    ode::DormandPrince<State> stepper({ctrl.rtol, ctrl.atol, max_step});
    const std::size_t intervals = grid_intervals(t_end, spacing);
    std::vector<TrajectorySample> samples;
    samples.reserve(intervals + 1);
    double t = 0.0;
    samples.push_back(observe(t, y));

    auto record_step = [&](double ts, const State& ys) {
        on_step(ts, ys);
        if (ctrl.dense) {
            if (samples.size() >= ctrl.max_samples) throw budget_error("dense output exceeds max_samples");
            samples.push_back(observe(ts, ys));
        }
        return true;
    };

    try {
        for (std::size_t k = 1; k <= intervals; ++k) {
            const double target = static_cast<double>(k) * spacing;
            stepper.advance(rhs, y, t, target, record_step);
            if (!ctrl.dense) {
                samples.push_back(observe(t, y));
            } else if (samples.back().t != target) {
                samples.push_back(observe(t, y));
            }
        }
    } catch (const ode::step_underflow& e) {
        const TrajectorySample last = samples.back();
        throw integration_error(std::string(e.what()) + " at gamma*t = " + std::to_string(t), last.t, last.theta,
                                last.phi);
    }
    const auto& st = stepper.stats();
    stats.steps = st.steps;
    stats.rejected = st.rejected;
    stats.max_local_error = st.max_error_estimate;
    stats.accumulated_error = st.accumulated_error_estimate;
    return samples;
}

}  // namespace detail

}  // namespace superradiance
