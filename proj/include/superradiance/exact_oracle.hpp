// exact_oracle.hpp - exact small-N reference: population cascade down the symmetric
// Dicke ladder |J, M>, M = J ... -J, with jump rates Gamma_eff (J+M)(J-M+1).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "ode.hpp"

namespace superradiance {

inline constexpr std::int64_t max_ladder_atoms = 10'000;
inline constexpr double ladder_stability_bound = 0.1;  // dt * max rate

/// populations[k] is the probability of M = J - k.
struct LadderState {
    double j = 0.0;
    std::vector<double> populations;
    double t = 0.0;

    std::size_t levels() const { return populations.size(); }
};

/// g_M = (J+M)(J-M+1) at index k (M = J - k), i.e. (2J - k)(k + 1).
inline double cascade_rate(const LadderState& s, std::size_t k) {
    const double m = s.j - static_cast<double>(k);
    return (s.j + m) * (s.j - m + 1.0);
}

inline double max_cascade_rate(const LadderState& s) {
    double best = 0.0;
    for (std::size_t k = 0; k < s.levels(); ++k) best = std::max(best, cascade_rate(s, k));
    return best;
}

/// All N atoms excited: M = J = N/2.
inline LadderState excited_ladder(std::int64_t n_atoms) {
    if (n_atoms < 1 || n_atoms > max_ladder_atoms) throw parameter_error("n_atoms", "ladder oracle needs 1 <= N <= 1e4");
    LadderState s;
    s.j = 0.5 * static_cast<double>(n_atoms);
    s.populations.assign(static_cast<std::size_t>(n_atoms) + 1, 0.0);
    s.populations.front() = 1.0;
    return s;
}

inline double mean_m(const LadderState& s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.levels(); ++k) acc += (s.j - static_cast<double>(k)) * s.populations[k];
    return acc;
}

inline double total_probability(const LadderState& s) {
    double acc = 0.0;
    for (double p : s.populations) acc += p;
    return acc;
}

/// Scaled intensity (Omega/omega0)(Gamma_eff/gamma) sum_M g_M P_M.
inline double ladder_intensity(const LadderState& s, double gamma_eff, double omega_ratio) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.levels(); ++k) acc += cascade_rate(s, k) * s.populations[k];
    return omega_ratio * gamma_eff * acc;
}

/// dP_M/dt = Gamma_eff [g_{M+1} P_{M+1} - g_M P_M], advanced adaptively over dt.
inline LadderState step_ladder(const LadderState& s, double gamma_eff, double dt) {
    if (!(gamma_eff >= 0.0) || !std::isfinite(gamma_eff)) throw parameter_error("gamma_eff", "must be finite and >= 0");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw step_size_error("dt must be finite and >= 0");
    if (dt == 0.0 || s.levels() == 0) return s;
    if (dt * gamma_eff * max_cascade_rate(s) >= ladder_stability_bound)
        throw step_size_error("dt * max rate must stay below 0.1");

    std::vector<double> rates(s.levels());
    for (std::size_t k = 0; k < s.levels(); ++k) rates[k] = gamma_eff * cascade_rate(s, k);
    auto rhs = [&rates](double, const std::vector<double>& p, std::vector<double>& dp) {
        dp[0] = -rates[0] * p[0];
        for (std::size_t k = 1; k < p.size(); ++k) dp[k] = rates[k - 1] * p[k - 1] - rates[k] * p[k];
    };
    ode::DormandPrince<std::vector<double>> stepper({1e-10, 1e-14});
    LadderState next = s;
    double t = 0.0;
    stepper.advance(rhs, next.populations, t, dt);

    double total = 0.0;
    for (double& p : next.populations) {
        if (p < -1e-12) throw step_size_error("population went negative");
        p = std::max(p, 0.0);
        total += p;
    }
    for (double& p : next.populations) p /= total;
    next.t = s.t + dt;
    return next;
}

struct LadderSample {
    double t = 0.0;
    double mean_m = 0.0;
    double intensity_scaled = 0.0;
    double total_probability = 0.0;
};

struct LadderRun {
    std::vector<LadderSample> samples;
    LadderState final_state;
    double peak_time = 0.0;
    double peak_intensity = 0.0;
    double emitted_energy = 0.0;  // trapezoid integral of the scaled intensity, units of omega0
    double max_probability_drift = 0.0;
};

/// Cascade from the fully excited state. Without t_end the run stops once the
/// ground level holds all but 1e-12 of the probability.
inline LadderRun run_ladder(std::int64_t n_atoms, double gamma_eff, double omega_ratio,
                            std::optional<double> t_end = std::nullopt) {
    if (!(gamma_eff > 0.0)) throw parameter_error("gamma_eff", "must be > 0");
    if (!(omega_ratio > 0.0)) throw parameter_error("omega_ratio", "must be > 0");
    if (t_end && !(*t_end > 0.0)) throw parameter_error("t_end", "must be > 0");
    LadderState s = excited_ladder(n_atoms);
    const double dt = 0.5 * ladder_stability_bound / (gamma_eff * max_cascade_rate(s));
    constexpr std::size_t max_steps = 50'000'000;

    LadderRun run;
    auto record = [&](const LadderState& st) {
        const double intensity = ladder_intensity(st, gamma_eff, omega_ratio);
        const double total = total_probability(st);
        if (!run.samples.empty()) {
            const LadderSample& prev = run.samples.back();
            run.emitted_energy += 0.5 * (prev.intensity_scaled + intensity) * (st.t - prev.t);
        }
        run.samples.push_back({st.t, mean_m(st), intensity, total});
        run.max_probability_drift = std::max(run.max_probability_drift, std::abs(total - 1.0));
        if (intensity > run.peak_intensity) {
            run.peak_intensity = intensity;
            run.peak_time = st.t;
        }
    };
    record(s);
    for (std::size_t step = 0; step < max_steps; ++step) {
        if (t_end) {
            if (s.t >= *t_end) break;
            const double remaining = *t_end - s.t;
            s = step_ladder(s, gamma_eff, std::min(dt, remaining));
            if (remaining <= dt) s.t = *t_end;
        } else {
            if (1.0 - s.populations.back() < 1e-12) break;
            s = step_ladder(s, gamma_eff, dt);
        }
        record(s);
    }
    run.final_state = s;
    return run;
}

}  // namespace superradiance
