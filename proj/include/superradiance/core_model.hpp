// core_model.hpp - sample parameters, collective quantities and regime classification.
//
// Units: every frequency and rate is a ratio to the single-atom decay rate gamma,
// every time is gamma*t.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "errors.hpp"

namespace superradiance {

enum class Regime { Strong, Weak, DickeLimit };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Strong: return "strong";
        case Regime::Weak: return "weak";
        case Regime::DickeLimit: return "dicke";
    }
    return "unknown";
}

/// Weak and DickeLimit share the weak-coupling equations of motion.
constexpr bool uses_weak_equations(Regime r) { return r != Regime::Strong; }

inline constexpr std::int64_t max_atoms = 1'000'000'000;
inline constexpr double strong_coupling_threshold = 1e-2;  // N*gamma/omega0, inclusive

struct SampleParams {
    std::int64_t n_atoms = 2;
    double omega0 = 1.0;  // omega0 / gamma
    double g = 0.0;       // dipole-dipole coupling / gamma
    double gamma = 1.0;   // unit rate
    Regime regime = Regime::Strong;
};

struct DerivedParams {
    SampleParams sample;
    double alpha = 0.0;
    double Omega = 0.0;
    double Gamma = 0.0;
    double coupling_strength_ratio = 0.0;  // N*gamma/omega0
    double tau_c_pred = 0.0;
    double tau_1_pred = 0.0;
    double pulse_count_pred = 0.0;
    double peak_intensity_pred = 0.0;
    double delay_time_pred = 0.0;

    double n() const { return static_cast<double>(sample.n_atoms); }
    /// (N-1)*Gamma/2, the prefactor of the polar-angle equations in both regimes.
    double collective_rate() const { return (n() - 1.0) * Gamma / 2.0; }
};

inline void validate(const SampleParams& p) {
    if (p.n_atoms < 2) throw parameter_error("n_atoms", "must be >= 2");
    if (p.n_atoms > max_atoms) throw parameter_error("n_atoms", "must be <= 1e9");
    if (!std::isfinite(p.omega0) || !(p.omega0 > 0.0)) throw parameter_error("omega0", "must be finite and > 0");
    if (!std::isfinite(p.g) || !(p.g >= 0.0)) throw parameter_error("g", "must be finite and >= 0");
    if (p.gamma != 1.0) throw parameter_error("gamma", "is the unit rate and must equal 1");
    if (p.regime == Regime::DickeLimit && p.g != 0.0)
        throw parameter_error("g", "the Dicke limit requires g = 0");
}

/// Collective parameters and the scaling-law predictions for the emission.
inline DerivedParams derive_params(const SampleParams& p) {
    validate(p);
    const double n = static_cast<double>(p.n_atoms);
    DerivedParams d;
    d.sample = p;
    d.alpha = 2.0 * p.g * n / p.omega0;
    const double enhancement = 1.0 + d.alpha;
    d.Omega = enhancement * p.omega0;
    d.Gamma = enhancement * p.gamma;
    d.coupling_strength_ratio = n * p.gamma / p.omega0;
    d.tau_c_pred = 1.0 / (enhancement * n);
    d.tau_1_pred = 1.0 / (enhancement * p.omega0 / p.gamma);
    d.pulse_count_pred = p.omega0 / (n * p.gamma);
    d.peak_intensity_pred = (enhancement * n) * (enhancement * n) / 4.0;
    d.delay_time_pred = d.tau_c_pred * std::log(n);
    return d;
}

/// Advisory only: callers may run either set of equations at any parameters.
inline Regime classify_regime(const SampleParams& p) {
    validate(p);
    const double n = static_cast<double>(p.n_atoms);
    return n * p.gamma >= strong_coupling_threshold * p.omega0 ? Regime::Strong : Regime::Weak;
}

}  // namespace superradiance
