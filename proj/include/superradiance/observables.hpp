// observables.hpp - representative-atom energy and radiated intensity in scaled units
// (energy / omega0, intensity / (gamma omega0), time gamma t).

#pragma once

#include <cmath>
#include <vector>

#include "core_model.hpp"
#include "trajectory.hpp"
#include "weak_dynamics.hpp"

namespace superradiance {

struct EmissionRecord {
    double t = 0.0;
    double energy_scaled = 0.0;
    double intensity_scaled = 0.0;
};

inline double energy_strong(const BlochState& s, const DerivedParams& d) { return 0.5 * (1.0 + d.alpha) * std::cos(s.theta); }

/// (1/4) N (N-1) (1+alpha)^2 sin^2(theta) sin^2(phi); equals -N d(energy)/dt along the strong flow.
inline double intensity_strong(const BlochState& s, const DerivedParams& d) {
    const double st = std::sin(s.theta);
    const double sp = std::sin(s.phi);
    const double e = 1.0 + d.alpha;
    return 0.25 * d.n() * (d.n() - 1.0) * e * e * (st * st) * (sp * sp);
}

inline std::vector<EmissionRecord> trajectory_to_emission(const BlochTrajectory& traj) {
    std::vector<EmissionRecord> out;
    out.reserve(traj.samples.size());
    const DerivedParams& d = traj.params;
    if (uses_weak_equations(traj.dynamics)) {
        for (const auto& s : traj.samples) out.push_back({s.t, weak_energy(d, s.t), weak_intensity(d, s.t)});
    } else {
        for (const auto& s : traj.samples) {
            const BlochState b{s.theta, s.phi, s.t};
            out.push_back({s.t, energy_strong(b, d), intensity_strong(b, d)});
        }
    }
    return out;
}

}  // namespace superradiance
