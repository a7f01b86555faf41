#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "superradiance/observables.hpp"
#include "superradiance/strong_dynamics.hpp"
#include "superradiance/weak_dynamics.hpp"
#include "test_support.hpp"

using namespace superradiance;
using test_support::fig1;

TEST(Observables, StrongEnergyAtPolesAndEquator) {
    const DerivedParams d = derive_params(fig1());
    EXPECT_DOUBLE_EQ(energy_strong({0.0, 0.0, 0.0}, d), 1.5);
    EXPECT_DOUBLE_EQ(energy_strong({std::numbers::pi, 0.0, 0.0}, d), -1.5);
    EXPECT_NEAR(energy_strong({std::numbers::pi / 2, 0.0, 0.0}, d), 0.0, 1e-15);
}

TEST(Observables, StrongIntensityMaximum) {
    const DerivedParams d = derive_params(fig1());
    const double expected = 0.25 * 1e4 * 9999.0 * 9.0;
    EXPECT_NEAR(intensity_strong({std::numbers::pi / 2, std::numbers::pi / 2, 0.0}, d), expected, expected * 1e-15);
    EXPECT_NEAR(intensity_strong({std::numbers::pi / 2, 0.0, 0.0}, d), 0.0, 1e-6);
    EXPECT_EQ(intensity_strong({0.0, 1.0, 0.0}, d), 0.0);
}

TEST(Observables, StrongIntensityEqualsEnergyRateAlongFlow) {
    const DerivedParams d = derive_params(fig1());
    for (double th : {0.01, 0.5, 1.2, 2.9}) {
        for (double ph : {0.2, 1.0, 2.5}) {
            const BlochState s{th, ph, 0.0};
            const BlochRates r = rhs_strong(s, d);
            const double de_dt = -0.5 * (1.0 + d.alpha) * std::sin(th) * r.dtheta_dt;
            const double i = intensity_strong(s, d);
            EXPECT_NEAR(-d.n() * de_dt, i, 1e-12 * i);
        }
    }
}

TEST(Observables, WeakTrajectoryUsesClosedForms) {
    const SampleParams p = test_support::params(10'000, 1e6, 0.0, Regime::Weak);
    const DerivedParams d = derive_params(p);
    const BlochTrajectory traj = sample_weak_solution(p, default_initial_state(d), weak_default_window(d));
    const auto rec = trajectory_to_emission(traj);
    ASSERT_EQ(rec.size(), traj.samples.size());
    for (std::size_t i = 0; i < rec.size(); i += 97) {
        EXPECT_EQ(rec[i].t, traj.samples[i].t);
        EXPECT_EQ(rec[i].energy_scaled, weak_energy(d, rec[i].t));
        EXPECT_EQ(rec[i].intensity_scaled, weak_intensity(d, rec[i].t));
    }
}

TEST(Observables, StrongTrajectoryUsesAngleFormulas) {
    const DerivedParams d = derive_params(fig1());
    const BlochTrajectory traj = integrate_strong(fig1(), default_initial_state(d), 2e-5);
    const auto rec = trajectory_to_emission(traj);
    ASSERT_EQ(rec.size(), traj.samples.size());
    for (std::size_t i = 0; i < rec.size(); i += 13) {
        const BlochState b{traj.samples[i].theta, traj.samples[i].phi, traj.samples[i].t};
        EXPECT_EQ(rec[i].energy_scaled, energy_strong(b, d));
        EXPECT_EQ(rec[i].intensity_scaled, intensity_strong(b, d));
    }
}
