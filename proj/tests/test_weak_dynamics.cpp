#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "superradiance/observables.hpp"
#include "superradiance/weak_dynamics.hpp"
#include "test_support.hpp"

using namespace superradiance;
using test_support::params;

namespace {

SampleParams weak(double g = 0.0, std::int64_t n = 10'000) { return params(n, 1e6, g, Regime::Weak); }

}  // namespace

TEST(WeakClosedForm, CrossesEquatorAtDelay) {
    const DerivedParams d = derive_params(weak());
    const BlochState s = weak_solution(weak(), weak_delay(d));
    EXPECT_NEAR(s.theta, std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(weak_energy(d, weak_delay(d)), 0.0, 1e-16);
}

TEST(WeakClosedForm, InitialTippingAngle) {
    const BlochState s = weak_solution(weak(), 0.0);
    EXPECT_NEAR(std::sin(s.theta), 1.99999998e-4, 1e-18);
    EXPECT_NEAR(s.theta, 1.99999999333333337e-4, 1e-18);
    EXPECT_NEAR(s.theta, default_theta0(derive_params(weak())), 1e-18);
    EXPECT_DOUBLE_EQ(s.phi, std::numbers::pi / 2);
}

TEST(WeakClosedForm, InitialEnergy) {
    // -(1/2) tanh(-ln N) = (N^2 - 1) / (2 (N^2 + 1))
    EXPECT_NEAR(weak_energy(weak(), 0.0), 0.49999999000000010, 1e-16);
}

TEST(WeakClosedForm, PeakIntensity) {
    const DerivedParams d0 = derive_params(weak());
    EXPECT_NEAR(weak_intensity(d0, weak_delay(d0)), 2.5e7, 2.5e7 * 1e-9);
    const DerivedParams d2 = derive_params(weak(1e2));
    EXPECT_NEAR(d2.alpha, 2.0, 1e-15);
    EXPECT_NEAR(weak_intensity(d2, weak_delay(d2)), 2.25e8, 2.25e8 * 1e-9);
    EXPECT_NEAR(weak_tau_c(d2), 2.0 / 3e4, 1e-9 * 2.0 / 3e4);
}

TEST(WeakClosedForm, HalfMaximumAtArccoshRootTwo) {
    const DerivedParams d = derive_params(weak());
    const double dt = weak_tau_c(d) * std::acosh(std::numbers::sqrt2);
    const double peak = weak_intensity(d, weak_delay(d));
    EXPECT_NEAR(weak_intensity(d, weak_delay(d) + dt), 0.5 * peak, peak * 1e-12);
    EXPECT_NEAR(weak_intensity(d, weak_delay(d) - dt), 0.5 * peak, peak * 1e-12);
}

TEST(WeakClosedForm, SymmetricAboutDelay) {
    const DerivedParams d = derive_params(weak(50.0));
    const double t0 = weak_delay(d);
    for (double u : {0.1, 0.7, 2.0, 4.5}) {
        const double dt = u * weak_tau_c(d);
        const double i_plus = weak_intensity(d, t0 + dt);
        EXPECT_NEAR(weak_intensity(d, t0 - dt), i_plus, i_plus * 1e-12);
        EXPECT_NEAR(weak_energy(d, t0 - dt), -weak_energy(d, t0 + dt), 1e-15);
    }
}

TEST(WeakClosedForm, PeakGrowsAndDelayShrinksWithCoupling) {
    double last_peak = 0.0, last_delay = 1e300;
    for (double g : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        const DerivedParams d = derive_params(weak(g));
        const double peak = weak_intensity(d, weak_delay(d));
        EXPECT_GT(peak, last_peak);
        EXPECT_LT(weak_delay(d), last_delay);
        last_peak = peak;
        last_delay = weak_delay(d);
    }
}

TEST(WeakClosedForm, IntensityIsMinusNTimesEnergyDerivative) {
    const DerivedParams d = derive_params(weak(1e2));
    const BlochTrajectory traj = sample_weak_solution(weak(1e2), default_initial_state(d), weak_default_window(d));
    const auto rec = trajectory_to_emission(traj);
    std::vector<double> e;
    for (const auto& r : rec) e.push_back(r.energy_scaled);
    const double h = rec[1].t - rec[0].t;
    const double peak = weak_intensity(d, weak_delay(d));
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < rec.size(); ++i) {
        const double fd = -d.n() * test_support::central_derivative5(e, i, h);
        worst = std::max(worst, std::abs(fd - rec[i].intensity_scaled) / peak);
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(WeakClosedForm, DefaultWindowAndPhaseRate) {
    const DerivedParams d = derive_params(weak());
    const BlochState init = default_initial_state(d);
    const BlochTrajectory t1 = sample_weak_solution(weak(), init, weak_default_window(d));
    const BlochTrajectory t2 = sample_weak_solution(weak(), init, weak_default_window(d), {}, 2.0);
    ASSERT_EQ(t1.samples.size(), t2.samples.size());
    EXPECT_LE(t1.samples.back().t, weak_delay(d) + 5.0 * weak_tau_c(d));
    const auto& a = t1.samples.back();
    const auto& b = t2.samples.back();
    EXPECT_NEAR(a.phi - init.phi, d.Omega * a.t, 1e-6);
    EXPECT_NEAR(b.phi - init.phi, 2.0 * d.Omega * b.t, 1e-6);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(t1.source, TrajectorySource::WeakClosedForm);
}

TEST(WeakOde, MatchesExactSeparableSolution) {
    // tan(theta/2) = tan(theta0/2) exp(A t), A = (N-1) Gamma / 2
    const DerivedParams d = derive_params(weak(1e2));
    const BlochState init = default_initial_state(d);
    const BlochTrajectory traj = integrate_weak_ode(weak(1e2), init, weak_default_window(d));
    const double a = d.collective_rate();
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        const double exact = 2.0 * std::atan(std::tan(init.theta / 2.0) * std::exp(a * s.t));
        worst = std::max(worst, std::abs(s.theta - exact));
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_EQ(traj.source, TrajectorySource::WeakOde);
}

TEST(WeakOde, CloseToClosedFormUpToFiniteNShift) {
    // The ODE rate uses N-1 where the closed form uses N: the crossing shifts by O(ln N / N) of tau_c.
    const DerivedParams d = derive_params(weak());
    const BlochState init = default_initial_state(d);
    const BlochTrajectory traj = integrate_weak_ode(weak(), init, weak_default_window(d));
    const double bound = 3.0 * std::log(d.n()) / d.n();
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        const double closed = weak_solution(weak(), s.t, init.phi).theta;
        worst = std::max(worst, std::abs(std::cos(s.theta) - std::cos(closed)));
    }
    EXPECT_LT(worst, bound);
}

TEST(WeakOde, TwoAtoms) {
    const SampleParams p = params(2, 10.0, 0.0, Regime::Weak);
    const DerivedParams d = derive_params(p);
    const BlochState init = default_initial_state(d);
    EXPECT_NEAR(std::sin(init.theta), 0.8, 1e-15);
    const BlochTrajectory traj = integrate_weak_ode(p, init, weak_default_window(d));
    const double a = d.collective_rate();
    EXPECT_DOUBLE_EQ(a, 0.5);
    for (const auto& s : traj.samples) {
        const double exact = 2.0 * std::atan(std::tan(init.theta / 2.0) * std::exp(a * s.t));
        ASSERT_NEAR(s.theta, exact, 1e-8);
    }
}

TEST(WeakOde, ExcitedPoleStaysPut) {
    const BlochTrajectory traj = integrate_weak_ode(weak(), {0.0, 0.0, 0.0}, 1e-3);
    for (const auto& s : traj.samples) ASSERT_EQ(s.theta, 0.0);
}

TEST(WeakOde, RejectsBadInput) {
    EXPECT_THROW(integrate_weak_ode(weak(), {-0.1, 0.0, 0.0}, 1e-3), parameter_error);
    EXPECT_THROW(integrate_weak_ode(weak(), {0.1, 0.0, 0.0}, 0.0), parameter_error);
    EXPECT_THROW(sample_weak_solution(weak(), {0.1, 0.0, 0.0}, -1.0), parameter_error);
}
