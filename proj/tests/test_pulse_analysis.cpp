#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "superradiance/pulse_analysis.hpp"
#include "superradiance/strong_dynamics.hpp"
#include "superradiance/weak_dynamics.hpp"
#include "test_support.hpp"

using namespace superradiance;

namespace {

std::vector<EmissionRecord> sampled(double t_end, std::size_t n, auto&& f) {
    std::vector<EmissionRecord> r;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
        r.push_back({t, 0.0, f(t)});
    }
    return r;
}

double sech2(double x) {
    const double s = 1.0 / std::cosh(x);
    return s * s;
}

// Carrier sin^2(w t) under a sech^2 envelope centred at t0 with width tau.
std::vector<EmissionRecord> comb(double t0, double tau, double w, double t_end, std::size_t n) {
    return sampled(t_end, n, [=](double t) {
        const double s = std::sin(w * t);
        return sech2((t - t0) / tau) * s * s;
    });
}

}  // namespace

TEST(FindSuperpulses, SingleSech2Width) {
    const double tau = 0.3;
    const auto rec = sampled(10.0, 20001, [tau](double t) { return 7.0 * sech2((t - 4.0) / tau); });
    const auto pulses = find_superpulses(rec);
    ASSERT_EQ(pulses.size(), 1u);
    EXPECT_NEAR(pulses[0].t_peak, 4.0, 1e-3);
    EXPECT_NEAR(pulses[0].height, 7.0, 1e-6);
    EXPECT_NEAR(pulses[0].fwhm, 1.76274717403908605 * tau, 0.01 * 1.7627 * tau);
}

TEST(FindSuperpulses, Sech2FactorValue) { EXPECT_NEAR(sech2_fwhm_factor(), 1.76274717403908605, 1e-15); }

TEST(FindSuperpulses, RejectsEmptyAndZero) {
    std::vector<EmissionRecord> none;
    EXPECT_THROW(find_superpulses(none), analysis_error);
    const auto zero = sampled(1.0, 100, [](double) { return 0.0; });
    EXPECT_THROW(find_superpulses(zero), analysis_error);
}

TEST(FindSuperpulses, PlateauCollapsesToCentre) {
    std::vector<EmissionRecord> r;
    const double v[] = {0, 1, 3, 3, 3, 3, 3, 1, 0};
    for (int i = 0; i < 9; ++i) r.push_back({static_cast<double>(i), 0.0, v[i]});
    const auto pulses = find_superpulses(r);
    ASSERT_EQ(pulses.size(), 1u);
    EXPECT_EQ(pulses[0].index, 4u);
}

TEST(FindSuperpulses, SmallRipplesAreFiltered) {
    // 1e-5 relative ripple on a single pulse must not add detections.
    const auto rec = sampled(10.0, 20001, [](double t) { return sech2(t - 5.0) * (1.0 + 1e-5 * std::sin(400.0 * t)); });
    EXPECT_EQ(find_superpulses(rec).size(), 1u);
}

TEST(FindSuperpulses, MonotoneRecordStillHasOnePulse) {
    const auto rec = sampled(1.0, 100, [](double t) { return t; });
    const auto pulses = find_superpulses(rec);
    ASSERT_EQ(pulses.size(), 1u);
    EXPECT_EQ(pulses[0].index, 99u);
}

TEST(ComputeMetrics, CombEnvelopeAndCount) {
    const double tau = 1.0, w = 20.0;
    const auto rec = comb(6.0, tau, w, 12.0, 200'001);
    const DerivedParams d = derive_params(test_support::fig1());
    const PulseMetrics m = compute_metrics(rec, d);
    EXPECT_NEAR(m.tau_c_measured, tau, 0.02 * tau);
    EXPECT_NEAR(m.median_pulse_spacing, std::numbers::pi / w, 1e-3);
    // Peaks above half of the envelope maximum lie within |t - t0| < tau acosh(sqrt 2).
    const double expected = 2.0 * std::acosh(std::numbers::sqrt2) * tau / (std::numbers::pi / w);
    EXPECT_NEAR(static_cast<double>(m.pulse_count_half_height), expected, 2.0);
    EXPECT_GT(m.tau_1_measured, 0.0);
    EXPECT_LT(m.tau_1_measured, std::numbers::pi / w);
}

TEST(ComputeMetrics, CountInvariantUnderScaling) {
    const auto rec = comb(6.0, 1.0, 20.0, 12.0, 100'001);
    auto scaled = rec;
    for (auto& r : scaled) r.intensity_scaled *= 3.7e9;
    const DerivedParams d = derive_params(test_support::fig1());
    const PulseMetrics a = compute_metrics(rec, d);
    const PulseMetrics b = compute_metrics(scaled, d);
    EXPECT_EQ(a.pulse_count_half_height, b.pulse_count_half_height);
    EXPECT_EQ(a.pulses_detected, b.pulses_detected);
    EXPECT_NEAR(a.tau_c_measured, b.tau_c_measured, 1e-12);
    EXPECT_NEAR(b.peak_intensity_scaled / a.peak_intensity_scaled, 3.7e9, 1.0);
}

TEST(ComputeMetrics, WeakClosedForm) {
    const SampleParams p = test_support::params(10'000, 1e6, 1e2, Regime::Weak);
    const DerivedParams d = derive_params(p);
    const BlochTrajectory traj = sample_weak_solution(p, default_initial_state(d), weak_default_window(d));
    const auto rec = trajectory_to_emission(traj);
    const PulseMetrics m = compute_metrics(rec, d);
    const double h = traj.samples[1].t;
    EXPECT_EQ(m.pulse_count_half_height, 1u);
    EXPECT_NEAR(m.delay_time, weak_delay(d), h);
    const double ratio = m.tau_c_measured / weak_tau_c(d);
    EXPECT_GE(ratio, 0.99);
    EXPECT_LE(ratio, 1.01);
    EXPECT_NEAR(m.peak_intensity_scaled, 2.25e8, 2.25e8 * 1e-6);
    EXPECT_DOUBLE_EQ(m.ratios.peak_intensity, m.peak_intensity_scaled / d.peak_intensity_pred);
}

TEST(ComputeMetrics, Figure1PulseSpacingFollowsPrecession) {
    const SampleParams p = test_support::fig1();
    const DerivedParams d = derive_params(p);
    const BlochState init = default_initial_state(d);
    const BlochTrajectory traj = integrate_strong(p, init, strong_emission_window(p, init));
    const PulseMetrics m = compute_metrics(trajectory_to_emission(traj), d);
    ASSERT_GE(m.pulse_count_half_height, 2u);
    EXPECT_NEAR(m.median_pulse_spacing, std::numbers::pi / d.Omega, 0.05 * std::numbers::pi / d.Omega);
    EXPECT_LT(m.tau_1_measured, std::numbers::pi / d.Omega);
}

TEST(ComputeMetrics, Figure1PulsesSitAtMaximalPhaseFactor) {
    const SampleParams p = test_support::fig1();
    const DerivedParams d = derive_params(p);
    const BlochState init = default_initial_state(d);
    const BlochTrajectory traj = integrate_strong(p, init, strong_emission_window(p, init));
    const auto rec = trajectory_to_emission(traj);
    const auto pulses = find_superpulses(rec);
    double top = 0.0;
    for (const auto& q : pulses) top = std::max(top, q.height);
    std::size_t checked = 0;
    for (const auto& q : pulses) {
        if (q.height < 0.5 * top) continue;
        const double s = std::sin(traj.samples[q.index].phi);
        EXPECT_GT(s * s, 0.99) << "pulse at t = " << q.t_peak;
        ++checked;
    }
    EXPECT_GT(checked, 10u);
}
