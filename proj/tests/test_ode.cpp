#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "superradiance/ode.hpp"

using superradiance::ode::DormandPrince;
using superradiance::ode::StepControl;
using superradiance::ode::step_underflow;

TEST(DormandPrince, ExponentialDecayMatchesClosedForm) {
    using S = std::array<double, 1>;
    DormandPrince<S> stepper({1e-10, 1e-14});
    S y{1.0};
    double t = 0.0;
    stepper.advance([](double, const S& x, S& dx) { dx[0] = -3.0 * x[0]; }, y, t, 2.0);
    EXPECT_EQ(t, 2.0);
    EXPECT_NEAR(y[0], std::exp(-6.0), 1e-12);
}

TEST(DormandPrince, HarmonicOscillatorKeepsPhaseOverManyPeriods) {
    using S = std::array<double, 2>;
    DormandPrince<S> stepper({1e-11, 1e-13});
    S y{1.0, 0.0};
    double t = 0.0;
    const double w = 7.0;
    const double t_end = 50.0 * 2.0 * std::numbers::pi / w;
    stepper.advance([w](double, const S& x, S& dx) { dx = {x[1], -w * w * x[0]}; }, y, t, t_end);
    EXPECT_NEAR(y[0], std::cos(w * t_end), 1e-8);
    EXPECT_NEAR(y[1], -w * std::sin(w * t_end), 1e-7);
}

TEST(DormandPrince, SuccessiveTargetsAreHitExactlyAndMaxStepRespected) {
    using S = std::array<double, 1>;
    DormandPrince<S> stepper({1e-6, 1e-9, 0.01});
    S y{0.0};
    double t = 0.0;
    double prev = 0.0;
    double largest = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double target = 0.037 * k;
        stepper.advance([](double tt, const S&, S& dx) { dx[0] = std::cos(tt); }, y, t, target,
                        [&](double ts, const S&) {
                            largest = std::max(largest, ts - prev);
                            prev = ts;
                            return true;
                        });
        EXPECT_EQ(t, target);
    }
    EXPECT_LE(largest, 0.01 * (1 + 1e-12));
    EXPECT_NEAR(y[0], std::sin(0.37), 1e-8);
}

TEST(DormandPrince, VectorStateWorks) {
    using S = std::vector<double>;
    DormandPrince<S> stepper({1e-10, 1e-14});
    S y{1.0, 0.0};
    double t = 0.0;
    stepper.advance([](double, const S& x, S& dx) { dx[0] = -x[0]; dx[1] = x[0]; }, y, t, 1.0);
    EXPECT_NEAR(y[0], std::exp(-1.0), 1e-11);
    EXPECT_NEAR(y[0] + y[1], 1.0, 1e-12);
}

TEST(DormandPrince, EarlyStopFromObserver) {
    using S = std::array<double, 1>;
    DormandPrince<S> stepper({1e-8, 1e-12});
    S y{0.0};
    double t = 0.0;
    const bool reached = stepper.advance([](double, const S&, S& dx) { dx[0] = 1.0; }, y, t, 10.0,
                                         [](double, const S& s) { return s[0] < 1.0; });
    EXPECT_FALSE(reached);
    EXPECT_GE(y[0], 1.0);
    EXPECT_LT(t, 10.0);
}

TEST(DormandPrince, BlowUpRaisesUnderflow) {
    using S = std::array<double, 1>;
    DormandPrince<S> stepper({1e-8, 1e-12});
    S y{1.0};
    double t = 0.0;
    EXPECT_THROW(stepper.advance([](double, const S& x, S& dx) { dx[0] = x[0] * x[0]; }, y, t, 2.0), step_underflow);
    EXPECT_GT(t, 0.99);
    EXPECT_LT(t, 1.01);
}

TEST(DormandPrince, RejectsNonPositiveTolerances) {
    using S = std::array<double, 1>;
    EXPECT_THROW(DormandPrince<S>(StepControl{0.0, 1e-12}), std::invalid_argument);
    EXPECT_THROW(DormandPrince<S>(StepControl{1e-9, -1.0}), std::invalid_argument);
}
