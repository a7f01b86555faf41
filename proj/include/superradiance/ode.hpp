// ode.hpp - adaptive Dormand-Prince 5(4) integrator with PI step-size control.
//
// The stepper is generic over the state container: std::array<double, D> for the
// Bloch equations, std::vector<double> for the ladder populations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

namespace superradiance::ode {

struct StepControl {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
};

struct StepStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_error_estimate = 0.0;          // largest absolute local error estimate of an accepted step
    double accumulated_error_estimate = 0.0;  // sum of the above over accepted steps
};

/// Thrown by the stepper; callers rewrap with domain context.
class step_underflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
// Dormand & Prince (1980) tableau, 5th-order solution with embedded 4th-order error.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace detail

template <class State>
class DormandPrince {
public:
    explicit DormandPrince(StepControl ctrl) : ctrl_(ctrl) {
        if (!(ctrl.rtol > 0.0) || !(ctrl.atol > 0.0)) throw std::invalid_argument("tolerances must be positive");
        if (!(ctrl.max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
    }

    const StepStats& stats() const { return stats_; }
    const StepControl& control() const { return ctrl_; }

    /// Advance (t, y) to exactly t_target. `on_step(t, y)` sees every accepted step
    /// and returns false to stop early; the return value reports whether t_target was reached.
    template <class Rhs, class OnStep>
    bool advance(Rhs&& f, State& y, double& t, double t_target, OnStep&& on_step) {
        if (t_target <= t) return true;
        ensure_buffers(y);
        if (!fsal_valid_) {
            f(t, y, k1_);
            fsal_valid_ = true;
        }
        if (h_ <= 0.0) h_ = initial_step(f, y, t, t_target);

        while (t < t_target) {
            const double remaining = t_target - t;
            const double h_proposed = std::min(h_, ctrl_.max_step);
            const bool clipped = h_proposed >= remaining;
            const double h = clipped ? remaining : h_proposed;
            if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-300))
                throw step_underflow("step size underflow");

            const double err = attempt(f, y, t, h);
            if (err <= 1.0) {
                t = clipped ? t_target : t + h;
                std::swap(y, y_new_);
                std::swap(k1_, k7_);
                ++stats_.steps;
                double fac = err == 0.0 ? max_factor
                                        : safety * std::pow(err, -pi_alpha) * std::pow(err_prev_, pi_beta);
                fac = std::clamp(fac, min_factor, max_factor);
                if (reject_streak_ > 0) fac = std::min(fac, 1.0);
                reject_streak_ = 0;
                err_prev_ = std::max(err, 1e-4);
                const double next = h * fac;
                h_ = clipped ? std::max(next, h_proposed) : next;
                if (!on_step(t, static_cast<const State&>(y))) return false;
            } else {
                ++stats_.rejected;
                ++reject_streak_;
                h_ = h * std::max(min_factor, safety * std::pow(err, -0.2));
            }
        }
        return true;
    }

    template <class Rhs>
    bool advance(Rhs&& f, State& y, double& t, double t_target) {
        return advance(std::forward<Rhs>(f), y, t, t_target, [](double, const State&) { return true; });
    }

private:
    static constexpr double safety = 0.9;
    static constexpr double min_factor = 0.2;
    static constexpr double max_factor = 10.0;
    static constexpr double pi_beta = 0.04;
    static constexpr double pi_alpha = 0.2 - 0.75 * pi_beta;

    void ensure_buffers(const State& y) {
        if (buffers_ready_) return;
        for (State* s : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &y_new_, &tmp_}) *s = y;
        buffers_ready_ = true;
    }

    double scale(double a, double b) const { return ctrl_.atol + ctrl_.rtol * std::max(std::abs(a), std::abs(b)); }

    template <class Rhs>
    double initial_step(Rhs& f, const State& y, double t, double t_target) {
        // Hairer, Norsett & Wanner, Solving ODEs I, II.4.
        double d0 = 0.0, d1 = 0.0;
        const std::size_t n = y.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(y[i], y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1_[i]) / sc);
        }
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, t_target - t, ctrl_.max_step});
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h0 * k1_[i];
        f(t + h0, tmp_, k2_);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) d2 = std::max(d2, std::abs(k2_[i] - k1_[i]) / scale(y[i], y[i]) / h0);
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h0, h1, ctrl_.max_step});
    }

    /// One trial step of size h from (t, y) into y_new_, k7_; returns the scaled error norm.
    template <class Rhs>
    double attempt(Rhs& f, const State& y, double t, double h) {
        using namespace detail;
        const std::size_t n = y.size();
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
        f(t + c2 * h, tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        f(t + c3 * h, tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        f(t + c4 * h, tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        f(t + c5 * h, tmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        f(t + h, tmp_, k6_);
        for (std::size_t i = 0; i < n; ++i)
            y_new_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        f(t + h, y_new_, k7_);

        double err = 0.0;
        double abs_err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double e =
                h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            finite = finite && std::isfinite(y_new_[i]) && std::isfinite(e);
            abs_err = std::max(abs_err, std::abs(e));
            err = std::max(err, std::abs(e) / scale(y[i], y_new_[i]));
        }
        if (!finite) return std::numeric_limits<double>::infinity();
        if (err <= 1.0) {
            stats_.max_error_estimate = std::max(stats_.max_error_estimate, abs_err);
            stats_.accumulated_error_estimate += abs_err;
        }
        return err;
    }

    StepControl ctrl_;
    StepStats stats_;
    State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, y_new_{}, tmp_{};
    bool buffers_ready_ = false;
    bool fsal_valid_ = false;
    double h_ = 0.0;
    double err_prev_ = 1e-4;
    int reject_streak_ = 0;
};

}  // namespace superradiance::ode
