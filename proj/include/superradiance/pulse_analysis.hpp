// pulse_analysis.hpp - superpulse detection, comb envelope and pulse metrics measured
// against the scaling-law predictions carried by DerivedParams.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "core_model.hpp"
#include "errors.hpp"
#include "observables.hpp"

namespace superradiance {

inline constexpr double prominence_fraction = 1e-3;

/// FWHM of sech^2(x) in units of x: 2 arccosh(sqrt 2).
inline double sech2_fwhm_factor() { return 2.0 * std::acosh(std::numbers::sqrt2); }

struct Superpulse {
    std::size_t index = 0;
    double t_peak = 0.0;
    double height = 0.0;
    double fwhm = 0.0;
    double prominence = 0.0;
};

struct EnvelopePoint {
    double t = 0.0;
    double value = 0.0;
};

struct MetricRatios {
    double tau_c = 0.0;
    double tau_1 = 0.0;
    double pulse_count = 0.0;
    double peak_intensity = 0.0;
    double delay_time = 0.0;
};

struct PulseMetrics {
    double peak_intensity_scaled = 0.0;
    double delay_time = 0.0;
    double envelope_fwhm = 0.0;
    double tau_c_measured = 0.0;
    double tau_1_measured = 0.0;
    std::size_t pulse_count_half_height = 0;
    std::size_t pulses_detected = 0;
    double median_pulse_spacing = 0.0;  // between half-height pulses; 0 when fewer than two
    DerivedParams predictions;
    MetricRatios ratios;
};

namespace detail {

/// Iterative min segment tree over a fixed array.
class RangeMin {
public:
    explicit RangeMin(std::span<const double> values) : n_(values.size()), tree_(2 * values.size()) {
        std::copy(values.begin(), values.end(), tree_.begin() + static_cast<std::ptrdiff_t>(n_));
        for (std::size_t i = n_; i-- > 1;) tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
    }

    /// min over [lo, hi)
    double query(std::size_t lo, std::size_t hi) const {
        double m = std::numeric_limits<double>::infinity();
        for (lo += n_, hi += n_; lo < hi; lo /= 2, hi /= 2) {
            if (lo & 1) m = std::min(m, tree_[lo++]);
            if (hi & 1) m = std::min(m, tree_[--hi]);
        }
        return m;
    }

private:
    std::size_t n_;
    std::vector<double> tree_;
};

inline double interpolate_crossing(double t0, double v0, double t1, double v1, double level) {
    if (v1 == v0) return t0;
    return t0 + (level - v0) * (t1 - t0) / (v1 - v0);
}

/// Width at `level` around index p, linear interpolation at the crossings (clamped to the record ends).
inline double width_at(std::span<const double> t, std::span<const double> v, std::size_t p, double level) {
    const std::size_t n = v.size();
    double left = t[0];
    for (std::size_t i = p; i-- > 0;) {
        if (v[i] < level) {
            left = interpolate_crossing(t[i], v[i], t[i + 1], v[i + 1], level);
            break;
        }
    }
    double right = t[n - 1];
    for (std::size_t i = p + 1; i < n; ++i) {
        if (v[i] < level) {
            right = interpolate_crossing(t[i - 1], v[i - 1], t[i], v[i], level);
            break;
        }
    }
    return right - left;
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    if (xs.size() % 2 == 1) return xs[mid];
    const double upper = xs[mid];
    const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace detail

/// Local maxima (three-point test, plateaus collapsed to their centre) whose topographic
/// prominence is at least 1e-3 of the global maximum, each with its FWHM.
inline std::vector<Superpulse> find_superpulses(std::span<const EmissionRecord> records) {
    if (records.empty()) throw analysis_error("empty emission record");
    const std::size_t n = records.size();
    std::vector<double> x(n), times(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = records[i].intensity_scaled;
        times[i] = records[i].t;
    }
    const double global_max = *std::max_element(x.begin(), x.end());
    if (!(global_max > 0.0)) throw analysis_error("emission record is identically zero");

    // Nearest strictly higher sample on each side.
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> prev_higher(n, none), next_higher(n, none), stack;
    for (std::size_t i = 0; i < n; ++i) {
        while (!stack.empty() && x[stack.back()] <= x[i]) stack.pop_back();
        if (!stack.empty()) prev_higher[i] = stack.back();
        stack.push_back(i);
    }
    stack.clear();
    for (std::size_t i = n; i-- > 0;) {
        while (!stack.empty() && x[stack.back()] <= x[i]) stack.pop_back();
        if (!stack.empty()) next_higher[i] = stack.back();
        stack.push_back(i);
    }
    const detail::RangeMin range_min(x);

    std::vector<Superpulse> pulses;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) ++j;
        const bool rises = i == 0 || x[i - 1] < x[i];
        const bool falls = j == n - 1 || x[j + 1] < x[j];
        if (rises && falls && x[i] > 0.0) {
            const std::size_t p = (i + j) / 2;
            const std::size_t lo = prev_higher[i] == none ? 0 : prev_higher[i] + 1;
            const std::size_t hi = next_higher[j] == none ? n : next_higher[j];
            const double base = std::max(range_min.query(lo, i + 1), range_min.query(j, hi));
            const double prominence = x[p] - base;
            if (prominence >= prominence_fraction * global_max) {
                pulses.push_back(
                    {p, records[p].t, x[p], detail::width_at(times, x, p, 0.5 * x[p]), prominence});
            }
        }
        i = j + 1;
    }
    if (pulses.empty()) {
        // A flat-topped record spanning the whole window still carries one pulse.
        const auto p = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
        pulses.push_back({p, records[p].t, x[p], detail::width_at(times, x, p, 0.5 * x[p]), x[p]});
    }
    return pulses;
}

/// Upper envelope: piecewise linear through the superpulse peaks, the signal itself
/// outside the first and last peak (and everywhere for a single pulse).
inline std::vector<EnvelopePoint> envelope(std::span<const EmissionRecord> records) {
    const std::vector<Superpulse> pulses = find_superpulses(records);
    std::vector<EnvelopePoint> out;
    out.reserve(records.size());
    if (pulses.size() == 1) {
        for (const auto& r : records) out.push_back({r.t, r.intensity_scaled});
        return out;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i <= pulses.front().index || i >= pulses.back().index) {
            out.push_back({r.t, r.intensity_scaled});
            continue;
        }
        while (pulses[k + 1].index < i) ++k;
        const Superpulse& a = pulses[k];
        const Superpulse& b = pulses[k + 1];
        const double w = (r.t - a.t_peak) / (b.t_peak - a.t_peak);
        out.push_back({r.t, a.height + w * (b.height - a.height)});
    }
    return out;
}

inline PulseMetrics compute_metrics(std::span<const EmissionRecord> records, const DerivedParams& d) {
    const std::vector<Superpulse> pulses = find_superpulses(records);
    const std::vector<EnvelopePoint> env = envelope(records);

    PulseMetrics m;
    m.predictions = d;
    m.pulses_detected = pulses.size();

    std::size_t peak_index = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].intensity_scaled > records[peak_index].intensity_scaled) peak_index = i;
    m.peak_intensity_scaled = records[peak_index].intensity_scaled;
    m.delay_time = records[peak_index].t;

    std::size_t env_peak = 0;
    for (std::size_t i = 1; i < env.size(); ++i)
        if (env[i].value > env[env_peak].value) env_peak = i;
    std::vector<double> env_t(env.size()), env_v(env.size());
    for (std::size_t i = 0; i < env.size(); ++i) {
        env_t[i] = env[i].t;
        env_v[i] = env[i].value;
    }
    m.envelope_fwhm = detail::width_at(env_t, env_v, env_peak, 0.5 * env[env_peak].value);
    m.tau_c_measured = m.envelope_fwhm / sech2_fwhm_factor();

    const double half = 0.5 * env[env_peak].value;
    std::vector<double> widths;
    std::vector<double> peak_times;
    for (const auto& p : pulses) {
        if (p.height >= half) {
            widths.push_back(p.fwhm);
            peak_times.push_back(p.t_peak);
        }
    }
    m.pulse_count_half_height = widths.size();
    m.tau_1_measured = detail::median(widths);
    if (peak_times.size() >= 2) {
        std::vector<double> gaps;
        for (std::size_t i = 1; i < peak_times.size(); ++i) gaps.push_back(peak_times[i] - peak_times[i - 1]);
        m.median_pulse_spacing = detail::median(gaps);
    }

    m.ratios.tau_c = m.tau_c_measured / d.tau_c_pred;
    m.ratios.tau_1 = m.tau_1_measured / d.tau_1_pred;
    m.ratios.pulse_count = static_cast<double>(m.pulse_count_half_height) / d.pulse_count_pred;
    m.ratios.peak_intensity = m.peak_intensity_scaled / d.peak_intensity_pred;
    m.ratios.delay_time = m.delay_time / d.delay_time_pred;
    return m;
}

}  // namespace superradiance
