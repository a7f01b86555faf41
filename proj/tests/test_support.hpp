#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "superradiance/core_model.hpp"

namespace test_support {

inline superradiance::SampleParams params(std::int64_t n, double omega0, double g,
                                          superradiance::Regime r = superradiance::Regime::Strong) {
    superradiance::SampleParams p;
    p.n_atoms = n;
    p.omega0 = omega0;
    p.g = g;
    p.regime = r;
    return p;
}

inline superradiance::SampleParams fig1() { return params(10'000, 1e6, 1e2); }
inline superradiance::SampleParams fig6() { return params(10'000, 1e6, 0.0); }
inline superradiance::SampleParams fig7() { return params(10'000, 1e6, 0.0, superradiance::Regime::DickeLimit); }

/// Fourth-order central difference of uniformly sampled values at interior index i (2 <= i < n-2).
inline double central_derivative5(std::span<const double> y, std::size_t i, double h) {
    return (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
}

}  // namespace test_support
