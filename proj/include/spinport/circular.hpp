#pragma once

#include "spinport/linalg.hpp"

#include <cmath>
#include <span>

namespace spinport {

struct CircularMean {
    double angle = 0.0;     ///< in (-pi, pi]; 0 when degenerate
    double resultant = 0.0; ///< |sum w e^{i a}| / sum w, in [0, 1]
    bool degenerate = false;
};

inline constexpr double kResultantFloor = 1e-12;

/// arg(sum_i w_i exp(i a_i)). Weights must be non-negative with a positive sum.
inline CircularMean weighted_circular_mean(std::span<const double> angles, std::span<const double> weights) {
    detail::require(!angles.empty(), "circular mean: no angles");
    detail::require(angles.size() == weights.size(), "circular mean: weight count mismatch");
    double wsum = 0.0, c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        detail::require(weights[i] >= 0.0, "circular mean: negative weight");
        wsum += weights[i];
        c += weights[i] * std::cos(angles[i]);
        s += weights[i] * std::sin(angles[i]);
    }
    detail::require(wsum > 0.0, "circular mean: weights sum to zero");
    CircularMean m;
    m.resultant = std::hypot(c, s) / wsum;
    if (m.resultant < kResultantFloor) {
        m.degenerate = true;
        return m;
    }
    m.angle = std::atan2(s, c);
    return m;
}

} // namespace spinport
