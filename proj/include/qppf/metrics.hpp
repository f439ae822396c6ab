#pragma once

#include "qppf/pattern.hpp"

// Distinguishability cost functions between patterns.
namespace qppf::metrics {

// Adopted discrimination threshold for the aleph metrics.
inline constexpr double kDiscriminationThreshold = 0.05;

// Default measurement window L (m).
inline constexpr double kDefaultWindow = 1e-7;

struct MetricResult {
    double value = 0.0; // in [0, 1]
    double window = 0.0;
    int samples = 0;
    pattern::Kind first = pattern::Kind::kQuantum;
    pattern::Kind second = pattern::Kind::kClassical;
};

// Windowed normalized L1 distance
//   aleph = (1/L) Int_{-L/2}^{L/2} |P1 - P2| / |P1 + P2| dz
// by trapezoidal rule on the shared grid. Both patterns must share their z
// grid and cover the window.
MetricResult aleph(const pattern::Pattern& p1, const pattern::Pattern& p2,
                   double window = kDefaultWindow);

} // namespace qppf::metrics
