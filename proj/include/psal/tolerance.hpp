#pragma once

#include <algorithm>
#include <cmath>

namespace psal {

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

/// Relative comparison against the larger magnitude with an absolute floor.
inline bool approx_equal(double a, double b, double rel = kRelTol, double abs = kAbsTol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, abs);
}

}  // namespace psal
