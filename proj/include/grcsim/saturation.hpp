#pragma once

#include <cmath>
#include <stdexcept>

#include "grcsim/types.hpp"

namespace grcsim {

/// Decomposition of a clamped control input into value = s1*u + s2.
/// s1 is 1 (and s2 is 0) on the closed interval [u_min, u_max]; outside,
/// s1 = 1/(|u|+1) and s2 shifts the result onto the violated bound.
struct SaturationSplit {
    double s1;
    double s2;
    double value;
};

inline SaturationSplit saturate(double u, const SaturationLimits& limits) {
    if (!std::isfinite(u)) throw std::domain_error("non-finite control input");
    if (!limits.valid()) throw std::invalid_argument("invalid saturation limits");
    if (u > limits.u_max) {
        const double s1 = 1.0 / (std::abs(u) + 1.0);
        return {s1, limits.u_max - u * s1, limits.u_max};
    }
    if (u < limits.u_min) {
        const double s1 = 1.0 / (std::abs(u) + 1.0);
        return {s1, limits.u_min - u * s1, limits.u_min};
    }
    return {1.0, 0.0, u};
}

/// Hydraulic flow-direction selector: 1 for u >= 0, else 0.
inline double sign_select(double u) {
    return u >= 0.0 ? 1.0 : 0.0;
}

}  // namespace grcsim
