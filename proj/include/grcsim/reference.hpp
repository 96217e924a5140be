#pragma once

#include <vector>

#include "grcsim/chain.hpp"

namespace grcsim {

/// Rest-to-rest quintic point-to-point segment:
/// x(tau) = x0 + (xf - x0)(10 tau^3 - 15 tau^4 + 6 tau^5), tau = (t-t0)/T.
/// Velocity and acceleration vanish at both ends; samples clamp to the
/// endpoints outside [t0, t0+T].
struct QuinticSegment {
    double x0 = 0.0;
    double xf = 0.0;
    double T = 1.0;
    double t0 = 0.0;
};

TrajectorySample quintic_sample(const QuinticSegment& seg, double t);

/// Scripted velocity reference: piecewise-linear velocity through (time,
/// velocity) breakpoints, constant beyond the ends. Position is the exact
/// running integral, acceleration the segment slope.
struct VelocityScript {
    struct Breakpoint {
        double t;
        double v;
    };
    std::vector<Breakpoint> points;  // strictly increasing t

    void validate() const;
};

TrajectorySample velocity_script_sample(const VelocityScript& script, double t);

/// Loads a script from CSV rows of `t,v`.
VelocityScript load_velocity_script(const std::string& path);

}  // namespace grcsim
