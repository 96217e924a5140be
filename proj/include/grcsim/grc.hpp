#pragma once

#include <array>

#include "grcsim/chain.hpp"
#include "grcsim/types.hpp"

namespace grcsim {

// The controller is model-free: nothing in this module depends on plant
// parameters, and this header must not pull in the plants module.

/// Controller state: gains, per-subsystem adaptive estimates, and the
/// policy for saturating virtual reference controls.
struct GrcState {
    GainSet gains;
    std::array<double, 4> chi{};  // adaptive estimates, >= 0
    /// Apply the input constraint to controls that only serve as references
    /// (u_1, and u_2 for the valve-equipped hydraulic motor). Off by default
    /// for cascaded families; the linearized PDA turns it on, where u_1 is
    /// folded into the acceleration reference and u_2 = u is physical.
    bool saturate_u1 = false;
};

/// Tracking transform: e_j = x_j - x_jd; z_j = e_j except z_2 = e_2 - u_0.
std::array<double, 4> tracking_transform(const SubsystemChain& chain, const PlantState& state,
                                         const ReferenceFrame& refs, double u_0);

/// Control law for subsystem index v (0-based):
/// u_v = -1/2 (k_v + eps_v chi_v) z_{v+1}, with an extra -z_1 term at v=1.
/// z is the 1-based tracking transform stored 0-based (z[0] = z_1).
double grc_control(int v, const GainSet& gains, double chi_v, const std::array<double, 4>& z);

/// One explicit-Euler step of the adaptive law
/// d(chi)/dt = -gamma delta chi + 1/2 eps gamma |z|^2.
/// Requires dt * gamma * delta < 1, which keeps chi nonnegative.
double adaptive_update(double chi_v, int v, const GainSet& gains, double z_next, double dt);

struct GrcTickResult {
    ReferenceFrame refs;
    std::array<double, 4> e{};
    std::array<double, 4> z{};
    std::array<double, 4> u_raw{};       // u_0..u_3 before any constraint
    std::array<double, 3> u_applied{};   // u_1..u_3 as used/applied
    std::array<double, 2> plant_u{};     // physical inputs in plant order
    bool any_saturated = false;
};

/// One control tick, cascade order z_1 -> u_0 -> z_2 -> u_1 -> z_3 -> u_2
/// (-> z_4 -> u_3). z_2 uses the u_0 of the same tick. Physical inputs pass
/// through the input constraint; all adaptive estimates step once.
GrcTickResult grc_tick(const SubsystemChain& chain, GrcState& state,
                       const PlantState& plant_state, const TrajectorySample& traj, double dt);

/// Position-error PID baseline driving the same physical input.
struct PidState {
    double k_p = 0.0;
    double k_i = 0.0;
    double k_d = 0.0;
    double integral_clamp = 1e9;
    double integral = 0.0;
    double prev_error = 0.0;
    bool has_prev = false;
};

double pid_tick(PidState& state, double e, double dt);

}  // namespace grcsim
