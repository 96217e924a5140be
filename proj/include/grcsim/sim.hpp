#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grcsim/chain.hpp"
#include "grcsim/grc.hpp"
#include "grcsim/plants.hpp"
#include "grcsim/reference.hpp"
#include "grcsim/types.hpp"

namespace grcsim {

enum class Integrator { Euler, Rk4 };
enum class ControllerKind { Grc, Pid };

enum class TrajectoryKind { Constant, Quintic, VelocityScript };

struct TrajectoryConfig {
    TrajectoryKind kind = TrajectoryKind::Constant;
    double constant_value = 0.0;
    QuinticSegment quintic;
    VelocityScript script;

    TrajectorySample sample(double t) const;
};

struct SimConfig {
    PlantFamily family = PlantFamily::PmsmEda;
    PlantParams plant;
    GainSet gains;
    std::vector<SaturationLimits> limits;  // u_1..u_{n-1}
    bool saturate_u1 = false;
    ControllerKind controller = ControllerKind::Grc;
    PidState pid;
    double dt_control = 1e-3;
    int substeps = 10;
    double duration = 5.0;
    Integrator integrator = Integrator::Rk4;
    DisturbanceProfile disturbance;
    TrajectoryConfig trajectory;
    PlantState initial_state;  // n filled from family if left 0
    double settle_band = 1e-3;  // +- band for the settling-time metric
    std::uint64_t seed = 1;
    std::string preset_name;

    void validate() const;  // throws std::invalid_argument
};

struct RunMetrics {
    double rmse_position = 0.0;      // post-transient window
    double max_abs_error = 0.0;      // full run
    double settling_time = 0.0;
    bool settled = false;
    double control_saturation_fraction = 0.0;
    double final_error = 0.0;
    double initial_xe_norm = 0.0;
    double final_xe_norm = 0.0;
};

struct RunResult {
    std::vector<TelemetryRecord> telemetry;
    RunMetrics metrics;
    bool diverged = false;
    std::size_t diverged_at = 0;     // record index of the abort, if any
    std::size_t radicand_clips = 0;  // pressure radicands clipped to zero
};

// ---------------------------------------------------------------------------
// Fixed-step explicit integrators with inputs held constant over the step.
// Templated on the scalar so convergence-order checks can run above double
// round-off; the simulator instantiates double.
// ---------------------------------------------------------------------------

template <typename Scalar, typename State, typename Deriv>
State euler_step(const Deriv& f, const State& x, Scalar t, Scalar dt) {
    State k1 = f(x, t);
    State out = x;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + dt * k1[i];
    return out;
}

template <typename Scalar, typename State, typename Deriv>
State rk4_step(const Deriv& f, const State& x, Scalar t, Scalar dt) {
    const Scalar half = dt / Scalar(2);
    State k1 = f(x, t);
    State x2 = x;
    for (std::size_t i = 0; i < x.size(); ++i) x2[i] = x[i] + half * k1[i];
    State k2 = f(x2, t + half);
    State x3 = x;
    for (std::size_t i = 0; i < x.size(); ++i) x3[i] = x[i] + half * k2[i];
    State k3 = f(x3, t + half);
    State x4 = x;
    for (std::size_t i = 0; i < x.size(); ++i) x4[i] = x[i] + dt * k3[i];
    State k4 = f(x4, t + dt);
    State out = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + dt / Scalar(6) * (k1[i] + Scalar(2) * k2[i] + Scalar(2) * k3[i] + k4[i]);
    }
    return out;
}

using DerivFn = std::function<StateVec(const StateVec&, double)>;

StateVec integrate_step(const DerivFn& f, const StateVec& x, double t, double dt,
                        Integrator method);

/// Closed-loop run: sample trajectory, controller tick, zero-order hold,
/// `substeps` plant sub-intervals per control tick, telemetry per tick.
/// Deterministic for a fixed (config, seed).
RunResult run_closed_loop(const SimConfig& config);

/// Metrics over a telemetry series. The post-transient window for the RMSE
/// starts at `transient_skip` of the duration.
RunMetrics compute_metrics(const std::vector<TelemetryRecord>& telemetry, double band,
                           double transient_skip = 0.25);

/// Constrained fit of A e^(-iota t) + B to the decaying envelope (suffix
/// maximum) of ||x_e(t)||^2 = sum z_j^2.
struct BoundFit {
    double A = 0.0;
    double iota = 0.0;
    double B = 0.0;
    double fit_residual = 0.0;
};

BoundFit fit_convergence_bound(const std::vector<TelemetryRecord>& telemetry);
BoundFit fit_exponential_envelope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace grcsim
