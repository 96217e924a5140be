#include "grcsim/grc.hpp"

#include <algorithm>
#include <stdexcept>

#include "grcsim/saturation.hpp"

namespace grcsim {

std::array<double, 4> tracking_transform(const SubsystemChain& chain, const PlantState& state,
                                         const ReferenceFrame& refs, double u_0) {
    if (state.n != chain.n) throw std::invalid_argument("state/chain subsystem count mismatch");
    std::array<double, 4> z{};
    const std::array<double, 4> xd{refs.x1d, refs.x2d, refs.x3d, refs.x4d};
    for (int j = 0; j < chain.n; ++j) {
        z[j] = state.x[j] - xd[j];
    }
    z[1] -= u_0;
    return z;
}

double grc_control(int v, const GainSet& gains, double chi_v, const std::array<double, 4>& z) {
    double u = -0.5 * (gains.k[v] + gains.epsilon[v] * chi_v) * z[v];
    if (v == 1) u -= z[0];
    return u;
}

double adaptive_update(double chi_v, int v, const GainSet& gains, double z_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("adaptive_update: dt must be > 0");
    const double gd = gains.gamma[v] * gains.delta[v];
    if (!(dt * gd < 1.0)) {
        throw std::invalid_argument("adaptive_update: require dt * gamma * delta < 1");
    }
    const double rate = -gd * chi_v + 0.5 * gains.epsilon[v] * gains.gamma[v] * z_next * z_next;
    return chi_v + dt * rate;
}

GrcTickResult grc_tick(const SubsystemChain& chain, GrcState& state,
                       const PlantState& plant_state, const TrajectorySample& traj, double dt) {
    const int n = chain.n;
    if (plant_state.n != n) throw std::invalid_argument("grc_tick: state/chain mismatch");
    const GainSet& g = state.gains;

    GrcTickResult r;

    // Subsystem 1 and the virtual control.
    r.e[0] = plant_state.x[0] - traj.x_d;
    r.z[0] = r.e[0];
    r.u_raw[0] = grc_control(0, g, state.chi[0], r.z);

    // Subsystem 2; z_2 uses this tick's u_0.
    r.e[1] = plant_state.x[1] - traj.v_d;
    r.z[1] = r.e[1] - r.u_raw[0];
    r.u_raw[1] = grc_control(1, g, state.chi[1], r.z);

    // u_1 is a reference correction everywhere (physical inputs start at
    // index 2); constrain it only when configured.
    double u1_eff = r.u_raw[1];
    if (state.saturate_u1) {
        const auto split = saturate(r.u_raw[1], chain.limits[0]);
        u1_eff = split.value;
        if (split.s1 != 1.0) r.any_saturated = true;
    }
    r.u_applied[0] = u1_eff;

    // Subsystem 3.
    const double x3d = chain.routing[2] == RefSource::TrajectoryAcceleration
                           ? traj.a_d + u1_eff
                           : u1_eff;
    r.e[2] = plant_state.x[2] - x3d;
    r.z[2] = r.e[2];
    r.u_raw[2] = grc_control(2, g, state.chi[2], r.z);

    double u2_eff = r.u_raw[2];
    if (chain.is_physical(2)) {
        const auto split = saturate(r.u_raw[2], chain.limits[1]);
        u2_eff = split.value;
        if (split.s1 != 1.0) r.any_saturated = true;
    } else if (state.saturate_u1) {
        const auto split = saturate(r.u_raw[2], chain.limits[1]);
        u2_eff = split.value;
        if (split.s1 != 1.0) r.any_saturated = true;
    }
    r.u_applied[1] = u2_eff;

    // Optional subsystem 4 (parallel d-axis loop or valve spool stage).
    double u3_eff = 0.0;
    if (n == 4) {
        const double x4d = chain.routing[3] == RefSource::ControlU2 ? u2_eff : 0.0;
        r.e[3] = plant_state.x[3] - x4d;
        r.z[3] = r.e[3];
        r.u_raw[3] = grc_control(3, g, state.chi[3], r.z);
        const auto split = saturate(r.u_raw[3], chain.limits[2]);
        u3_eff = split.value;
        if (split.s1 != 1.0) r.any_saturated = true;
        r.u_applied[2] = u3_eff;
    }

    r.refs = assemble_references(chain, traj, u1_eff, u2_eff);

    // Physical inputs in plant order.
    switch (chain.family) {
        case PlantFamily::PmsmEda:
            r.plant_u = {u2_eff, u3_eff};  // u_q, u_d
            break;
        case PlantFamily::HdaMotorWithValve:
            r.plant_u = {u3_eff, 0.0};
            break;
        default:
            r.plant_u = {u2_eff, 0.0};
            break;
    }

    // Adaptive estimates, one Euler step each on |z_{v+1}|^2.
    for (int v = 0; v < n; ++v) {
        state.chi[v] = adaptive_update(state.chi[v], v, g, r.z[v], dt);
    }
    return r;
}

double pid_tick(PidState& state, double e, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("pid_tick: dt must be > 0");
    state.integral += e * dt;
    state.integral = std::clamp(state.integral, -state.integral_clamp, state.integral_clamp);
    const double de = state.has_prev ? (e - state.prev_error) / dt : 0.0;
    state.prev_error = e;
    state.has_prev = true;
    return state.k_p * e + state.k_i * state.integral + state.k_d * de;
}

}  // namespace grcsim
