#include "grcsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "grcsim/saturation.hpp"

namespace grcsim {

TrajectorySample TrajectoryConfig::sample(double t) const {
    switch (kind) {
        case TrajectoryKind::Constant:
            return {constant_value, 0.0, 0.0};
        case TrajectoryKind::Quintic:
            return quintic_sample(quintic, t);
        case TrajectoryKind::VelocityScript:
            return velocity_script_sample(script, t);
    }
    throw std::logic_error("unknown trajectory kind");
}

void SimConfig::validate() const {
    const int n = grcsim::subsystem_count(family);
    if (gains.n != n) throw std::invalid_argument("gains present for wrong subsystem count");
    gains.validate();
    if (static_cast<int>(limits.size()) != n - 1) {
        throw std::invalid_argument("expected one saturation limit set per non-virtual control");
    }
    for (const auto& l : limits) {
        if (!l.valid()) throw std::invalid_argument("saturation limits require u_min < u_max");
    }
    if (!(dt_control > 0.0)) throw std::invalid_argument("dt_control must be > 0");
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    for (int v = 0; v < n; ++v) {
        if (!(dt_control * gains.gamma[v] * gains.delta[v] < 1.0)) {
            throw std::invalid_argument("require dt * gamma * delta < 1 for every subsystem");
        }
    }
}

StateVec integrate_step(const DerivFn& f, const StateVec& x, double t, double dt,
                        Integrator method) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be > 0");
    auto g = [&f](const StateVec& s, double tau) { return f(s, tau); };
    return method == Integrator::Euler ? euler_step<double>(g, x, t, dt)
                                       : rk4_step<double>(g, x, t, dt);
}

namespace {

bool finite_state(const StateVec& s) {
    for (double v : s) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace

RunResult run_closed_loop(const SimConfig& config) {
    config.validate();
    const int n = subsystem_count(config.family);

    auto plant = make_plant(config.family, config.plant);
    const SubsystemChain chain = build_chain(config.family, config.limits);
    DisturbanceSampler disturbance(config.disturbance, config.seed);

    GrcState grc;
    grc.gains = config.gains;
    grc.saturate_u1 = config.saturate_u1;
    PidState pid = config.pid;

    PlantState init = config.initial_state;
    init.n = n;
    StateVec s = plant->initial_internal(init);

    const double dt = config.dt_control;
    const auto ticks = static_cast<std::size_t>(std::llround(config.duration / dt));
    const double h = dt / config.substeps;

    RunResult result;
    result.telemetry.reserve(ticks);
    const std::uint8_t present = static_cast<std::uint8_t>((1u << n) - 1u);

    bool clipped_this_tick = false;
    for (std::size_t k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (!finite_state(s)) {
            result.diverged = true;
            result.diverged_at = k;
            break;
        }
        const PlantState exported = plant->exported(s, t);
        const TrajectorySample traj = config.trajectory.sample(t);

        TelemetryRecord rec;
        rec.t = t;
        rec.x = exported.x;
        rec.present = present;
        rec.d = disturbance(t);

        PlantInputs inputs;
        inputs.dist = rec.d;
        if (config.controller == ControllerKind::Grc) {
            const GrcTickResult tick = grc_tick(chain, grc, exported, traj, dt);
            rec.xd = {tick.refs.x1d, tick.refs.x2d, tick.refs.x3d, tick.refs.x4d};
            rec.e = tick.e;
            rec.z = tick.z;
            rec.u = tick.u_raw;
            rec.su = tick.u_applied;
            rec.chi = grc.chi;  // post-update estimates
            inputs.u = tick.plant_u;
        } else {
            const double e1 = exported.x[0] - traj.x_d;
            // pid_tick wants the classical setpoint-minus-measurement error.
            const double u_raw = pid_tick(pid, -e1, dt);
            const int phys = chain.physical_input_index;
            const auto split = saturate(u_raw, chain.limits[phys - 1]);
            rec.xd = {traj.x_d, traj.v_d, 0.0, 0.0};
            rec.e[0] = e1;
            rec.e[1] = exported.x[1] - traj.v_d;
            rec.z[0] = e1;
            rec.z[1] = rec.e[1];
            rec.u[phys] = u_raw;
            rec.su[phys - 1] = split.value;
            inputs.u = {split.value, 0.0};
        }
        result.telemetry.push_back(rec);

        clipped_this_tick = false;
        auto f = [&](const StateVec& state, double tau) {
            PlantInputs in = inputs;
            in.dist = disturbance(tau);
            return plant->derivative(state, in, tau, RadicandPolicy::Clip, &clipped_this_tick);
        };
        for (int i = 0; i < config.substeps; ++i) {
            const double sub_t = t + i * h;
            s = config.integrator == Integrator::Euler ? euler_step<double>(f, s, sub_t, h)
                                                       : rk4_step<double>(f, s, sub_t, h);
        }
        if (clipped_this_tick) ++result.radicand_clips;
    }

    if (!result.telemetry.empty()) {
        result.metrics = compute_metrics(result.telemetry, config.settle_band);
    }
    return result;
}

RunMetrics compute_metrics(const std::vector<TelemetryRecord>& telemetry, double band,
                           double transient_skip) {
    if (telemetry.empty()) throw std::invalid_argument("compute_metrics: empty telemetry");
    RunMetrics m;
    const double t_end = telemetry.back().t;
    const double window_start = transient_skip * t_end;

    double sq_sum = 0.0;
    std::size_t sq_count = 0;
    std::size_t saturated_ticks = 0;
    std::size_t last_outside = 0;
    bool ever_outside = false;
    for (std::size_t i = 0; i < telemetry.size(); ++i) {
        const auto& r = telemetry[i];
        const double ae = std::abs(r.e[0]);
        m.max_abs_error = std::max(m.max_abs_error, ae);
        if (r.t >= window_start) {
            sq_sum += ae * ae;
            ++sq_count;
        }
        if (ae > band) {
            last_outside = i;
            ever_outside = true;
        }
        for (int j = 0; j < 3; ++j) {
            if (r.su[j] != r.u[j + 1]) {
                ++saturated_ticks;
                break;
            }
        }
    }
    m.rmse_position = sq_count ? std::sqrt(sq_sum / sq_count) : 0.0;
    m.control_saturation_fraction =
        static_cast<double>(saturated_ticks) / static_cast<double>(telemetry.size());
    m.final_error = std::abs(telemetry.back().e[0]);
    if (!ever_outside) {
        m.settling_time = 0.0;
        m.settled = true;
    } else if (last_outside + 1 < telemetry.size()) {
        m.settling_time = telemetry[last_outside + 1].t;
        m.settled = true;
    } else {
        m.settling_time = t_end;
        m.settled = false;
    }

    auto xe_norm = [](const TelemetryRecord& r) {
        double acc = 0.0;
        for (double z : r.z) acc += z * z;
        return std::sqrt(acc);
    };
    m.initial_xe_norm = xe_norm(telemetry.front());
    m.final_xe_norm = xe_norm(telemetry.back());
    return m;
}

// ---------------------------------------------------------------------------
// Envelope fit
// ---------------------------------------------------------------------------

namespace {

struct LinearFit {
    double A;
    double B;
    double residual;  // mean squared
};

// Least squares of y ~ A e^(-iota t) + B for fixed iota, A and B clamped
// nonnegative.
LinearFit fit_for_rate(const std::vector<double>& t, const std::vector<double>& y, double iota) {
    const std::size_t n = t.size();
    double se = 0.0, see = 0.0, sy = 0.0, sey = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-iota * t[i]);
        se += e;
        see += e * e;
        sy += y[i];
        sey += e * y[i];
    }
    const double nn = static_cast<double>(n);
    const double det = see * nn - se * se;
    double A, B;
    if (std::abs(det) < 1e-300) {
        A = 0.0;
        B = sy / nn;
    } else {
        A = (sey * nn - se * sy) / det;
        B = (see * sy - se * sey) / det;
    }
    if (A < 0.0) {
        A = 0.0;
        B = sy / nn;
    }
    if (B < 0.0) {
        B = 0.0;
        A = see > 0.0 ? std::max(0.0, sey / see) : 0.0;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = A * std::exp(-iota * t[i]) + B - y[i];
        rss += r * r;
    }
    return {A, B, rss / nn};
}

}  // namespace

BoundFit fit_exponential_envelope(const std::vector<double>& t_in, const std::vector<double>& y_in) {
    if (t_in.size() != y_in.size() || t_in.empty()) {
        throw std::invalid_argument("envelope fit: mismatched or empty series");
    }
    const std::size_t n = t_in.size();

    // Time relative to the first sample; decaying upper envelope via suffix
    // maximum, honoring the one-sided bound.
    std::vector<double> t(n), env(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t_in[i] - t_in.front();
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        running = std::max(running, y_in[i]);
        env[i] = running;
    }

    const double peak = *std::max_element(env.begin(), env.end());
    if (peak <= 0.0) return {0.0, 0.0, 0.0, 0.0};

    // Coarse log-spaced scan over the decay rate, then golden-section refine.
    double best_iota = 0.0;
    LinearFit best = fit_for_rate(t, env, 0.0);
    const double lo = 1e-3, hi = 1e4;
    const int steps = 140;
    for (int i = 0; i <= steps; ++i) {
        const double iota = lo * std::pow(hi / lo, static_cast<double>(i) / steps);
        const LinearFit f = fit_for_rate(t, env, iota);
        if (f.residual < best.residual) {
            best = f;
            best_iota = iota;
        }
    }
    if (best_iota > 0.0) {
        double a = best_iota / std::pow(hi / lo, 1.0 / steps);
        double b = best_iota * std::pow(hi / lo, 1.0 / steps);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - phi * (b - a);
        double x2 = a + phi * (b - a);
        LinearFit f1 = fit_for_rate(t, env, x1);
        LinearFit f2 = fit_for_rate(t, env, x2);
        for (int it = 0; it < 80; ++it) {
            if (f1.residual < f2.residual) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = fit_for_rate(t, env, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = fit_for_rate(t, env, x2);
            }
        }
        const double iota = 0.5 * (a + b);
        const LinearFit f = fit_for_rate(t, env, iota);
        if (f.residual <= best.residual) {
            best = f;
            best_iota = iota;
        }
    }
    if (best.A <= 1e-12 * peak) best_iota = 0.0;  // no decaying component
    return {best.A, best_iota, best.B, std::sqrt(best.residual)};
}

BoundFit fit_convergence_bound(const std::vector<TelemetryRecord>& telemetry) {
    if (telemetry.size() < 100) {
        throw std::invalid_argument("fit_convergence_bound: need at least 100 samples");
    }
    std::vector<double> t(telemetry.size()), y(telemetry.size());
    for (std::size_t i = 0; i < telemetry.size(); ++i) {
        t[i] = telemetry[i].t;
        double acc = 0.0;
        for (double z : telemetry[i].z) acc += z * z;
        y[i] = acc;
    }
    return fit_exponential_envelope(t, y);
}

}  // namespace grcsim
