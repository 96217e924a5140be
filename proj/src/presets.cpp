#include "grcsim/presets.hpp"

#include <algorithm>

#include "grcsim/config.hpp"

namespace grcsim {

namespace {

GainSet uniform_gains(int n, double k, double eps, double gamma, double delta) {
    GainSet g;
    g.n = n;
    for (int v = 0; v < n; ++v) {
        g.k[v] = k;
        g.epsilon[v] = eps;
        g.gamma[v] = gamma;
        g.delta[v] = delta;
    }
    return g;
}

std::string plant_file(const std::string& data_dir, PlantFamily family) {
    return data_dir + "/plants/" + family_name(family) + ".cfg";
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "eda-quintic", "hda-velocity", "pda-step", "universal-step", "hda-cylinder-quintic",
    };
    return names;
}

SimConfig make_preset(const std::string& name, const std::string& data_dir) {
    SimConfig cfg;
    cfg.preset_name = name;
    cfg.dt_control = 1e-3;
    cfg.substeps = 10;
    cfg.integrator = Integrator::Rk4;
    cfg.seed = 1;

    if (name == "eda-quintic") {
        // Linear PMSM drive tracking a rest-to-rest quintic; published gains.
        cfg.family = PlantFamily::PmsmEda;
        cfg.gains = uniform_gains(4, 35.0, 1.0, 0.001, 0.01);
        cfg.limits = {{-20.0, 20.0}, {-60.0, 60.0}, {-60.0, 60.0}};  // u_1 (i_q ref), u_q, u_d
        cfg.duration = 6.0;
        cfg.trajectory.kind = TrajectoryKind::Quintic;
        cfg.trajectory.quintic = {0.0, 0.1, 5.0, 0.0};
        // Band-limited load-torque fluctuation on the velocity subsystem,
        // standing in for the shifting external load of a loaded drive.
        cfg.disturbance.kind = DisturbanceKind::Noise;
        cfg.disturbance.magnitude = {0.0, 5.0, 0.0, 0.0};
        cfg.disturbance.bandwidth = 5.0;
        cfg.settle_band = 1e-3;
    } else if (name == "hda-velocity") {
        // Valve-equipped hydraulic motor following a scripted joystick
        // velocity; published velocity-drive gains.
        cfg.family = PlantFamily::HdaMotorWithValve;
        cfg.gains = uniform_gains(4, 3.0, 1.0, 0.001, 0.01);
        cfg.limits = {{-50.0, 50.0}, {-20.0, 20.0}, {-10.0, 10.0}};  // P_l ref, spool ref, valve u
        cfg.duration = 10.0;
        cfg.trajectory.kind = TrajectoryKind::VelocityScript;
        cfg.trajectory.script = load_velocity_script(data_dir + "/scripts/hda_velocity.csv");
        cfg.settle_band = 5e-2;
    } else if (name == "pda-step") {
        cfg.family = PlantFamily::PdaLinearized;
        cfg.gains = uniform_gains(3, 10.0, 1.0, 0.001, 0.01);
        cfg.gains.k[1] = 40.0;
        cfg.gains.k[2] = 50.0;
        cfg.limits = {{-20.0, 20.0}, {-30.0, 30.0}};
        cfg.saturate_u1 = true;  // u_1 folds into the acceleration reference
        cfg.duration = 6.0;
        cfg.trajectory.kind = TrajectoryKind::Constant;
        cfg.trajectory.constant_value = 0.05;
        cfg.settle_band = 1e-3;
    } else if (name == "universal-step") {
        cfg.family = PlantFamily::UniversalMotorEda;
        cfg.gains = uniform_gains(3, 35.0, 1.0, 0.001, 0.01);
        cfg.gains.k[1] = 12.0;
        cfg.limits = {{-30.0, 30.0}, {-120.0, 120.0}};  // i ref, V
        cfg.duration = 4.0;
        cfg.trajectory.kind = TrajectoryKind::Constant;
        cfg.trajectory.constant_value = 1.0;
        cfg.settle_band = 1e-2;
    } else if (name == "hda-cylinder-quintic") {
        // Linear cylinder; gains scaled per subsystem because the
        // energy-conversion state is a pressure in Pa.
        cfg.family = PlantFamily::HdaCylinder;
        GainSet g = uniform_gains(3, 8.0, 1.0, 0.001, 0.01);
        g.k[1] = 2.4e7;
        g.k[2] = 6.8e-6;
        g.epsilon[2] = 1e-12;
        cfg.gains = g;
        cfg.limits = {{-1.2e7, 1.2e7}, {-10.0, 10.0}};  // P_l ref, valve input
        cfg.duration = 5.0;
        cfg.trajectory.kind = TrajectoryKind::Quintic;
        cfg.trajectory.quintic = {0.0, 0.2, 4.0, 0.0};
        cfg.settle_band = 1e-3;
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    load_plant_params(plant_file(data_dir, cfg.family), cfg.family, cfg.plant);
    cfg.pid = preset_pid(name);
    cfg.initial_state.n = subsystem_count(cfg.family);
    return cfg;
}

PidState preset_pid(const std::string& name) {
    // Ziegler-Nichols classic PID from measured ultimate gain/period; the
    // pneumatic preset is hand-tuned (its limit cycle is too asymmetric for a
    // period measurement). Procedure and measurements: docs/pid_tuning.md.
    // integral_clamp is sized so k_i * clamp matches the actuator limit.
    PidState pid;
    if (name == "eda-quintic") {
        pid = {.k_p = 47.66, .k_i = 297.4, .k_d = 1.910, .integral_clamp = 0.2};
    } else if (name == "hda-velocity") {
        pid = {.k_p = 0.0959, .k_i = 0.0961, .k_d = 0.0239, .integral_clamp = 104.0};
    } else if (name == "pda-step") {
        pid = {.k_p = 0.1, .k_i = 0.2, .k_d = 0.03, .integral_clamp = 150.0};
    } else if (name == "universal-step") {
        pid = {.k_p = 23.75, .k_i = 123.2, .k_d = 1.145, .integral_clamp = 0.97};
    } else if (name == "hda-cylinder-quintic") {
        pid = {.k_p = 134.4, .k_i = 2920.0, .k_d = 1.546, .integral_clamp = 0.0034};
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return pid;
}

// ---------------------------------------------------------------------------
// Run configuration files
// ---------------------------------------------------------------------------

namespace {

Integrator integrator_from_name(KvFile& kv, const std::string& value) {
    if (value == "euler") return Integrator::Euler;
    if (value == "rk4") return Integrator::Rk4;
    kv.fail("run", "integrator", "expected euler or rk4, got `" + value + "`");
}

void parse_gains(KvFile& kv, int n, GainSet& gains) {
    gains.n = n;
    auto read_array = [&](const char* base, std::array<double, 4>& target, bool positive,
                          const char* invariant) {
        if (auto broadcast = kv.opt_real("gains", base)) {
            for (int v = 0; v < n; ++v) target[v] = *broadcast;
        }
        for (int v = 0; v < n; ++v) {
            const std::string key = std::string(base) + std::to_string(v);
            if (auto val = kv.opt_real("gains", key)) target[v] = *val;
        }
        for (int v = 0; v < n; ++v) {
            const bool ok = positive ? target[v] > 0.0 : target[v] >= 0.0;
            if (!ok) kv.fail("gains", base, invariant);
        }
    };
    read_array("k", gains.k, false, "k must be >= 0");
    read_array("epsilon", gains.epsilon, true, "epsilon must be > 0");
    read_array("gamma", gains.gamma, true, "gamma must be > 0");
    read_array("delta", gains.delta, true, "delta must be > 0");
}

}  // namespace

SimConfig parse_sim_config(const std::string& path, const std::string& data_dir) {
    KvFile kv = KvFile::load(path);

    SimConfig cfg;
    bool from_preset = false;
    if (auto preset = kv.opt_string("run", "preset")) {
        cfg = make_preset(*preset, data_dir);
        from_preset = true;
    }
    if (auto fam = kv.opt_string("run", "family")) {
        cfg.family = family_from_name(*fam);
        if (!from_preset) {
            // Fresh config: defaults plus the family's parameter file.
            load_plant_params(plant_file(data_dir, cfg.family), cfg.family, cfg.plant);
        }
    } else if (!from_preset) {
        throw ConfigError(path + ": missing required key run.family (or run.preset)");
    }
    const int n = subsystem_count(cfg.family);

    if (auto p = kv.opt_string("run", "plant_params")) {
        load_plant_params(*p, cfg.family, cfg.plant);
    }
    if (auto v = kv.opt_real("run", "duration")) cfg.duration = *v;
    if (auto v = kv.opt_real("run", "dt")) cfg.dt_control = *v;
    if (auto v = kv.opt_int("run", "substeps")) cfg.substeps = static_cast<int>(*v);
    if (auto v = kv.opt_string("run", "integrator")) cfg.integrator = integrator_from_name(kv, *v);
    if (auto v = kv.opt_int("run", "seed")) cfg.seed = static_cast<std::uint64_t>(*v);
    if (auto v = kv.opt_real("run", "settle_band")) cfg.settle_band = *v;
    if (auto v = kv.opt_int("run", "saturate_u1")) cfg.saturate_u1 = *v != 0;
    if (auto v = kv.opt_string("run", "controller")) {
        if (*v == "grc") cfg.controller = ControllerKind::Grc;
        else if (*v == "pid") cfg.controller = ControllerKind::Pid;
        else kv.fail("run", "controller", "expected grc or pid");
    }

    if (!from_preset) {
        cfg.gains = uniform_gains(n, 1.0, 1.0, 0.001, 0.01);
    }
    parse_gains(kv, n, cfg.gains);

    if (!from_preset) {
        cfg.limits.assign(static_cast<std::size_t>(n - 1), SaturationLimits{-1e9, 1e9});
    }
    for (int v = 1; v < n; ++v) {
        const std::string lo = "u" + std::to_string(v) + "_min";
        const std::string hi = "u" + std::to_string(v) + "_max";
        if (auto val = kv.opt_real("limits", lo)) cfg.limits[v - 1].u_min = *val;
        if (auto val = kv.opt_real("limits", hi)) cfg.limits[v - 1].u_max = *val;
        if (!cfg.limits[v - 1].valid()) kv.fail("limits", lo, "require u_min < u_max");
    }

    if (auto v = kv.opt_real("pid", "kp")) cfg.pid.k_p = *v;
    if (auto v = kv.opt_real("pid", "ki")) cfg.pid.k_i = *v;
    if (auto v = kv.opt_real("pid", "kd")) cfg.pid.k_d = *v;
    if (auto v = kv.opt_real("pid", "integral_clamp")) cfg.pid.integral_clamp = *v;

    if (auto kind = kv.opt_string("trajectory", "kind")) {
        if (*kind == "constant") {
            cfg.trajectory.kind = TrajectoryKind::Constant;
        } else if (*kind == "quintic") {
            cfg.trajectory.kind = TrajectoryKind::Quintic;
        } else if (*kind == "velocity_script") {
            cfg.trajectory.kind = TrajectoryKind::VelocityScript;
        } else {
            kv.fail("trajectory", "kind", "expected constant, quintic, or velocity_script");
        }
    }
    if (auto v = kv.opt_real("trajectory", "value")) cfg.trajectory.constant_value = *v;
    if (auto v = kv.opt_real("trajectory", "x0")) cfg.trajectory.quintic.x0 = *v;
    if (auto v = kv.opt_real("trajectory", "xf")) cfg.trajectory.quintic.xf = *v;
    if (auto v = kv.opt_real("trajectory", "T")) {
        if (!(*v > 0.0)) kv.fail("trajectory", "T", "T must be > 0");
        cfg.trajectory.quintic.T = *v;
    }
    if (auto v = kv.opt_real("trajectory", "t0")) cfg.trajectory.quintic.t0 = *v;
    if (auto v = kv.opt_string("trajectory", "script")) {
        cfg.trajectory.script = load_velocity_script(*v);
    }

    if (auto kind = kv.opt_string("disturbance", "kind")) {
        if (*kind == "none") cfg.disturbance.kind = DisturbanceKind::None;
        else if (*kind == "constant") cfg.disturbance.kind = DisturbanceKind::Constant;
        else if (*kind == "step") cfg.disturbance.kind = DisturbanceKind::Step;
        else if (*kind == "sine") cfg.disturbance.kind = DisturbanceKind::Sine;
        else if (*kind == "noise") cfg.disturbance.kind = DisturbanceKind::Noise;
        else kv.fail("disturbance", "kind", "expected none, constant, step, sine, or noise");
    }
    if (auto v = kv.opt_real("disturbance", "magnitude")) {
        cfg.disturbance.magnitude.fill(*v);
    }
    for (int j = 1; j <= 4; ++j) {
        const std::string key = "magnitude" + std::to_string(j);
        if (auto v = kv.opt_real("disturbance", key)) cfg.disturbance.magnitude[j - 1] = *v;
    }
    if (auto v = kv.opt_real("disturbance", "t_on")) cfg.disturbance.t_on = *v;
    if (auto v = kv.opt_real("disturbance", "frequency")) cfg.disturbance.frequency = *v;
    if (auto v = kv.opt_real("disturbance", "bandwidth")) cfg.disturbance.bandwidth = *v;

    cfg.initial_state.n = n;
    for (int j = 1; j <= 4; ++j) {
        const std::string key = "x" + std::to_string(j);
        if (auto v = kv.opt_real("initial", key)) {
            if (j > n) kv.fail("initial", key, "state index exceeds subsystem count");
            cfg.initial_state.x[j - 1] = *v;
        }
    }

    kv.finish();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

}  // namespace grcsim
