#pragma once

#include <string>
#include <vector>

#include "grcsim/sim.hpp"

namespace grcsim {

/// Built-in experiment presets. Gains published for the two headline
/// experiments are used verbatim (k=35 for the quintic EDA drive, k=3 for
/// the joystick-velocity HDA drive, both with epsilon=1, gamma=0.001,
/// delta=0.01 at 1 kHz); the remaining presets use desk-tuned gains.
const std::vector<std::string>& preset_names();

/// Builds a preset configuration. `data_dir` locates plant parameter files
/// and trajectory scripts (the repo's config/ directory).
SimConfig make_preset(const std::string& name, const std::string& data_dir);

/// Parses a `[section] key = value` run configuration. A `[run] preset`
/// key seeds the config from that preset before overrides apply. Unknown
/// keys are rejected with file:line context.
SimConfig parse_sim_config(const std::string& path, const std::string& data_dir);

/// Default PID baseline gains per preset (position error to physical
/// input; see docs/pid_tuning.md for the procedure).
PidState preset_pid(const std::string& name);

}  // namespace grcsim
