#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "grcsim/config.hpp"
#include "grcsim/presets.hpp"
#include "grcsim/sim.hpp"

namespace fs = std::filesystem;
using namespace grcsim;

namespace {

#ifndef GRCSIM_DATA_DIR
#define GRCSIM_DATA_DIR "config"
#endif

void write_metrics_file(const fs::path& path, const SimConfig& cfg, const RunResult& result) {
    std::ofstream out(path, std::ios::binary);
    const RunMetrics& m = result.metrics;
    out << "family=" << family_name(cfg.family) << '\n'
        << "preset=" << (cfg.preset_name.empty() ? "-" : cfg.preset_name) << '\n'
        << "controller=" << (cfg.controller == ControllerKind::Grc ? "grc" : "pid") << '\n'
        << "seed=" << cfg.seed << '\n'
        << "duration=" << format_real(cfg.duration) << '\n'
        << "dt=" << format_real(cfg.dt_control) << '\n'
        << "diverged=" << (result.diverged ? 1 : 0) << '\n'
        << "radicand_clips=" << result.radicand_clips << '\n'
        << "rmse_position=" << format_real(m.rmse_position) << '\n'
        << "max_abs_error=" << format_real(m.max_abs_error) << '\n'
        << "settling_time=" << format_real(m.settling_time) << '\n'
        << "settled=" << (m.settled ? 1 : 0) << '\n'
        << "control_saturation_fraction=" << format_real(m.control_saturation_fraction) << '\n'
        << "final_error=" << format_real(m.final_error) << '\n'
        << "initial_xe_norm=" << format_real(m.initial_xe_norm) << '\n'
        << "final_xe_norm=" << format_real(m.final_xe_norm) << '\n';
}

std::map<std::string, std::string> read_metrics_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics file: " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

void write_gnuplot_script(const fs::path& dir) {
    std::ofstream out(dir / "plot.gp", std::ios::binary);
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 't [s]'\n"
        << "plot 'telemetry.csv' using 1:2 with lines title 'x1', \\\n"
        << "     'telemetry.csv' using 1:6 with lines title 'x1d', \\\n"
        << "     'telemetry.csv' using 1:10 with lines title 'e1'\n"
        << "pause -1\n";
}

int do_run(const std::string& preset, const std::string& config_path,
           const std::string& controller, std::string out_dir, long seed_flag, bool seed_set,
           double duration_flag, bool duration_set, bool want_csv, bool want_metrics,
           bool want_gnuplot, const std::string& data_dir) {
    SimConfig cfg;
    try {
        if (!preset.empty()) {
            cfg = make_preset(preset, data_dir);
        } else {
            cfg = parse_sim_config(config_path, data_dir);
        }
        if (controller == "pid") cfg.controller = ControllerKind::Pid;
        else if (controller == "grc") cfg.controller = ControllerKind::Grc;
        if (seed_set) cfg.seed = static_cast<std::uint64_t>(seed_flag);
        if (duration_set) cfg.duration = duration_flag;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    if (out_dir.empty()) {
        if (const char* env = std::getenv("GRC_SIM_OUT")) {
            out_dir = env;
        } else {
            out_dir = "runs/" + (cfg.preset_name.empty() ? std::string("custom") : cfg.preset_name);
        }
    }

    const RunResult result = run_closed_loop(cfg);

    fs::create_directories(out_dir);
    const bool both = !want_csv && !want_metrics;
    if (both || want_csv) {
        std::ofstream csv(fs::path(out_dir) / "telemetry.csv", std::ios::binary);
        write_telemetry_csv(csv, result.telemetry);
    }
    if (both || want_metrics) {
        write_metrics_file(fs::path(out_dir) / "metrics.txt", cfg, result);
    }
    if (want_gnuplot) write_gnuplot_script(out_dir);

    if (result.diverged) {
        std::cerr << "run diverged at tick " << result.diverged_at << '\n';
        return 2;
    }
    std::cout << "completed: " << result.telemetry.size() << " ticks, rmse_position="
              << format_real(result.metrics.rmse_position) << ", out=" << out_dir << '\n';
    return 0;
}

int do_compare(const std::string& dir_a, const std::string& dir_b) {
    std::map<std::string, std::string> ma, mb;
    try {
        ma = read_metrics_file(fs::path(dir_a) / "metrics.txt");
        mb = read_metrics_file(fs::path(dir_b) / "metrics.txt");
    } catch (const std::exception& e) {
        std::cerr << "compare error: " << e.what() << '\n';
        return 1;
    }
    if (ma["family"] != mb["family"]) {
        std::cerr << "compare error: mismatched families (" << ma["family"] << " vs "
                  << mb["family"] << ")\n";
        return 1;
    }
    if (ma["diverged"] != "0" || mb["diverged"] != "0") {
        std::cerr << "compare error: at least one run diverged\n";
        return 1;
    }
    const auto metric = [&](const char* key) {
        return std::pair<double, double>{std::stod(ma.at(key)), std::stod(mb.at(key))};
    };
    std::cout << "metric                        A(" << ma["controller"] << ")            B("
              << mb["controller"] << ")            B/A\n";
    for (const char* key : {"rmse_position", "max_abs_error", "settling_time",
                            "control_saturation_fraction"}) {
        const auto [a, b] = metric(key);
        const double ratio = a == b ? 1.0 : b / a;
        std::printf("%-28s %-16.8g %-16.8g %.8g\n", key, a, b, ratio);
    }
    const auto [rmse_a, rmse_b] = metric("rmse_position");
    const double ratio = rmse_a == rmse_b ? 1.0 : rmse_b / rmse_a;
    std::cout << "rmse ratio B/A = " << format_real(ratio) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generic robust control servo-actuator batch simulator"};
    app.require_subcommand(1);

    std::string preset, config_path, controller = "grc", out_dir, data_dir = GRCSIM_DATA_DIR;
    long seed = 0;
    double duration = 0.0;
    bool want_csv = false, want_metrics = false, want_gnuplot = false;

    auto* run = app.add_subcommand("run", "execute one closed-loop run");
    auto* preset_opt = run->add_option("--preset", preset, "preset name");
    auto* config_opt = run->add_option("--config", config_path, "run config file");
    preset_opt->excludes(config_opt);
    run->add_option("--controller", controller, "grc|pid")
        ->check(CLI::IsMember({"grc", "pid"}));
    run->add_option("--out", out_dir, "output directory (default $GRC_SIM_OUT or runs/<preset>)");
    auto* seed_opt = run->add_option("--seed", seed, "disturbance seed");
    auto* duration_opt = run->add_option("--duration", duration, "run duration [s]");
    run->add_flag("--csv", want_csv, "write telemetry CSV only");
    run->add_flag("--metrics", want_metrics, "write metrics summary only");
    run->add_flag("--gnuplot", want_gnuplot, "emit a gnuplot script next to the CSV");
    run->add_option("--data-dir", data_dir, "plant parameter / script directory");

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "compare two completed runs");
    compare->add_option("dir_a", dir_a, "reference run directory")->required();
    compare->add_option("dir_b", dir_b, "other run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (preset.empty() && config_path.empty()) {
            std::cerr << "config error: need --preset or --config\n";
            return 1;
        }
        return do_run(preset, config_path, controller, out_dir, seed, seed_opt->count() > 0,
                      duration, duration_opt->count() > 0, want_csv, want_metrics, want_gnuplot,
                      data_dir);
    }
    return do_compare(dir_a, dir_b);
}
