#include "grcsim/reference.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace grcsim {

TrajectorySample quintic_sample(const QuinticSegment& seg, double t) {
    if (!(seg.T > 0.0)) throw std::invalid_argument("quintic segment: T must be > 0");
    const double tau = (t - seg.t0) / seg.T;
    if (tau <= 0.0) return {seg.x0, 0.0, 0.0};
    if (tau >= 1.0) return {seg.xf, 0.0, 0.0};
    const double span = seg.xf - seg.x0;
    const double t2 = tau * tau;
    const double t3 = t2 * tau;
    const double t4 = t3 * tau;
    const double t5 = t4 * tau;
    TrajectorySample s;
    s.x_d = seg.x0 + span * (10.0 * t3 - 15.0 * t4 + 6.0 * t5);
    s.v_d = span * (30.0 * t2 - 60.0 * t3 + 30.0 * t4) / seg.T;
    s.a_d = span * (60.0 * tau - 180.0 * t2 + 120.0 * t3) / (seg.T * seg.T);
    return s;
}

void VelocityScript::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].t > points[i - 1].t)) {
            throw std::invalid_argument("velocity script: breakpoint times must strictly increase");
        }
    }
}

TrajectorySample velocity_script_sample(const VelocityScript& script, double t) {
    if (script.points.empty()) return {0.0, 0.0, 0.0};
    script.validate();

    // Velocity is constant before the first and after the last breakpoint;
    // position integrates from t = 0.
    double x = 0.0;
    double prev_t = 0.0;
    double prev_v = script.points.front().v;
    for (const auto& bp : script.points) {
        if (bp.t >= t) {
            // interpolate within [prev_t, bp.t]
            const double dt_seg = bp.t - prev_t;
            const double slope = dt_seg > 0.0 ? (bp.v - prev_v) / dt_seg : 0.0;
            const double h = t - prev_t;
            const double v = prev_v + slope * h;
            x += 0.5 * (prev_v + v) * h;
            return {x, v, slope};
        }
        x += 0.5 * (prev_v + bp.v) * (bp.t - prev_t);
        prev_t = bp.t;
        prev_v = bp.v;
    }
    // beyond the last breakpoint
    x += prev_v * (t - prev_t);
    return {x, prev_v, 0.0};
}

VelocityScript load_velocity_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open velocity script: " + path);
    VelocityScript script;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string t_cell, v_cell;
        if (!std::getline(row, t_cell, ',') || !std::getline(row, v_cell)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected `t,v` row");
        }
        script.points.push_back({std::stod(t_cell), std::stod(v_cell)});
    }
    script.validate();
    return script;
}

}  // namespace grcsim
