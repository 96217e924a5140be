#include "grcsim/types.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace grcsim {

int subsystem_count(PlantFamily family) {
    switch (family) {
        case PlantFamily::UniversalMotorEda: return 3;
        case PlantFamily::PmsmEda: return 4;
        case PlantFamily::HdaCylinder: return 3;
        case PlantFamily::HdaMotorWithValve: return 4;
        case PlantFamily::PdaLinearized: return 3;
    }
    throw std::invalid_argument("unknown plant family");
}

const char* family_name(PlantFamily family) {
    switch (family) {
        case PlantFamily::UniversalMotorEda: return "universal_motor_eda";
        case PlantFamily::PmsmEda: return "pmsm_eda";
        case PlantFamily::HdaCylinder: return "hda_cylinder";
        case PlantFamily::HdaMotorWithValve: return "hda_motor_with_valve";
        case PlantFamily::PdaLinearized: return "pda_linearized";
    }
    throw std::invalid_argument("unknown plant family");
}

PlantFamily family_from_name(const std::string& name) {
    if (name == "universal_motor_eda") return PlantFamily::UniversalMotorEda;
    if (name == "pmsm_eda") return PlantFamily::PmsmEda;
    if (name == "hda_cylinder") return PlantFamily::HdaCylinder;
    if (name == "hda_motor_with_valve") return PlantFamily::HdaMotorWithValve;
    if (name == "pda_linearized") return PlantFamily::PdaLinearized;
    throw std::invalid_argument("unknown plant family name: " + name);
}

bool PlantState::finite() const {
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(x[j])) return false;
    }
    return std::isfinite(t);
}

void GainSet::validate() const {
    if (n < 3 || n > 4) throw std::invalid_argument("GainSet: subsystem count must be 3 or 4");
    for (int v = 0; v < n; ++v) {
        if (!(k[v] >= 0.0)) throw std::invalid_argument("GainSet: k must be >= 0");
        if (!(epsilon[v] > 0.0)) throw std::invalid_argument("GainSet: epsilon must be > 0");
        if (!(gamma[v] > 0.0)) throw std::invalid_argument("GainSet: gamma must be > 0");
        if (!(delta[v] > 0.0)) throw std::invalid_argument("GainSet: delta must be > 0");
    }
}

const char* const kTelemetryCsvHeader =
    "t,x1,x2,x3,x4,x1d,x2d,x3d,x4d,e1,e2,e3,e4,z1,z2,z3,z4,"
    "u0,u1,u2,u3,su1,su2,su3,chi0,chi1,chi2,chi3,d1,d2,d3,d4";

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryRecord>& records) {
    os << kTelemetryCsvHeader << '\n';
    for (const auto& r : records) {
        os << format_real(r.t);
        for (double v : r.x) os << ',' << format_real(v);
        for (double v : r.xd) os << ',' << format_real(v);
        for (double v : r.e) os << ',' << format_real(v);
        for (double v : r.z) os << ',' << format_real(v);
        for (double v : r.u) os << ',' << format_real(v);
        for (double v : r.su) os << ',' << format_real(v);
        for (double v : r.chi) os << ',' << format_real(v);
        for (double v : r.d) os << ',' << format_real(v);
        os << '\n';
    }
}

std::vector<TelemetryRecord> read_telemetry_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("telemetry CSV: empty stream");
    if (line != kTelemetryCsvHeader) throw std::runtime_error("telemetry CSV: unexpected header");

    std::vector<TelemetryRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 32> f{};
        std::size_t pos = 0;
        for (int i = 0; i < 32; ++i) {
            std::size_t next = line.find(',', pos);
            std::string cell = line.substr(pos, next == std::string::npos ? next : next - pos);
            f[i] = std::stod(cell);
            if (next == std::string::npos) {
                if (i != 31) throw std::runtime_error("telemetry CSV: short row");
                pos = line.size();
            } else {
                pos = next + 1;
            }
        }
        TelemetryRecord r;
        int i = 0;
        r.t = f[i++];
        for (double& v : r.x) v = f[i++];
        for (double& v : r.xd) v = f[i++];
        for (double& v : r.e) v = f[i++];
        for (double& v : r.z) v = f[i++];
        for (double& v : r.u) v = f[i++];
        for (double& v : r.su) v = f[i++];
        for (double& v : r.chi) v = f[i++];
        for (double& v : r.d) v = f[i++];
        out.push_back(r);
    }
    return out;
}

}  // namespace grcsim
