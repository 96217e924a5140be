#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace grcsim {

/// Actuator family. The tag fixes the subsystem count: position, velocity,
/// one energy-conversion state, and (for the four-subsystem families) a
/// second energy-conversion state.
enum class PlantFamily {
    UniversalMotorEda,   // theta, omega, i
    PmsmEda,             // x_L, v, i_q, i_d
    HdaCylinder,         // x_L, v, P_l
    HdaMotorWithValve,   // theta, omega, P_l, W*x_v
    PdaLinearized,       // x_L, v, a
};

int subsystem_count(PlantFamily family);

const char* family_name(PlantFamily family);
PlantFamily family_from_name(const std::string& name);

/// Exported state of one actuator at one instant. `n` entries of `x` are
/// valid; the rest are zero. Units are SI throughout (m, rad, s, A, V, Pa).
struct PlantState {
    std::array<double, 4> x{};
    int n = 0;
    double t = 0.0;

    bool finite() const;
};

/// Desired values per subsystem at one instant. x3d is controller-fed
/// (equal to u_1) for every family except the linearized PDA, where it is
/// the trajectory acceleration; x4d is 0 for the PMSM and u_2 for the
/// hydraulic motor with valve dynamics.
struct ReferenceFrame {
    double x1d = 0.0;
    double x2d = 0.0;
    double x3d = 0.0;
    double x4d = 0.0;
    bool has_x4d = false;
};

struct SaturationLimits {
    double u_min;
    double u_max;

    bool valid() const { return u_min < u_max; }
};

/// Per-subsystem controller gains, index v = 0..n-1.
/// k_v >= 0; epsilon, gamma, delta strictly positive.
struct GainSet {
    std::array<double, 4> k{};
    std::array<double, 4> epsilon{};
    std::array<double, 4> gamma{};
    std::array<double, 4> delta{};
    int n = 0;

    void validate() const;  // throws std::invalid_argument on a bad entry
};

/// One sample of the closed loop. Fields for absent subsystems hold 0;
/// `present` has bit j set when subsystem j+1 exists. The CSV layout is
/// fixed-width so runs of different families diff column-for-column.
struct TelemetryRecord {
    double t = 0.0;
    std::array<double, 4> x{};       // x1..x4
    std::array<double, 4> xd{};      // x1d..x4d
    std::array<double, 4> e{};       // e1..e4
    std::array<double, 4> z{};       // z1..z4
    std::array<double, 4> u{};       // u0..u3, raw
    std::array<double, 3> su{};      // applied u1..u3
    std::array<double, 4> chi{};     // adaptive estimates
    std::array<double, 4> d{};       // injected disturbances D1..D4
    std::uint8_t present = 0;        // presence mask, bit j = subsystem j+1
};

// Telemetry CSV, bit-exact schema: single header row, ',' delimiter,
// reals with 17 significant digits so doubles round-trip losslessly.
extern const char* const kTelemetryCsvHeader;

void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryRecord>& records);
std::vector<TelemetryRecord> read_telemetry_csv(std::istream& is);

std::string format_real(double v);  // 17 significant digits

}  // namespace grcsim
