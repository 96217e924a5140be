#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "grcsim/types.hpp"

namespace grcsim {

// Internal state vectors never exceed 4 entries; the hydraulic cylinder
// carries both chamber pressures internally and exports P_l = P_1 - P_2.
using StateVec = std::array<double, 4>;

/// Whether a negative radicand under a valve-flow square root aborts
/// (unit tests) or clips to zero with a warning count (batch runs).
enum class RadicandPolicy { Strict, Clip };

// ---------------------------------------------------------------------------
// Parameter sets. Each family ships a documented default (see config/plants/)
// chosen for open-loop time constants in the 0.01-1 s range; the source
// material for the control law gives none.
// ---------------------------------------------------------------------------

/// Universal (series-wound) motor. State: theta [rad], omega [rad/s], i [A].
/// Units: R [ohm], L [H], phi_m [Wb], J_m [kg m^2], b_m [N m s/rad],
/// tau_fs [N m].
struct UniversalMotorParams {
    double R_a = 1.2;
    double R_f = 0.8;
    double L_a = 0.03;
    double L_f = 0.02;
    double phi_m = 0.3;
    double J_m = 0.02;
    double b_m = 0.05;
    double tau_fs = 0.0;     // Coulomb magnitude, applied as tau_fs * shape(omega)
    double v_ref = 0.01;     // tanh reference speed for the friction shape

    void validate() const;
};

/// PMSM-driven linear actuator. State: x_L [m], v [m/s], i_q [A], i_d [A].
/// The rotary/linear coupling is folded into the equivalent mechanical
/// parameters, and the electrical speed uses the velocity state directly.
/// delta_* are multiplicative perturbation fractions on the effective
/// electrical parameters; the controller never sees them.
struct PmsmEdaParams {
    double R_s = 0.8;        // ohm
    double L_d = 0.05;       // H
    double L_q = 0.05;       // H
    double phi_m = 0.25;     // Wb
    int n_p = 4;             // pole pairs
    double J_eq = 0.2;       // kg
    double b_eq = 3.0;       // N s/m
    double k_eq = 0.0;       // N/m
    double f_eq = 1.0;       // load coefficient
    double delta_R_s = 0.0;
    double delta_L_d = 0.0;
    double delta_L_q = 0.0;
    double delta_phi_m = 0.0;
    double delta_J = 0.0;

    void validate() const;
};

/// Double-rod cylinder with a high-response valve (spool dynamics ignored).
/// Exported state: x_L [m], v [m/s], P_l [Pa]; chambers P_1, P_2 are hidden.
struct HdaCylinderParams {
    double V_1 = 1e-3;       // m^3
    double V_2 = 1e-3;       // m^3
    double beta_e = 7e8;     // Pa
    double A_h = 1e-3;       // m^2, ram area in the pressure dynamics
    double C_t = 1e-12;      // m^3/(s Pa)
    double k_u = 2e-8;       // flow gain, m^3/s per (input * sqrt(Pa))
    double P_s = 1.4e7;      // Pa
    double P_r = 0.0;        // Pa
    double J_h = 300.0;      // kg
    double D_h = 1e-3;       // m^2, effective force area
    double b_h = 2000.0;     // N s/m
    double A_f = 100.0;      // N, Coulomb amplitude
    double v_ref = 0.01;     // m/s, tanh reference for the friction shape

    void validate() const;
};

/// Rotational hydraulic motor with explicit valve-spool dynamics.
/// State: theta [rad], omega [rad/s], P_l [Pa], W*x_v [m^2].
/// Default values are a bench-scale stand-in set tuned so the published
/// velocity-drive gains close a stable loop at 1 kHz.
struct HdaMotorParams {
    double tau_v = 0.015;    // s
    double W = 1.0;          // m^2/m
    double K_v = 1.0;        // spool gain
    double C_d = 1.0;        // discharge coefficient
    double rho = 1.0;        // kg/m^3
    double V = 100.0;        // m^3
    double beta_e = 100.0;   // Pa
    double D_eh = 1.0;       // m^3/rad
    double C_t = 0.01;       // m^3/(s Pa)
    double J_eh = 0.2;       // kg m^2
    double b_eh = 0.3;       // N m s/rad
    double P_s = 100.0;      // Pa

    void validate() const;
};

/// Linearized third-order pneumatic actuator: state x_L, v, a.
/// The underlying nonlinear chamber model (mass-flow functions of valve
/// input and chamber pressures, plus the payload force balance) is what
/// this linearization stands in for; its constants are free parameters.
struct PdaParams {
    double a_1 = 0.0;        // 1/s^3
    double a_2 = -5.0;       // 1/s^2
    double a_3 = -20.0;      // 1/s
    double b = 4.0;          // control gain
    double delta_u = 0.0;    // valve neutral offset
    double d = 0.0;          // disturbance baseline

    void validate() const;
};

// ---------------------------------------------------------------------------
// Disturbance profiles. Deterministic given (profile, seed); |D_j| never
// exceeds the declared per-channel magnitude.
// ---------------------------------------------------------------------------

enum class DisturbanceKind { None, Constant, Step, Sine, Noise };

struct DisturbanceProfile {
    DisturbanceKind kind = DisturbanceKind::None;
    std::array<double, 4> magnitude{};  // per channel D_1..D_4
    double t_on = 0.0;                  // step onset
    double frequency = 1.0;             // Hz, sine
    double bandwidth = 5.0;             // Hz, noise upper band
};

std::array<double, 4> sample_disturbance(const DisturbanceProfile& profile, double t,
                                         std::uint64_t seed);

/// Reusable sampler; precomputes the seeded tone bank for the noise kind so
/// tight integration loops avoid re-deriving it every evaluation.
class DisturbanceSampler {
public:
    DisturbanceSampler(const DisturbanceProfile& profile, std::uint64_t seed);
    ~DisturbanceSampler();
    DisturbanceSampler(DisturbanceSampler&&) noexcept;
    DisturbanceSampler& operator=(DisturbanceSampler&&) noexcept;

    std::array<double, 4> operator()(double t) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// State-derivative functions, pure in (state, inputs, params).
// ---------------------------------------------------------------------------

StateVec universal_motor_derivative(const PlantState& state, double V_in, double tau_L,
                                    const UniversalMotorParams& p);

StateVec pmsm_eda_derivative(const PlantState& state, double u_q, double u_d, double f_L,
                             const PmsmEdaParams& p);

/// Exported 3-state form; chamber pressures are reconstructed symmetrically
/// about the supply/return midpoint: P_1,2 = (P_s+P_r)/2 +- P_l/2.
StateVec hda_cylinder_derivative(const PlantState& state, double u, double D_L,
                                 const HdaCylinderParams& p,
                                 RadicandPolicy policy = RadicandPolicy::Strict,
                                 bool* clipped = nullptr);

/// Internal 4-state form (x_L, v, P_1, P_2) used by the simulator.
StateVec hda_cylinder_internal_derivative(const StateVec& s, double u, double D_L,
                                          double q_1, double q_2, const HdaCylinderParams& p,
                                          RadicandPolicy policy, bool* clipped);

/// Valve flows into/out of the cylinder; exposed for direct checks.
double hda_cylinder_flow_q1(double u, double P_1, const HdaCylinderParams& p,
                            RadicandPolicy policy = RadicandPolicy::Strict,
                            bool* clipped = nullptr);
double hda_cylinder_flow_q2(double u, double P_2, const HdaCylinderParams& p,
                            RadicandPolicy policy = RadicandPolicy::Strict,
                            bool* clipped = nullptr);

StateVec hda_motor_derivative(const PlantState& state, double u, double D_L,
                              const HdaMotorParams& p,
                              RadicandPolicy policy = RadicandPolicy::Strict,
                              bool* clipped = nullptr);

StateVec pda_derivative(const PlantState& state, double u, const PdaParams& p,
                        double disturbance);

// ---------------------------------------------------------------------------
// Uniform plant interface for the closed-loop engine. The internal state may
// be wider than the exported one (hydraulic cylinder chambers).
// ---------------------------------------------------------------------------

struct PlantInputs {
    std::array<double, 2> u{};     // physical controls, plant-specific order
    std::array<double, 4> dist{};  // D_1..D_4
};

class Plant {
public:
    virtual ~Plant() = default;

    virtual PlantFamily family() const = 0;
    virtual int internal_dim() const = 0;
    virtual StateVec initial_internal(const PlantState& exported) const = 0;
    virtual StateVec derivative(const StateVec& s, const PlantInputs& in, double t,
                                RadicandPolicy policy, bool* clipped) const = 0;
    virtual PlantState exported(const StateVec& s, double t) const = 0;
};

struct PlantParams {
    UniversalMotorParams universal;
    PmsmEdaParams pmsm;
    HdaCylinderParams hda_cylinder;
    HdaMotorParams hda_motor;
    PdaParams pda;
};

std::unique_ptr<Plant> make_plant(PlantFamily family, const PlantParams& params);

}  // namespace grcsim
