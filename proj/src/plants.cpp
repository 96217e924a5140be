#include "grcsim/plants.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "grcsim/saturation.hpp"

namespace grcsim {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

void require_finite_state(const PlantState& s, int expected_n) {
    if (s.n != expected_n) throw std::invalid_argument("plant state has wrong subsystem count");
    if (!s.finite()) throw std::domain_error("non-finite plant state");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite input: ") + name);
}

double friction_shape(double v, double v_ref) {
    return std::tanh(v / v_ref);
}

double checked_sqrt(double radicand, RadicandPolicy policy, bool* clipped) {
    if (radicand < 0.0) {
        if (policy == RadicandPolicy::Strict) throw std::domain_error("pressure bound violated");
        if (clipped) *clipped = true;
        return 0.0;
    }
    return std::sqrt(radicand);
}

}  // namespace

void UniversalMotorParams::validate() const {
    require_positive(R_a, "R_a");
    require_positive(R_f, "R_f");
    require_positive(L_a, "L_a");
    require_positive(L_f, "L_f");
    require_positive(phi_m, "phi_m");
    require_positive(J_m, "J_m");
    require_positive(b_m, "b_m");
    require_positive(v_ref, "v_ref");
    if (!(tau_fs >= 0.0)) throw std::invalid_argument("tau_fs must be >= 0");
}

void PmsmEdaParams::validate() const {
    require_positive(R_s, "R_s");
    require_positive(L_d, "L_d");
    require_positive(L_q, "L_q");
    require_positive(phi_m, "phi_m");
    require_positive(J_eq, "J_eq");
    require_positive(b_eq, "b_eq");
    if (n_p < 1) throw std::invalid_argument("n_p must be >= 1");
    if (!(k_eq >= 0.0)) throw std::invalid_argument("k_eq must be >= 0");
    for (double f : {delta_R_s, delta_L_d, delta_L_q, delta_phi_m, delta_J}) {
        if (!(std::abs(f) <= 0.5)) throw std::invalid_argument("|delta fraction| must be <= 0.5");
    }
}

void HdaCylinderParams::validate() const {
    require_positive(V_1, "V_1");
    require_positive(V_2, "V_2");
    require_positive(beta_e, "beta_e");
    require_positive(A_h, "A_h");
    require_positive(k_u, "k_u");
    require_positive(J_h, "J_h");
    require_positive(D_h, "D_h");
    require_positive(b_h, "b_h");
    require_positive(v_ref, "v_ref");
    if (!(C_t >= 0.0)) throw std::invalid_argument("C_t must be >= 0");
    if (!(A_f >= 0.0)) throw std::invalid_argument("A_f must be >= 0");
    if (!(P_s > P_r) || !(P_r >= 0.0)) throw std::invalid_argument("require P_s > P_r >= 0");
}

void HdaMotorParams::validate() const {
    require_positive(tau_v, "tau_v");
    require_positive(W, "W");
    require_positive(K_v, "K_v");
    require_positive(C_d, "C_d");
    require_positive(rho, "rho");
    require_positive(V, "V");
    require_positive(beta_e, "beta_e");
    require_positive(D_eh, "D_eh");
    require_positive(C_t, "C_t");
    require_positive(J_eh, "J_eh");
    require_positive(b_eh, "b_eh");
    require_positive(P_s, "P_s");
}

void PdaParams::validate() const {
    if (b == 0.0) throw std::invalid_argument("b must be nonzero");
}

// ---------------------------------------------------------------------------
// Disturbances
// ---------------------------------------------------------------------------

namespace {

// Band-limited noise as a fixed sum of seeded sinusoids, so the signal is a
// pure function of t and stays within the declared magnitude.
struct NoiseBank {
    static constexpr int kTones = 8;
    std::array<std::array<double, kTones>, 4> freq{};
    std::array<std::array<double, kTones>, 4> phase{};

    NoiseBank(double bandwidth, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> f(0.05 * bandwidth, bandwidth);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
        for (auto& row : freq)
            for (double& v : row) v = f(rng);
        for (auto& row : phase)
            for (double& v : row) v = ph(rng);
    }

    double sample(int channel, double t) const {
        double acc = 0.0;
        for (int i = 0; i < kTones; ++i) {
            acc += std::sin(2.0 * M_PI * freq[channel][i] * t + phase[channel][i]);
        }
        return acc / kTones;
    }
};

}  // namespace

std::array<double, 4> sample_disturbance(const DisturbanceProfile& profile, double t,
                                         std::uint64_t seed) {
    if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
    std::array<double, 4> d{};
    switch (profile.kind) {
        case DisturbanceKind::None:
            break;
        case DisturbanceKind::Constant:
            d = profile.magnitude;
            break;
        case DisturbanceKind::Step:
            if (t >= profile.t_on) d = profile.magnitude;
            break;
        case DisturbanceKind::Sine: {
            const double s = std::sin(2.0 * M_PI * profile.frequency * t);
            for (int j = 0; j < 4; ++j) d[j] = profile.magnitude[j] * s;
            break;
        }
        case DisturbanceKind::Noise: {
            NoiseBank bank(profile.bandwidth, seed);
            for (int j = 0; j < 4; ++j) d[j] = profile.magnitude[j] * bank.sample(j, t);
            break;
        }
    }
    return d;
}

struct DisturbanceSampler::Impl {
    DisturbanceProfile profile;
    std::uint64_t seed;
    std::unique_ptr<NoiseBank> bank;
};

DisturbanceSampler::DisturbanceSampler(const DisturbanceProfile& profile, std::uint64_t seed)
    : impl_(std::make_unique<Impl>()) {
    impl_->profile = profile;
    impl_->seed = seed;
    if (profile.kind == DisturbanceKind::Noise) {
        impl_->bank = std::make_unique<NoiseBank>(profile.bandwidth, seed);
    }
}

DisturbanceSampler::~DisturbanceSampler() = default;
DisturbanceSampler::DisturbanceSampler(DisturbanceSampler&&) noexcept = default;
DisturbanceSampler& DisturbanceSampler::operator=(DisturbanceSampler&&) noexcept = default;

std::array<double, 4> DisturbanceSampler::operator()(double t) const {
    if (impl_->profile.kind == DisturbanceKind::Noise) {
        std::array<double, 4> d{};
        for (int j = 0; j < 4; ++j) {
            d[j] = impl_->profile.magnitude[j] * impl_->bank->sample(j, t);
        }
        return d;
    }
    return sample_disturbance(impl_->profile, t, impl_->seed);
}

// ---------------------------------------------------------------------------
// Derivatives
// ---------------------------------------------------------------------------

StateVec universal_motor_derivative(const PlantState& state, double V_in, double tau_L,
                                    const UniversalMotorParams& p) {
    require_finite_state(state, 3);
    require_finite(V_in, "V_in");
    require_finite(tau_L, "tau_L");
    const double omega = state.x[1];
    const double i = state.x[2];
    const double L = p.L_a + p.L_f;
    const double R = p.R_a + p.R_f;
    const double emf = omega * p.phi_m;
    StateVec dx{};
    dx[0] = omega;
    dx[1] = (p.phi_m * i - p.b_m * omega - tau_L - p.tau_fs * friction_shape(omega, p.v_ref)) / p.J_m;
    dx[2] = (V_in - R * i - emf) / L;
    return dx;
}

StateVec pmsm_eda_derivative(const PlantState& state, double u_q, double u_d, double f_L,
                             const PmsmEdaParams& p) {
    require_finite_state(state, 4);
    require_finite(u_q, "u_q");
    require_finite(u_d, "u_d");
    require_finite(f_L, "f_L");
    const double x = state.x[0];
    const double v = state.x[1];
    const double i_q = state.x[2];
    const double i_d = state.x[3];
    // Parameter uncertainty realized as perturbed effective values.
    const double R_s = p.R_s * (1.0 + p.delta_R_s);
    const double L_d = p.L_d * (1.0 + p.delta_L_d);
    const double L_q = p.L_q * (1.0 + p.delta_L_q);
    const double phi = p.phi_m * (1.0 + p.delta_phi_m);
    const double J = p.J_eq * (1.0 + p.delta_J);
    // Electrical angular speed: unit rotary/linear coupling, omega = x_2.
    const double omega = v;
    StateVec dx{};
    dx[0] = v;
    dx[1] = (1.5 * p.n_p * i_q * phi - p.b_eq * v - p.k_eq * x - p.f_eq * f_L) / J;
    dx[2] = (-R_s * i_q - p.n_p * omega * L_d * i_d - p.n_p * omega * phi + u_q) / L_q;
    dx[3] = (-R_s * i_d + p.n_p * omega * L_q * i_q + u_d) / L_d;
    return dx;
}

double hda_cylinder_flow_q1(double u, double P_1, const HdaCylinderParams& p,
                            RadicandPolicy policy, bool* clipped) {
    require_finite(u, "u");
    const double fwd = sign_select(u) != 0.0 ? checked_sqrt(p.P_s - P_1, policy, clipped) : 0.0;
    const double rev = sign_select(-u) != 0.0 ? checked_sqrt(P_1 - p.P_r, policy, clipped) : 0.0;
    return p.k_u * u * (fwd + rev);
}

double hda_cylinder_flow_q2(double u, double P_2, const HdaCylinderParams& p,
                            RadicandPolicy policy, bool* clipped) {
    require_finite(u, "u");
    const double fwd = sign_select(u) != 0.0 ? checked_sqrt(P_2 - p.P_r, policy, clipped) : 0.0;
    const double rev = sign_select(-u) != 0.0 ? checked_sqrt(p.P_s - P_2, policy, clipped) : 0.0;
    return p.k_u * u * (fwd + rev);
}

StateVec hda_cylinder_internal_derivative(const StateVec& s, double u, double D_L,
                                          double q_1, double q_2, const HdaCylinderParams& p,
                                          RadicandPolicy policy, bool* clipped) {
    const double v = s[1];
    const double P_1 = s[2];
    const double P_2 = s[3];
    const double P_l = P_1 - P_2;
    const double Q_1 = hda_cylinder_flow_q1(u, P_1, p, policy, clipped);
    const double Q_2 = hda_cylinder_flow_q2(u, P_2, p, policy, clipped);
    StateVec dx{};
    dx[0] = v;
    dx[1] = (P_l * p.D_h - p.b_h * v - p.A_f * friction_shape(v, p.v_ref) + D_L) / p.J_h;
    dx[2] = (p.beta_e / p.V_1) * (-p.A_h * v - p.C_t * P_l + q_1 + Q_1);
    dx[3] = (p.beta_e / p.V_2) * (p.A_h * v + p.C_t * P_l - q_2 - Q_2);
    return dx;
}

StateVec hda_cylinder_derivative(const PlantState& state, double u, double D_L,
                                 const HdaCylinderParams& p, RadicandPolicy policy,
                                 bool* clipped) {
    require_finite_state(state, 3);
    require_finite(D_L, "D_L");
    const double mid = 0.5 * (p.P_s + p.P_r);
    StateVec internal{state.x[0], state.x[1], mid + 0.5 * state.x[2], mid - 0.5 * state.x[2]};
    const StateVec di = hda_cylinder_internal_derivative(internal, u, D_L, 0.0, 0.0, p,
                                                         policy, clipped);
    return {di[0], di[1], di[2] - di[3], 0.0};
}

StateVec hda_motor_derivative(const PlantState& state, double u, double D_L,
                              const HdaMotorParams& p, RadicandPolicy policy, bool* clipped) {
    require_finite_state(state, 4);
    require_finite(u, "u");
    require_finite(D_L, "D_L");
    const double omega = state.x[1];
    const double P_l = state.x[2];
    const double wxv = state.x[3];
    const double sgn = (wxv > 0.0) ? 1.0 : (wxv < 0.0 ? -1.0 : 0.0);
    const double Q = p.C_d * wxv * checked_sqrt((p.P_s - sgn * P_l) / p.rho, policy, clipped);
    StateVec dx{};
    dx[0] = omega;
    dx[1] = (P_l * p.D_eh - p.b_eh * omega + D_L) / p.J_eh;
    dx[2] = (2.0 * p.beta_e / p.V) * (Q - p.D_eh * omega - p.C_t * P_l);
    dx[3] = (p.K_v * u - wxv) / p.tau_v;
    return dx;
}

StateVec pda_derivative(const PlantState& state, double u, const PdaParams& p,
                        double disturbance) {
    require_finite_state(state, 3);
    require_finite(u, "u");
    require_finite(disturbance, "disturbance");
    const double x = state.x[0];
    const double v = state.x[1];
    const double a = state.x[2];
    StateVec dx{};
    dx[0] = v;
    dx[1] = a;
    dx[2] = p.a_1 * x + p.a_2 * v + p.a_3 * a + p.b * u + p.b * p.delta_u + p.d + disturbance;
    return dx;
}

// ---------------------------------------------------------------------------
// Plant wrappers. External disturbances enter channel-wise: D_j adds to the
// j-th exported state derivative, matching the unified subsystem form.
// ---------------------------------------------------------------------------

namespace {

class UniversalMotorPlant final : public Plant {
public:
    explicit UniversalMotorPlant(const UniversalMotorParams& p) : p_(p) { p_.validate(); }
    PlantFamily family() const override { return PlantFamily::UniversalMotorEda; }
    int internal_dim() const override { return 3; }
    StateVec initial_internal(const PlantState& e) const override { return e.x; }
    StateVec derivative(const StateVec& s, const PlantInputs& in, double t, RadicandPolicy,
                        bool*) const override {
        (void)t;
        PlantState st{s, 3, t};
        StateVec dx = universal_motor_derivative(st, in.u[0], 0.0, p_);
        for (int j = 0; j < 3; ++j) dx[j] += in.dist[j];
        return dx;
    }
    PlantState exported(const StateVec& s, double t) const override { return {s, 3, t}; }

private:
    UniversalMotorParams p_;
};

class PmsmEdaPlant final : public Plant {
public:
    explicit PmsmEdaPlant(const PmsmEdaParams& p) : p_(p) { p_.validate(); }
    PlantFamily family() const override { return PlantFamily::PmsmEda; }
    int internal_dim() const override { return 4; }
    StateVec initial_internal(const PlantState& e) const override { return e.x; }
    StateVec derivative(const StateVec& s, const PlantInputs& in, double t, RadicandPolicy,
                        bool*) const override {
        PlantState st{s, 4, t};
        StateVec dx = pmsm_eda_derivative(st, in.u[0], in.u[1], 0.0, p_);
        for (int j = 0; j < 4; ++j) dx[j] += in.dist[j];
        return dx;
    }
    PlantState exported(const StateVec& s, double t) const override { return {s, 4, t}; }

private:
    PmsmEdaParams p_;
};

class HdaCylinderPlant final : public Plant {
public:
    explicit HdaCylinderPlant(const HdaCylinderParams& p) : p_(p) { p_.validate(); }
    PlantFamily family() const override { return PlantFamily::HdaCylinder; }
    int internal_dim() const override { return 4; }
    StateVec initial_internal(const PlantState& e) const override {
        const double mid = 0.5 * (p_.P_s + p_.P_r);
        return {e.x[0], e.x[1], mid + 0.5 * e.x[2], mid - 0.5 * e.x[2]};
    }
    StateVec derivative(const StateVec& s, const PlantInputs& in, double t,
                        RadicandPolicy policy, bool* clipped) const override {
        (void)t;
        StateVec dx = hda_cylinder_internal_derivative(s, in.u[0], 0.0, 0.0, 0.0, p_,
                                                       policy, clipped);
        dx[0] += in.dist[0];
        dx[1] += in.dist[1];
        dx[2] += in.dist[2];  // pressure channel; P_l derivative picks it up
        return dx;
    }
    PlantState exported(const StateVec& s, double t) const override {
        return {{s[0], s[1], s[2] - s[3], 0.0}, 3, t};
    }

private:
    HdaCylinderParams p_;
};

class HdaMotorPlant final : public Plant {
public:
    explicit HdaMotorPlant(const HdaMotorParams& p) : p_(p) { p_.validate(); }
    PlantFamily family() const override { return PlantFamily::HdaMotorWithValve; }
    int internal_dim() const override { return 4; }
    StateVec initial_internal(const PlantState& e) const override { return e.x; }
    StateVec derivative(const StateVec& s, const PlantInputs& in, double t,
                        RadicandPolicy policy, bool* clipped) const override {
        PlantState st{s, 4, t};
        StateVec dx = hda_motor_derivative(st, in.u[0], 0.0, p_, policy, clipped);
        for (int j = 0; j < 4; ++j) dx[j] += in.dist[j];
        return dx;
    }
    PlantState exported(const StateVec& s, double t) const override { return {s, 4, t}; }

private:
    HdaMotorParams p_;
};

class PdaPlant final : public Plant {
public:
    explicit PdaPlant(const PdaParams& p) : p_(p) { p_.validate(); }
    PlantFamily family() const override { return PlantFamily::PdaLinearized; }
    int internal_dim() const override { return 3; }
    StateVec initial_internal(const PlantState& e) const override { return e.x; }
    StateVec derivative(const StateVec& s, const PlantInputs& in, double t, RadicandPolicy,
                        bool*) const override {
        PlantState st{s, 3, t};
        StateVec dx = pda_derivative(st, in.u[0], p_, in.dist[2]);
        dx[0] += in.dist[0];
        dx[1] += in.dist[1];
        return dx;
    }
    PlantState exported(const StateVec& s, double t) const override { return {s, 3, t}; }

private:
    PdaParams p_;
};

}  // namespace

std::unique_ptr<Plant> make_plant(PlantFamily family, const PlantParams& params) {
    switch (family) {
        case PlantFamily::UniversalMotorEda:
            return std::make_unique<UniversalMotorPlant>(params.universal);
        case PlantFamily::PmsmEda:
            return std::make_unique<PmsmEdaPlant>(params.pmsm);
        case PlantFamily::HdaCylinder:
            return std::make_unique<HdaCylinderPlant>(params.hda_cylinder);
        case PlantFamily::HdaMotorWithValve:
            return std::make_unique<HdaMotorPlant>(params.hda_motor);
        case PlantFamily::PdaLinearized:
            return std::make_unique<PdaPlant>(params.pda);
    }
    throw std::invalid_argument("unknown plant family");
}

}  // namespace grcsim
