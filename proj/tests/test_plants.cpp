#include <cmath>

#include <doctest.h>

#include "grcsim/plants.hpp"

using namespace grcsim;

namespace {
PlantState state3(double x1, double x2, double x3) {
    PlantState s;
    s.n = 3;
    s.x = {x1, x2, x3, 0.0};
    return s;
}
PlantState state4(double x1, double x2, double x3, double x4) {
    PlantState s;
    s.n = 4;
    s.x = {x1, x2, x3, x4};
    return s;
}
}  // namespace

TEST_CASE("universal motor equilibrium") {
    UniversalMotorParams p;
    const auto d = universal_motor_derivative(state3(0, 0, 0), 0.0, 0.0, p);
    for (int i = 0; i < 3; ++i) CHECK(d[i] == 0.0);
}

TEST_CASE("universal motor current rise") {
    UniversalMotorParams p;
    p.L_a = 0.3;
    p.L_f = 0.2;
    const auto d = universal_motor_derivative(state3(0, 0, 0), 1.0, 0.0, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("universal motor torque row") {
    UniversalMotorParams p;
    p.phi_m = 0.2;
    p.J_m = 0.1;
    p.b_m = 0.0;
    p.tau_fs = 0.0;
    const auto d = universal_motor_derivative(state3(0, 0, 1.0), 0.0, 0.0, p);
    CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("pmsm equilibrium") {
    PmsmEdaParams p;
    const auto d = pmsm_eda_derivative(state4(0, 0, 0, 0), 0.0, 0.0, 0.0, p);
    for (int i = 0; i < 4; ++i) CHECK(d[i] == 0.0);
}

TEST_CASE("pmsm q-axis voltage step") {
    PmsmEdaParams p;
    p.L_q = 0.01;
    const auto d = pmsm_eda_derivative(state4(0, 0, 0, 0), 1.0, 0.0, 0.0, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(d[3] == 0.0);
}

TEST_CASE("pmsm torque production") {
    PmsmEdaParams p;
    p.n_p = 3;
    p.phi_m = 0.1;
    p.J_eq = 1.0;
    p.b_eq = 0.0;
    p.k_eq = 0.0;
    const auto d = pmsm_eda_derivative(state4(0, 0, 2.0, 0), 0.0, 0.0, 0.0, p);
    CHECK(d[1] == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("pmsm effective-parameter perturbations shift the response") {
    PmsmEdaParams p;
    p.delta_R_s = 0.0;
    const auto nominal = pmsm_eda_derivative(state4(0, 0, 1.0, 0), 0.0, 0.0, 0.0, p);
    p.delta_R_s = 0.5;
    const auto shifted = pmsm_eda_derivative(state4(0, 0, 1.0, 0), 0.0, 0.0, 0.0, p);
    CHECK(shifted[2] != nominal[2]);
}

TEST_CASE("cylinder valve flow") {
    HdaCylinderParams p;
    p.k_u = 1.0;
    p.P_s = 10.0;
    p.P_r = 0.0;
    CHECK(hda_cylinder_flow_q1(1.0, 6.0, p) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("cylinder flow reverses with input sign") {
    HdaCylinderParams p;
    p.k_u = 1.0;
    p.P_s = 10.0;
    p.P_r = 0.0;
    // u >= 0 draws from supply into chamber 1; u < 0 vents chamber 1 to return.
    CHECK(hda_cylinder_flow_q1(1.0, 6.0, p) > 0.0);
    CHECK(hda_cylinder_flow_q1(-1.0, 6.0, p) < 0.0);
}

TEST_CASE("cylinder equilibrium") {
    HdaCylinderParams p;
    const auto d = hda_cylinder_derivative(state3(0, 0, 0), 0.0, 0.0, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
}

TEST_CASE("cylinder force balance") {
    HdaCylinderParams p;
    p.D_h = 1e-3;
    p.b_h = 0.0;
    p.J_h = 100.0;
    const auto d = hda_cylinder_derivative(state3(0, 0, 1e6), 0.0, 0.0, p);
    CHECK(d[1] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("cylinder radicand policies") {
    HdaCylinderParams p;
    p.k_u = 1.0;
    p.P_s = 10.0;
    p.P_r = 0.0;
    // chamber pressure above supply makes the supply-side radicand negative
    CHECK_THROWS_AS(hda_cylinder_flow_q1(1.0, 20.0, p, RadicandPolicy::Strict),
                    std::domain_error);
    bool clipped = false;
    CHECK(hda_cylinder_flow_q1(1.0, 20.0, p, RadicandPolicy::Clip, &clipped) == 0.0);
    CHECK(clipped);
}

TEST_CASE("motor valve spool lag") {
    HdaMotorParams p;
    p.K_v = 2.0;
    p.tau_v = 0.01;
    const auto d = hda_motor_derivative(state4(0, 0, 0, 0), 1.0, 0.0, p);
    CHECK(d[3] == doctest::Approx(200.0).epsilon(1e-14));
}

TEST_CASE("motor equilibrium") {
    HdaMotorParams p;
    const auto d = hda_motor_derivative(state4(0, 0, 0, 0), 0.0, 0.0, p);
    for (int i = 0; i < 4; ++i) CHECK(d[i] == 0.0);
}

TEST_CASE("motor torque row") {
    HdaMotorParams p;
    p.D_eh = 1e-4;
    p.b_eh = 0.0;
    p.J_eh = 10.0;
    const auto d = hda_motor_derivative(state4(0, 0, 2e6, 0), 0.0, 0.0, p);
    CHECK(d[1] == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("pda equilibrium and jerk rows") {
    PdaParams p;
    p.a_1 = 0.0;
    p.a_2 = 0.0;
    p.a_3 = 0.0;
    p.b = 2.0;
    p.delta_u = 0.0;
    p.d = 0.0;
    CHECK(pda_derivative(state3(0, 0, 0), 0.0, p, 0.0)[2] == 0.0);
    p.delta_u = 0.1;
    CHECK(pda_derivative(state3(0, 0, 0), 1.0, p, 0.0)[2]
          == doctest::Approx(2.2).epsilon(1e-14));
    PdaParams q;
    q.a_1 = -4.0;
    q.a_2 = 0.0;
    q.a_3 = 0.0;
    q.b = 0.0;
    CHECK(pda_derivative(state3(1.0, 0, 0), 0.0, q, 0.0)[2]
          == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("pda is linear in state and input") {
    PdaParams p;
    const auto d1 = pda_derivative(state3(0.3, -0.2, 0.5), 0.7, p, 0.0);
    const auto d2 = pda_derivative(state3(0.6, -0.4, 1.0), 1.4, p, 0.0);
    for (int i = 0; i < 3; ++i) {
        // doubling state and input doubles the derivative, minus the affine offset
        const double offset = pda_derivative(state3(0, 0, 0), 0.0, p, 0.0)[i];
        CHECK(d2[i] - offset == doctest::Approx(2.0 * (d1[i] - offset)).epsilon(1e-12));
    }
}

TEST_CASE("disturbance kinds") {
    DisturbanceProfile prof;
    prof.kind = DisturbanceKind::Constant;
    prof.magnitude = {5.0, 0.0, 1.0, 0.0};
    auto d = sample_disturbance(prof, 3.7, 1);
    CHECK(d[0] == 5.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 1.0);

    prof.kind = DisturbanceKind::Step;
    prof.magnitude = {3.0, 0.0, 0.0, 0.0};
    prof.t_on = 1.0;
    CHECK(sample_disturbance(prof, 0.5, 1)[0] == 0.0);
    CHECK(sample_disturbance(prof, 1.5, 1)[0] == 3.0);

    prof.kind = DisturbanceKind::Sine;
    prof.magnitude = {2.0, 0.0, 0.0, 0.0};
    prof.frequency = 1.0;
    CHECK(sample_disturbance(prof, 0.25, 1)[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("noise disturbance is bounded and seed-deterministic") {
    DisturbanceProfile prof;
    prof.kind = DisturbanceKind::Noise;
    prof.magnitude = {1.5, 0.0, 4.0, 0.0};
    prof.bandwidth = 10.0;
    bool any_nonzero = false;
    bool differs = false;
    for (int i = 0; i < 2000; ++i) {
        const double t = i * 0.003;
        const auto a = sample_disturbance(prof, t, 7);
        const auto b = sample_disturbance(prof, t, 7);
        const auto c = sample_disturbance(prof, t, 8);
        CHECK(std::abs(a[0]) <= 1.5);
        CHECK(a[1] == 0.0);
        CHECK(std::abs(a[2]) <= 4.0);
        CHECK(a == b);
        if (a[0] != 0.0) any_nonzero = true;
        if (a[0] != c[0]) differs = true;
    }
    CHECK(any_nonzero);
    CHECK(differs);
}

TEST_CASE("sampler matches the free function") {
    DisturbanceProfile prof;
    prof.kind = DisturbanceKind::Noise;
    prof.magnitude = {1.0, 2.0, 3.0, 4.0};
    DisturbanceSampler sampler(prof, 11);
    for (double t : {0.0, 0.013, 0.5, 2.0}) {
        CHECK(sampler(t) == sample_disturbance(prof, t, 11));
    }
}

TEST_CASE("cylinder plant hides chamber pressures") {
    PlantParams params;
    auto plant = make_plant(PlantFamily::HdaCylinder, params);
    CHECK(plant->internal_dim() == 4);
    PlantState exp0 = state3(0.01, 0.0, 2e6);
    const auto internal = plant->initial_internal(exp0);
    const double mid = (params.hda_cylinder.P_s + params.hda_cylinder.P_r) / 2.0;
    CHECK(internal[2] == doctest::Approx(mid + 1e6));
    CHECK(internal[3] == doctest::Approx(mid - 1e6));
    const auto back = plant->exported(internal, 0.0);
    CHECK(back.x[0] == doctest::Approx(0.01));
    CHECK(back.x[2] == doctest::Approx(2e6));
}

TEST_CASE("plant wrapper adds disturbances channel-wise") {
    PlantParams params;
    auto plant = make_plant(PlantFamily::PmsmEda, params);
    StateVec s{0.0, 0.1, 0.5, 0.0};
    PlantInputs clean;
    clean.u = {1.0, 0.0};
    PlantInputs noisy = clean;
    noisy.dist = {0.5, -1.0, 2.0, 0.25};
    const auto d0 = plant->derivative(s, clean, 0.0, RadicandPolicy::Strict, nullptr);
    const auto d1 = plant->derivative(s, noisy, 0.0, RadicandPolicy::Strict, nullptr);
    CHECK(d1[0] - d0[0] == doctest::Approx(0.5));
    CHECK(d1[1] - d0[1] == doctest::Approx(-1.0));
    CHECK(d1[2] - d0[2] == doctest::Approx(2.0));
    CHECK(d1[3] - d0[3] == doctest::Approx(0.25));
}

TEST_CASE("every family constructs and reports itself") {
    PlantParams params;
    for (PlantFamily f : {PlantFamily::UniversalMotorEda, PlantFamily::PmsmEda,
                          PlantFamily::HdaCylinder, PlantFamily::HdaMotorWithValve,
                          PlantFamily::PdaLinearized}) {
        auto plant = make_plant(f, params);
        CHECK(plant->family() == f);
        CHECK(plant->internal_dim() >= subsystem_count(f));
    }
}

TEST_CASE("parameter validation rejects nonsense") {
    UniversalMotorParams u;
    u.L_a = -1.0;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    PmsmEdaParams m;
    m.J_eq = 0.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    HdaCylinderParams c;
    c.P_s = -5.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    HdaMotorParams h;
    h.tau_v = 0.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}
