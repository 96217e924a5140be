#include <cmath>
#include <sstream>

#include <doctest.h>

#include "grcsim/presets.hpp"
#include "grcsim/sim.hpp"

using namespace grcsim;

namespace {
std::vector<TelemetryRecord> series_from(const std::vector<double>& e1, double dt = 1e-3) {
    std::vector<TelemetryRecord> out(e1.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
        out[i].t = static_cast<double>(i) * dt;
        out[i].e[0] = e1[i];
        out[i].z[0] = e1[i];
        out[i].present = 0b0111;
    }
    return out;
}
}  // namespace

TEST_CASE("euler step on exponential decay") {
    auto f = [](const StateVec& x, double) { return StateVec{-x[0], 0, 0, 0}; };
    const auto out = integrate_step(f, {1.0, 0, 0, 0}, 0.0, 0.1, Integrator::Euler);
    CHECK(out[0] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("rk4 step on exponential decay") {
    auto f = [](const StateVec& x, double) { return StateVec{-x[0], 0, 0, 0}; };
    const auto out = integrate_step(f, {1.0, 0, 0, 0}, 0.0, 0.1, Integrator::Rk4);
    // classic 4-stage rule reproduces the degree-4 Taylor polynomial of
    // e^-0.1 exactly: 1 - 0.1 + 0.005 - 1/6e-3 + 1/24e-4
    CHECK(out[0] == doctest::Approx(0.9048375).epsilon(1e-15));
}

TEST_CASE("zero field leaves the state alone") {
    auto f = [](const StateVec&, double) { return StateVec{0, 0, 0, 0}; };
    const StateVec x{1.0, -2.0, 3.0, 0.5};
    CHECK(integrate_step(f, x, 0.0, 0.1, Integrator::Euler) == x);
    CHECK(integrate_step(f, x, 0.0, 0.1, Integrator::Rk4) == x);
}

TEST_CASE("integrators converge at their design order") {
    auto f = [](const StateVec& x, double) { return StateVec{-x[0], 0, 0, 0}; };
    auto error_at = [&](Integrator m, double dt) {
        StateVec x{1.0, 0, 0, 0};
        const int steps = static_cast<int>(std::lround(1.0 / dt));
        for (int i = 0; i < steps; ++i) x = integrate_step(f, x, i * dt, dt, m);
        return std::abs(x[0] - std::exp(-1.0));
    };
    const double pe = std::log2(error_at(Integrator::Euler, 0.02)
                                / error_at(Integrator::Euler, 0.01));
    CHECK(pe == doctest::Approx(1.0).epsilon(0.3));
    const double pr = std::log2(error_at(Integrator::Rk4, 0.02)
                                / error_at(Integrator::Rk4, 0.01));
    CHECK(pr == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("quiescent loop stays identically zero") {
    SimConfig cfg;
    cfg.family = PlantFamily::PmsmEda;
    cfg.gains.n = 4;
    for (int i = 0; i < 4; ++i) {
        cfg.gains.k[i] = 35.0;
        cfg.gains.epsilon[i] = 1.0;
        cfg.gains.gamma[i] = 0.001;
        cfg.gains.delta[i] = 0.01;
    }
    cfg.limits = {{-20.0, 20.0}, {-60.0, 60.0}, {-60.0, 60.0}};
    cfg.duration = 0.2;
    const auto result = run_closed_loop(cfg);
    REQUIRE_FALSE(result.diverged);
    for (const auto& rec : result.telemetry) {
        for (double v : rec.x) CHECK(v == 0.0);
        for (double v : rec.u) CHECK(v == 0.0);
        for (double v : rec.chi) CHECK(v == 0.0);
    }
}

TEST_CASE("runs are deterministic") {
    SimConfig cfg = make_preset("eda-quintic", GRCSIM_DATA_DIR);
    cfg.duration = 0.5;
    std::ostringstream a, b;
    write_telemetry_csv(a, run_closed_loop(cfg).telemetry);
    write_telemetry_csv(b, run_closed_loop(cfg).telemetry);
    CHECK(a.str() == b.str());
}

TEST_CASE("each preset builds and runs briefly") {
    for (const auto& name : preset_names()) {
        SimConfig cfg = make_preset(name, GRCSIM_DATA_DIR);
        cfg.duration = 0.2;
        const auto result = run_closed_loop(cfg);
        CHECK_FALSE(result.diverged);
        CHECK(result.telemetry.size() == 200);
    }
}

TEST_CASE("metrics on a constant error") {
    const auto m = compute_metrics(series_from(std::vector<double>(1000, 0.1)), 1e-3);
    CHECK(m.rmse_position == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.max_abs_error == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_FALSE(m.settled);
}

TEST_CASE("metrics on a zero error") {
    const auto m = compute_metrics(series_from(std::vector<double>(1000, 0.0)), 1e-3);
    CHECK(m.rmse_position == 0.0);
    CHECK(m.max_abs_error == 0.0);
    CHECK(m.settling_time == 0.0);
    CHECK(m.settled);
}

TEST_CASE("metrics on an alternating error") {
    std::vector<double> e(1000);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (i % 2) ? 0.1 : -0.1;
    const auto m = compute_metrics(series_from(e), 1e-3);
    CHECK(m.rmse_position == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(m.max_abs_error == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("saturation fraction counts mismatched applied inputs") {
    auto series = series_from(std::vector<double>(100, 0.0));
    for (std::size_t i = 0; i < 25; ++i) {
        series[i].u[2] = 5.0;
        series[i].su[1] = 2.0;  // clamped
    }
    for (std::size_t i = 25; i < 100; ++i) {
        series[i].u[2] = 1.0;
        series[i].su[1] = 1.0;
    }
    const auto m = compute_metrics(series, 1e-3);
    CHECK(m.control_saturation_fraction == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("envelope fit recovers a synthetic bound") {
    std::vector<double> t, y;
    for (int i = 0; i < 5000; ++i) {
        const double ti = i * 1e-3;
        t.push_back(ti);
        y.push_back(4.0 * std::exp(-2.0 * ti) + 0.01);
    }
    const auto fit = fit_exponential_envelope(t, y);
    CHECK(fit.A == doctest::Approx(4.0).epsilon(0.01));
    CHECK(fit.iota == doctest::Approx(2.0).epsilon(0.01));
    CHECK(fit.B == doctest::Approx(0.01).epsilon(0.01));
}

TEST_CASE("envelope fit degenerate inputs") {
    std::vector<double> t(200), zero(200, 0.0), flat(200, 0.25);
    for (int i = 0; i < 200; ++i) t[i] = i * 0.01;
    const auto z = fit_exponential_envelope(t, zero);
    CHECK(z.A == 0.0);
    CHECK(z.iota == 0.0);
    CHECK(z.B == 0.0);
    const auto c = fit_exponential_envelope(t, flat);
    CHECK(c.A == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(c.B == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("convergence-bound fit needs a real series") {
    CHECK_THROWS(fit_convergence_bound(series_from(std::vector<double>(10, 1.0))));
}

TEST_CASE("config validation") {
    SimConfig cfg = make_preset("pda-step", GRCSIM_DATA_DIR);
    CHECK_NOTHROW(cfg.validate());
    SimConfig bad = cfg;
    bad.dt_control = 0.0;
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.substeps = 0;
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.limits.pop_back();
    CHECK_THROWS(bad.validate());
}
