#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kelsim/integrator.hpp"

using namespace kelsim;
using namespace kelsim::integ;

namespace {

ModelParams model(int dim, double m, double chi = 1.0, double mu = 0.0) {
    ModelParams p;
    p.dim = dim;
    p.m_exp = m;
    p.chi = chi;
    p.mu = mu;
    return p;
}

State uniform_state(const Grid& g, double u, double v) {
    return State{Field(g.cell_count(), u), Field(g.cell_count(), v)};
}

double logistic(double u0, double t) { return u0 / (u0 + (1.0 - u0) * std::exp(-t)); }

}  // namespace

TEST_CASE("stable dt for a quiescent 1d state") {
    const Grid g = make_grid(1, {10}, {1.0});
    StepControl c;
    const DtResult r = stable_dt(uniform_state(g, 0.0, 0.0), model(1, 1.0), g, c);
    CHECK(r.dt == doctest::Approx(0.00125).epsilon(1e-14));
    CHECK(r.stability_dt == doctest::Approx(0.00125).epsilon(1e-14));
    CHECK_FALSE(r.below_min);
}

TEST_CASE("stable dt picks the binding constraint") {
    const Grid g = make_grid(1, {10}, {1.0});
    StepControl c;
    // Flat v and mu = 0: only u-diffusion binds, D = 1 + 3 = 4 for m = 2.
    const DtResult d = stable_dt(uniform_state(g, 3.0, 1.0), model(1, 2.0), g, c);
    CHECK(d.stability_dt == doctest::Approx(0.25 * 0.01 / 8.0).epsilon(1e-14));
    // Logistic bound 1/(mu (2 umax + 1)) = 1/(100 * 7).
    const DtResult l = stable_dt(uniform_state(g, 3.0, 1.0), model(1, 1.0, 1.0, 100.0), g, c);
    CHECK(l.stability_dt == doctest::Approx(0.25 / 700.0).epsilon(1e-14));
    // Advection: v slope 10 per cell gives w = 100; h/(d w) = 1e-3.
    State s = uniform_state(g, 1.0, 0.0);
    for (int i = 0; i < 10; ++i) s.v[i] = 10.0 * i;
    const DtResult a = stable_dt(s, model(1, 1.0), g, c);
    CHECK(a.stability_dt == doctest::Approx(0.25 * 1e-3).epsilon(1e-14));
}

TEST_CASE("stable dt clamps to dt_max and to t_end") {
    const Grid g = make_grid(1, {4}, {40.0});
    StepControl c;
    c.dt_max = 0.05;
    c.t_end = 1.0;
    State s = uniform_state(g, 0.0, 0.0);
    CHECK(stable_dt(s, model(1, 1.0), g, c).dt == 0.05);
    s.t = 0.98;
    CHECK(stable_dt(s, model(1, 1.0), g, c).dt == doctest::Approx(0.02).epsilon(1e-12));
    c.dt_min = 1.0;
    c.dt_max = 2.0;
    const Grid fine = make_grid(1, {100}, {1.0});
    CHECK(stable_dt(uniform_state(fine, 0.0, 0.0), model(1, 1.0), fine, c).below_min);
}

TEST_CASE("step control validation") {
    StepControl c;
    CHECK_NOTHROW(c.validate());
    c.safety = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = StepControl{};
    c.dt_min = 1.0;
    c.dt_max = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("equilibrium is stationary") {
    const Grid g = make_grid(2, {8, 8}, {1.0, 1.0});
    State s = uniform_state(g, 1.0, 1.0);
    const ModelParams p = model(2, 1.5, 1.0, 1.0);
    for (int k = 0; k < 100; ++k) s = step(s, p, g, 1e-3);
    for (double x : s.u.values) CHECK(x == 1.0);
    for (double x : s.v.values) CHECK(x == 1.0);
    CHECK(s.step == 100);
    CHECK(s.t == doctest::Approx(0.1).epsilon(1e-14));

    StepControl c;
    c.t_end = 10.0;
    const RunOutcome out = run(uniform_state(g, 1.0, 1.0), p, g, c, RunOptions{});
    CHECK(out.verdict == Verdict::CompletedBounded);
    CHECK(out.final_state.t == 10.0);
    CHECK(out.final_state.u.max() == 1.0);
    CHECK(out.final_state.u.min() == 1.0);
    CHECK(out.final_state.v.max() == 1.0);
}

TEST_CASE("homogeneous logistic converges at first order") {
    // Coarse grid so that dt_max, not stability, fixes the step.
    const Grid g = make_grid(2, {4, 4}, {40.0, 40.0});
    const ModelParams p = model(2, 2.0, 1.0, 1.0);
    auto error_at = [&](double dt) {
        StepControl c;
        c.dt_max = dt;
        c.t_end = 2.0;
        const RunOutcome out = run(uniform_state(g, 0.5, 0.5), p, g, c, RunOptions{});
        REQUIRE(out.verdict == Verdict::CompletedBounded);
        REQUIRE(out.final_state.last_dt <= dt);
        return std::abs(out.final_state.u[0] - logistic(0.5, 2.0));
    };
    const double e1 = error_at(0.02);
    const double e2 = error_at(0.01);
    const double e3 = error_at(0.005);
    CHECK(e1 / e2 >= 1.8);
    CHECK(e1 / e2 <= 2.2);
    CHECK(e2 / e3 >= 1.8);
    CHECK(e2 / e3 <= 2.2);
    CHECK(e3 < 1e-3);
}

TEST_CASE("mass is conserved step by step without the source") {
    const Grid g = make_grid(2, {16, 16}, {2.0, 2.0});
    State s{make_initial(g, initial::FilteredNoise{3, 2.0, 4}), make_initial(g, initial::FilteredNoise{4, 1.0, 4})};
    const ModelParams p = model(2, 1.5, 2.0, 0.0);
    StepControl c;
    double m0 = diag::mass(s.u, g);
    for (int k = 0; k < 200; ++k) {
        const DtResult dt = stable_dt(s, p, g, c);
        s = step(s, p, g, dt.dt);
        const double m1 = diag::mass(s.u, g);
        REQUIRE(std::abs(m1 - m0) <= 1e-13 * m0);
        m0 = m1;
    }
}

TEST_CASE("step refuses bad input") {
    const Grid g = make_grid(1, {4}, {1.0});
    State s = uniform_state(g, 1.0, 0.0);
    CHECK_THROWS_AS(step(s, model(1, 1.0), g, 0.0), NumericError);
    s.u[1] = -1.0;
    CHECK_THROWS_AS(step(s, model(1, 1.0), g, 1e-3), StateError);
    // A step far beyond the stability bound drives u negative.
    State t = uniform_state(g, 0.0, 0.0);
    t.u[0] = 1.0;
    CHECK_THROWS_AS(step(t, model(1, 1.0), g, 10.0), StateError);
}

TEST_CASE("run records at the requested cadence") {
    const Grid g = make_grid(1, {16}, {1.0});
    State s{make_initial(g, initial::Gaussian{1.0, {0.5, 0.5}, 0.1}), Field(16)};
    StepControl c;
    c.t_end = 1.0;
    RunOptions o;
    o.record_every = 0.25;
    o.extra_p = {2.0, 4.0};
    const RunOutcome out = run(s, model(1, 2.0), g, c, o);
    REQUIRE(out.verdict == Verdict::CompletedBounded);
    REQUIRE(out.records.size() == 5);
    CHECK(out.records.front().t == 0.0);
    CHECK(out.records.back().t == 1.0);
    for (std::size_t k = 1; k + 1 < out.records.size(); ++k) {
        CHECK(out.records[k].t >= 0.25 * k);
        CHECK(out.records[k].t < 0.25 * k + 0.01);
    }
    CHECK(out.records[2].lp_norms.size() == 2);
    CHECK(out.records[2].lp_norms[1].first == 4.0);
    for (const auto& r : out.records) CHECK_FALSE(r.u2_window.has_value());
}

TEST_CASE("logistic runs carry window integrals") {
    const Grid g = make_grid(1, {8}, {1.0});
    StepControl c;
    c.t_end = 6.0;
    c.dt_max = 0.01;
    RunOptions o;
    o.record_every = 0.1;
    const RunOutcome out = run(uniform_state(g, 1.0, 1.0), model(1, 1.0, 1.0, 1.0), g, c, o);
    REQUIRE(out.verdict == Verdict::CompletedBounded);
    // tau = min(1, T/6) = 1 and u = 1 on a unit domain: every full window is 1.
    int full = 0;
    for (const auto& r : out.records)
        if (r.u2_window) {
            CHECK(*r.u2_window == doctest::Approx(1.0).epsilon(1e-12));
            ++full;
        }
    CHECK(full >= 50);
    CHECK_FALSE(out.records.back().u2_window.has_value());
}

TEST_CASE("supercritical mass triggers the blow-up detector") {
    const Grid g = make_grid(2, {64, 64}, {8.0, 8.0});
    State s{make_initial(g, initial::Gaussian{1.0, {4.0, 4.0}, 0.5}), Field(g.cell_count())};
    const double target = 4.0 * 8.0 * std::numbers::pi;
    const double scale = target / diag::mass(s.u, g);
    for (double& x : s.u.values) x *= scale;
    StepControl c;
    c.t_end = 10.0;
    c.blowup_factor = 20.0;
    const RunOutcome out = run(s, model(2, 1.0), g, c, RunOptions{});
    CHECK(out.verdict == Verdict::NumericalBlowup);
    CHECK(out.t_event < 10.0);
    CHECK(out.final_state.u.max() > 20.0 * s.u.max());
    CHECK(out.records.back().t == out.t_event);
}

TEST_CASE("a collapsing step size is reported as blow-up") {
    const Grid g = make_grid(1, {64}, {1.0});
    StepControl c;
    c.dt_min = 1e-3;
    c.dt_max = 1e-2;
    const RunOutcome out = run(uniform_state(g, 1.0, 0.0), model(1, 1.0), g, c, RunOptions{});
    CHECK(out.verdict == Verdict::NumericalBlowup);
    CHECK(out.reason.find("dt_min") != std::string::npos);
}

TEST_CASE("step cap aborts") {
    const Grid g = make_grid(1, {8}, {1.0});
    RunOptions o;
    o.max_steps = 5;
    const RunOutcome out = run(uniform_state(g, 1.0, 0.0), model(1, 1.0), g, StepControl{}, o);
    CHECK(out.verdict == Verdict::Aborted);
    CHECK(out.final_state.step == 5);
}

TEST_CASE("run input validation") {
    const Grid g = make_grid(1, {8}, {1.0});
    CHECK_THROWS_AS(run(uniform_state(g, 1.0, 0.0), model(2, 1.0), g, StepControl{}, RunOptions{}), ConfigError);
    CHECK_THROWS_AS(run(uniform_state(g, -1.0, 0.0), model(1, 1.0), g, StepControl{}, RunOptions{}), StateError);
    RunOptions o;
    o.record_every = 0.0;
    CHECK_THROWS_AS(run(uniform_state(g, 1.0, 0.0), model(1, 1.0), g, StepControl{}, o), ConfigError);
}

TEST_CASE("runs are bit-reproducible") {
    const Grid g = make_grid(2, {20, 20}, {2.0, 2.0});
    const State s{make_initial(g, initial::FilteredNoise{11, 3.0, 3}), make_initial(g, initial::FilteredNoise{12, 1.0, 3})};
    StepControl c;
    c.t_end = 0.5;
    RunOptions o;
    o.extra_p = {3.0};
    const ModelParams p = model(2, 1.25, 1.0, 0.5);
    const RunOutcome a = run(s, p, g, c, o);
    const RunOutcome b = run(s, p, g, c, o);
    CHECK(a.final_state.u == b.final_state.u);
    CHECK(a.final_state.v == b.final_state.v);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].t == b.records[k].t);
        CHECK(a.records[k].mass == b.records[k].mass);
        CHECK(a.records[k].lp_norms == b.records[k].lp_norms);
    }
}

TEST_CASE("verdict names") {
    CHECK(to_string(Verdict::CompletedBounded) == "CompletedBounded");
    CHECK(to_string(Verdict::NumericalBlowup) == "NumericalBlowup");
    CHECK(to_string(Verdict::Aborted) == "Aborted");
}
