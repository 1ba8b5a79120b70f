#include <doctest.h>

#include <cmath>

#include "khorbits/integrator.hpp"
#include "khorbits/sampling.hpp"

using namespace khorbits;

TEST_CASE("a step backward undoes a step forward") {
    const PhaseState s0 = embed({0.1, 0.25, +1});
    IntegratorConfig cfg;
    cfg.delta = 1e-3;

    ExtendedState e = lift(s0);
    const int n = 500;
    for (int i = 0; i < n; ++i) e = step_signed(e, cfg, cfg.delta);
    for (int i = 0; i < n; ++i) e = step_signed(e, cfg, -cfg.delta);
    CHECK(distance(e.a, s0) < 1e-10);
    CHECK(distance(e.b, s0) < 1e-10);
}

TEST_CASE("conserved quantities hold along an orbit segment") {
    const PhaseState s0 = embed({0.1, 0.2, +1});
    const ConservedSet c0 = conserved(s0);
    REQUIRE(std::abs(c0.h) < 1e-14);

    IntegratorConfig cfg;
    cfg.delta = 1e-3;
    IntegrateOptions opts;
    opts.record_conserved = true;
    const Trajectory traj = integrate(s0, 10.0, cfg, opts);
    REQUIRE(traj.size() == traj.conserved_trace.size());
    REQUIRE_FALSE(traj.collided);

    for (const ConservedSet& c : traj.conserved_trace) {
        CHECK(std::abs(c.h) < 1e-6);
        CHECK(std::abs(c.p_theta - c0.p_theta) < 1e-6);
        CHECK(std::abs(c.j - c0.j) < 1e-5);
    }
}

TEST_CASE("binding defect of the two copies stays small") {
    const PhaseState s0 = embed({0.05, 0.3, +1});
    IntegratorConfig cfg;
    cfg.delta = 1e-3;
    ExtendedState e = lift(s0);
    for (int i = 0; i < 10000; ++i) e = step(e, cfg);
    CHECK(e.defect() < 1e-6);
}

TEST_CASE("second-order convergence in the step size") {
    const PhaseState s0 = embed({0.1, 0.2, +1});
    const double T = 2.0;

    const auto final_state = [&](double delta) {
        IntegratorConfig cfg;
        cfg.delta = delta;
        cfg.record_stride = 1;
        const Trajectory t = integrate(s0, T, cfg);
        return t.states.back();
    };

    const PhaseState ref = final_state(1e-3 / 16.0);
    const double e1 = distance(final_state(2e-3), ref);
    const double e2 = distance(final_state(1e-3), ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("sampling stride and duration bookkeeping") {
    const PhaseState s0 = embed({0.0, 0.2, +1});
    IntegratorConfig cfg;
    cfg.delta = 1e-3;

    SUBCASE("explicit stride") {
        cfg.record_stride = 5;
        const Trajectory t = integrate(s0, 1.0, cfg);
        CHECK(t.dt_sample == doctest::Approx(5e-3));
        CHECK(t.size() == 201);
        CHECK(t.duration() == doctest::Approx(1.0));
    }
    SUBCASE("auto stride keeps samples at most 1e-2 apart") {
        const Trajectory t = integrate(s0, 1.0, cfg);
        CHECK(t.dt_sample == doctest::Approx(1e-2));
        CHECK(t.size() == 101);
    }
    SUBCASE("negative duration is refused") {
        CHECK_THROWS_AS((void)integrate(s0, -1.0, cfg), std::invalid_argument);
    }
}

TEST_CASE("interpolation between samples") {
    Trajectory t;
    t.dt_sample = 1.0;
    t.states.push_back({0, 0, 0, 0, 0, 0});
    t.states.push_back({2, 4, 6, 8, 10, 12});
    const PhaseState mid = t.state_at(0.5);
    CHECK(mid.x == doctest::Approx(1.0));
    CHECK(mid.pz == doctest::Approx(6.0));
    // Clamped outside the span.
    CHECK(t.state_at(-1.0).x == doctest::Approx(0.0));
    CHECK(t.state_at(9.0).x == doctest::Approx(2.0));
}

TEST_CASE("free fall into the sun sets the collision flag") {
    // A resting point near the origin has no centrifugal protection.
    const PhaseState s0{0.3, 0.0, 0.0, 0.0, 0.0, 0.0};
    IntegratorConfig cfg;
    cfg.delta = 1e-3;
    IntegrateOptions opts;
    opts.rho_abort = 1e-4;
    const Trajectory t = integrate(s0, 50.0, cfg, opts);
    CHECK(t.collided);
    CHECK(t.rho_min < 1e-4);
    CHECK(t.size() >= 1);
}

TEST_CASE("coupling angle defaults to a quarter turn") {
    IntegratorConfig cfg;
    cfg.delta = 2e-3;
    // 2 * omega * delta = pi / 2.
    CHECK(2.0 * cfg.effective_omega() * cfg.delta == doctest::Approx(std::numbers::pi / 2.0));
    cfg.omega = 7.0;
    CHECK(cfg.effective_omega() == doctest::Approx(7.0));
}
