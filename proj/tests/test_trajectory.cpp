#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fslphase/trajectory.hpp"
#include "support.hpp"

#include <cmath>

using namespace fslphase;
using namespace fslphase::testing;

namespace {

template <class F>
Real simpson(F f, const Real& a, const Real& b) {
    return (b - a) / 6 * (f(a) + 4 * f((a + b) / 2) + f(b));
}

BasicArmTrajectory<Real> random_arm(Draw& d) {
    BasicArmTrajectory<Real> arm(Real(d.uniform(-1, 1)), Real(d.uniform(-1, 1)), Real(d.uniform(-2, 2)),
                                 Real(d.uniform(0, 20)), Real(-2), Real(5));
    double t = d.uniform(-1.5, -1);
    for (int i = 0; i < 4; ++i) {
        arm.add_kick(Real(t), Real(d.uniform(-0.05, 0.05)));
        t += d.uniform(0.3, 1.2);
    }
    return arm;
}

}  // namespace

TEST_CASE("kicks change velocity but not position") {
    Draw d(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto arm = random_arm(d);
        for (const auto& k : arm.kicks()) {
            CHECK(arm.velocity_right(k.time) - arm.velocity_left(k.time) == k.dv);
            const Real h = Real(1e-30);
            CHECK(abs(arm.position(k.time + h) - arm.position(k.time - h)) < Real(1e-28));
            CHECK(arm.velocity_symmetric(k.time) == (arm.velocity_left(k.time) + arm.velocity_right(k.time)) / 2);
        }
        CHECK_THROWS_AS(arm.velocity_symmetric(Real(6)), std::out_of_range);
    }
}

TEST_CASE("velocity is the central difference of position between kicks") {
    Draw d(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto arm = random_arm(d);
        const auto segs = arm.segments();
        for (const auto& s : segs) {
            const Real t = (s.t_start + s.t_end) / 2;
            const Real h = Real(1e-12);
            const Real fd = (arm.position(t + h) - arm.position(t - h)) / (2 * h);
            CHECK(abs(fd - arm.velocity_symmetric(t)) < Real(1e-20));
            CHECK(s.acceleration == -arm.gravity());
        }
    }
}

TEST_CASE("closed-form integrals agree with Simpson quadrature per segment") {
    Draw d(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto arm = random_arm(d);
        const Real a = Real(d.uniform(-2, 0));
        const Real b = Real(d.uniform(1, 5));
        std::vector<Real> cuts{a};
        for (const auto& k : arm.kicks())
            if (k.time > a && k.time < b) cuts.push_back(k.time);
        cuts.push_back(b);
        Real v2 = 0;
        Real z = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Real lo = cuts[i];
            const Real hi = cuts[i + 1];
            // Interior samples avoid the one-sided ambiguity at kicks.
            const Real v_lo = arm.velocity_right(lo);
            const Real z_lo = arm.position(lo);
            const Real g = arm.gravity();
            v2 += simpson([&](const Real& t) { const Real v = v_lo - g * (t - lo); return v * v; }, lo, hi);
            z += simpson([&](const Real& t) { return arm.position(t); }, lo, hi);
            CHECK(abs(arm.position(lo) - z_lo) == 0);
        }
        CHECK(abs(arm.integral_v2(a, b) - v2) < Real(1e-40));
        CHECK(abs(arm.integral_z(a, b) - z) < Real(1e-40));
    }
}

TEST_CASE("exact interaction time against the quadratic formula") {
    Draw d(10);
    for (int trial = 0; trial < 100; ++trial) {
        const Real g = Real(d.uniform(1, 20));
        const Real z0 = Real(d.uniform(-1, 1));
        const Real v0 = Real(d.uniform(-2, 2));
        BasicArmTrajectory<Real> arm(Real(0), z0, v0, g, Real(-10), Real(10));
        const Real t_pulse = Real(d.uniform(0, 1));
        const Real c = Real(d.log_uniform(1e3, 3e8));
        const Real t = solve_exact_interaction_time_as(arm, t_pulse, c);
        // g/(2c) s^2 + (1 - v/c) s - z/c = 0 with s = t - t_pulse.
        const Real z = arm.position(t_pulse);
        const Real v = arm.velocity_symmetric(t_pulse);
        const Real a2 = g / (2 * c);
        const Real b1 = 1 - v / c;
        const Real q = -(b1 + (b1 >= 0 ? 1 : -1) * sqrt(b1 * b1 + 4 * a2 * z / c)) / 2;
        const Real s = (-z / c) / q;
        CHECK(abs(t - t_pulse - s) <= Real(1e-45) * (1 + abs(t)));

        const Real delay = interaction_delay_as(arm, t_pulse, c);
        const Real scale = abs(z) / c;
        CHECK(abs(delay - s) <= Real(10) * scale * (abs(g * z) + v * v) / (c * c) + Real(1e-45));
    }
}

TEST_CASE("double precision wrappers") {
    const auto consts = PhysicalConstants::codata();
    ArmTrajectory arm(0.0, 1.0, 0.5, 9.81, -1.0, 2.0);
    const double t = solve_exact_interaction_time(arm, 0.5, consts.c);
    CHECK(t - 0.5 == doctest::Approx(arm.position(0.5) / consts.c).epsilon(1e-6));
    CHECK(interaction_delay(arm, 0.5, consts) == doctest::Approx(t - 0.5).epsilon(1e-6));
    CHECK(velocity_symmetric(arm, 0.5) == doctest::Approx(0.5 - 9.81 * 0.5));
}

TEST_CASE("causality is enforced") {
    BasicArmTrajectory<Real> arm(Real(0), Real(0.5), Real(30), Real(9.81), Real(-1), Real(2));
    CHECK_THROWS_AS(solve_exact_interaction_time_as(arm, Real(0.5), Real(10)), CausalityError);
    CHECK_THROWS_AS(solve_exact_interaction_time_as(arm, Real(0.5), Real(-1)), CausalityError);
    // Root outside the propagated span.
    BasicArmTrajectory<Real> short_arm(Real(0), Real(100), Real(0), Real(0), Real(0), Real(1));
    CHECK_THROWS_AS(solve_exact_interaction_time_as(short_arm, Real(0.9), Real(1000)), CausalityError);
}

TEST_CASE("idealized arms receive the recoil at each pulse") {
    const auto consts = PhysicalConstants::codata();
    const auto s = make_scenario({});
    const auto [a1, a2] = propagate_idealized(s.geometry, s.mechanism, s.species, s.initial, s.g, consts);
    const double v_K = s.recoil_velocity();
    REQUIRE(a1.kicks().size() == 2);
    REQUIRE(a2.kicks().size() == 2);
    CHECK(a1.kicks()[0].dv == doctest::Approx(v_K));
    CHECK(a1.kicks()[1].dv == doctest::Approx(-v_K));
    CHECK(a2.kicks()[0].time == doctest::Approx(0.3));
    CHECK(a2.kicks()[1].time == doctest::Approx(0.6));
    CHECK(a1.position(0.6) == doctest::Approx(a2.position(0.6)).epsilon(1e-14));
    CHECK(a1.t_end() == 0.6);

    AtomSpecies sp{kRubidiumMass, 2.7e15};
    CHECK(sp.mass_defect_ratio(consts) == doctest::Approx(consts.hbar * 2.7e15 / (consts.c * consts.c) / kRubidiumMass));
    CHECK(sp.mass_defect_is_small(consts));
    CHECK_THROWS_AS(AtomSpecies{}.validate(), ConfigurationError);
}
