#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fslphase/gravimetry.hpp"
#include "support.hpp"

#include <cmath>

using namespace fslphase;
using namespace fslphase::testing;

namespace {

const PhysicalConstants kC = PhysicalConstants::codata();

double phase_slope_v0(Scenario s, double h) {
    auto up = s;
    auto down = s;
    up.initial.v0 += h;
    down.initial.v0 -= h;
    return to_double((total_phase_extended(up).total() - total_phase_extended(down).total()) / (2 * h));
}

}  // namespace

TEST_CASE("analytic offsets") {
    OffsetParameters p{MechanismKind::SPT, 0.01, 0.0, 9.81, 0.3, 0.0, kC.c, false};
    CHECK(offset_gamma_analytic(p) == doctest::Approx((0.01 + 9.81 * 0.3) / kC.c));
    p.kind = MechanismKind::Bragg;
    CHECK(offset_gamma_analytic(p) == doctest::Approx(0.01 / kC.c));
    p.kind = MechanismKind::Raman;
    p.delta_k_over_K = 1e-5;
    CHECK(offset_gamma_analytic(p) == doctest::Approx((0.01 + 1e-5 * 9.81 * 0.3) / kC.c));
    p.compensated = true;
    CHECK_THROWS_AS(offset_gamma_analytic(p), ConfigurationError);
    p.kind = MechanismKind::SPT;
    CHECK(offset_gamma_analytic(p) == doctest::Approx(9.81 * 0.3 / kC.c));
    p.kind = MechanismKind::Bragg;
    CHECK(offset_gamma_analytic(p) == 0.0);
    p.kind = MechanismKind::E1M1;
    CHECK_THROWS_AS(offset_gamma_analytic(p), ConfigurationError);
}

TEST_CASE("zero fringe offsets match the closed forms") {
    Draw d(17);
    for (auto kind : {MechanismKind::SPT, MechanismKind::Bragg, MechanismKind::Raman}) {
        CAPTURE(to_string(kind));
        for (int i = 0; i < 20; ++i) {
            ScenarioSpec spec;
            spec.kind = kind;
            spec.K = kind == MechanismKind::SPT ? kStrontiumClockK : 1.6e7;
            spec.T = d.uniform(0.05, 1.0);
            spec.g = spec.sigma = 9.81;
            spec.v0 = d.uniform(-1, 1);
            spec.v_R = spec.v0 + d.uniform(-0.05, 0.05);
            if (kind == MechanismKind::Raman) spec.omega_A = 2 * std::numbers::pi * 6.834682610904e9;
            const auto s = make_scenario(spec);
            const auto r = offset_report(s);
            CHECK(std::abs(r.gamma_numeric - r.gamma_analytic) <= 1e-12);
            CHECK(r.g_root == doctest::Approx(s.sigma * (1 + r.gamma_numeric)).epsilon(1e-15));
        }
    }
}

TEST_CASE("the offset of the clock gravimeter is sigma T / c") {
    const auto s = make_scenario({});
    const auto r = offset_report(s);
    CHECK(r.gamma_numeric == doctest::Approx(9.81 * 0.3 / kC.c).epsilon(1e-4));
    CHECK(r.gamma_numeric / 1e-8 > 1 / 1.05);
}

TEST_CASE("solving for the chirp rate") {
    const auto s = make_scenario({.v0 = 0.2, .v_R = 0.21});
    const auto by_g = solve_zero_fringe(s, ZeroFringeUnknown::g_given_sigma);
    const auto by_sigma = solve_zero_fringe(s, ZeroFringeUnknown::sigma_given_g);
    CHECK(by_g.gamma == doctest::Approx(by_sigma.gamma).epsilon(1e-6));
    CHECK(s.g / by_sigma.root - 1 == doctest::Approx(by_sigma.gamma).epsilon(1e-6));
    CHECK(by_g.iterations > 0);
}

TEST_CASE("resonant Bragg keeps the zero fringe at g = sigma") {
    for (double v0 : {-0.7, 0.0, 0.4}) {
        for (double T : {0.1, 0.5, 1.0}) {
            const auto s = make_scenario({.kind = MechanismKind::Bragg, .K = 1.6e7, .T = T, .v0 = v0, .v_R = v0});
            const auto r = solve_zero_fringe(s);
            CHECK(std::abs(r.root / s.sigma - 1) <= 1e-15);
        }
    }
}

TEST_CASE("Doppler-free interferometers have no zero fringe") {
    const auto s = make_scenario({.kind = MechanismKind::E1M1, .sigma = 0.0, .omega_A = kStrontiumClockK * kC.c});
    CHECK_THROWS(offset_report(s));
}

TEST_CASE("compensation removes the launch velocity dependence") {
    for (auto kind : {MechanismKind::SPT, MechanismKind::Bragg}) {
        CAPTURE(to_string(kind));
        ScenarioSpec spec{.kind = kind, .K = kind == MechanismKind::SPT ? kStrontiumClockK : 1.6e7, .v0 = 0.1, .v_R = 0.1};
        const auto s = make_scenario(spec);
        const auto c = with_compensation(s, 0.0);
        REQUIRE(c.time_shift.has_value());
        const double T = 0.3;
        const double expected = kind == MechanismKind::SPT ? -(9.81) * T * T / (2 * kC.c)
                                                           : -(3 * 9.81 - 2 * 9.81) * T * T / (2 * kC.c);
        CHECK(c.time_shift->delta_t == doctest::Approx(expected).epsilon(1e-15));
        const double before = std::abs(phase_slope_v0(s, 1e-3));
        const double after = std::abs(phase_slope_v0(c, 1e-3));
        CHECK(before > 0);
        CHECK(after <= 1e-6 * before);
    }
    CHECK_THROWS_AS(compensation_delay(MechanismKind::Raman, 9.81, 0, 9.81, 0.3, kC), ConfigurationError);
}

TEST_CASE("compensated offsets") {
    Draw d(29);
    for (int i = 0; i < 10; ++i) {
        const double v0 = d.uniform(-1, 1);
        const double v_R = v0 + d.uniform(-0.05, 0.05);
        const auto spt = with_compensation(make_scenario({.v0 = v0, .v_R = v_R}), 0.0);
        const auto r = offset_report(spt);
        CHECK(std::abs(r.gamma_numeric - 9.81 * 0.3 / kC.c) <= 1e-12);
        const auto bragg =
            with_compensation(make_scenario({.kind = MechanismKind::Bragg, .K = 1.6e7, .v0 = v0, .v_R = v_R}), 0.0);
        CHECK(std::abs(offset_report(bragg).gamma_numeric) <= 1e-12);
    }
}

TEST_CASE("error budgets") {
    const auto s = make_scenario({.v0 = 0.5, .v_R = 0.5});
    const double T = 0.3;
    const double K = s.mechanism.K;
    const double sigma = s.sigma;
    const double c = kC.c;
    const double dphi = 1e-3;
    const double dv0 = 1e-3;
    const auto u = error_budget(s, dphi, dv0, false, 0.0);
    const double ratio = dphi / (K * sigma * T * T);
    const double pu = (1 + 2 * (0.0 + 2 * sigma * T) / c) * ratio * ratio;
    const double vu = (dv0 / c) * (dv0 / c);
    CHECK(rel_diff(u.phase_term, pu) <= 1e-12);
    CHECK(rel_diff(u.velocity_term, vu) <= 1e-12);
    CHECK(rel_diff(u.delta_g, sigma * std::sqrt(pu + vu)) <= 1e-12);

    const double Gamma = 1e-6;
    const auto k = error_budget(s, dphi, dv0, true, Gamma);
    const double pk = (1 - 2 * (Gamma - sigma) * T / c) * ratio * ratio;
    const double vk = (Gamma * dv0 / (sigma * c)) * (Gamma * dv0 / (sigma * c));
    CHECK(rel_diff(k.phase_term, pk) <= 1e-12);
    CHECK(rel_diff(k.velocity_term, vk) <= 1e-12);
    CHECK(k.delta_g < u.delta_g);

    const auto floor = error_budget(s, 0.0, 1e-11 * c, false, 0.0);
    CHECK(floor.delta_g == doctest::Approx(sigma * 1e-11).epsilon(1e-12));
    CHECK(floor.delta_g / 1e-10 > 1 / 1.05);

    CHECK_THROWS_AS(error_budget(s, -1.0, 0.0, false, 0.0), ConfigurationError);
    const auto bragg = make_scenario({.kind = MechanismKind::Bragg, .K = 1.6e7});
    CHECK_THROWS_AS(error_budget(bragg, 1e-3, 1e-3, false, 0.0), ConfigurationError);
}

TEST_CASE("recoilless differential phase") {
    const double k_A = kStrontiumClockK;
    const double value = e1m1_differential_phase(0.01, 1.0, k_A, 9.81, kC);
    CHECK(rel_diff(value, k_A * 9.81 * 4 * 0.01 / kC.c) <= 1e-12);
    CHECK(value == doctest::Approx(1.18e-2).epsilon(0.01));

    // Two launches at +-v_B compared through the full phase model.
    auto plus = make_scenario({.kind = MechanismKind::E1M1, .T = 1.0, .sigma = 0.0, .v0 = 0.01, .v_R = 0.01,
                               .omega_A = k_A * kC.c});
    auto minus = make_scenario({.kind = MechanismKind::E1M1, .T = 1.0, .sigma = 0.0, .v0 = -0.01, .v_R = -0.01,
                                .omega_A = k_A * kC.c});
    const double diff = total_phase(plus).total - total_phase(minus).total;
    CHECK(rel_diff(diff, value) <= 1e-9);
    CHECK_THROWS_AS(e1m1_differential_phase(-1.0, 1.0, k_A, 9.81, kC), ConfigurationError);
}
