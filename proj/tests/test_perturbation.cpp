#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fslphase/perturbation.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace fslphase;
using namespace fslphase::testing;

namespace {

constexpr MechanismKind kAll[] = {MechanismKind::SPT, MechanismKind::Bragg, MechanismKind::Raman, MechanismKind::E1M1};

double scale_of(const ClosedForm& f) {
    return std::max({std::abs(f.fsl_clock), std::abs(f.fsl_doppler), std::abs(f.chirp), std::abs(f.time_dilation),
                     1e-300});
}

void check_terms(const ContributionTerms& got, const ClosedForm& want, double tol) {
    const double scale = scale_of(want);
    CHECK(std::abs(got.fsl_clock - want.fsl_clock) <= tol * scale);
    CHECK(std::abs(got.fsl_doppler - want.fsl_doppler) <= tol * scale);
    CHECK(std::abs(got.chirp - want.chirp) <= tol * scale);
    CHECK(std::abs(got.time_dilation - want.time_dilation) <= tol * scale);
}

}  // namespace

TEST_CASE("Mach-Zehnder contributions match the closed forms") {
    Draw d(101);
    for (auto kind : kAll) {
        CAPTURE(to_string(kind));
        for (int i = 0; i < 100; ++i) {
            const auto s = make_scenario(random_table_spec(d, kind, false));
            const auto want = table_mzi(s);
            check_terms(functional_B_difference(s), want, 1e-9);
            const double T = s.geometry.pulses()[1].time;
            const double un_scale = std::max(1.0, std::abs(s.mechanism.K * s.g * T * T));
            CHECK(std::abs(unperturbed_phase(s) - want.unperturbed) <= 1e-9 * un_scale);
        }
    }
}

TEST_CASE("butterfly contributions match the closed forms") {
    Draw d(202);
    for (auto kind : kAll) {
        CAPTURE(to_string(kind));
        for (int i = 0; i < 100; ++i) {
            const auto s = make_scenario(random_table_spec(d, kind, true));
            const auto want = table_butterfly(s);
            check_terms(functional_B_difference(s), want, 1e-9);
            CHECK(std::abs(unperturbed_phase(s)) <= 1e-12 * std::max(1.0, s.mechanism.K));
        }
    }
}

TEST_CASE("delay expansion and integrated form agree") {
    Draw d(303);
    for (auto kind : kAll) {
        for (bool butterfly : {false, true}) {
            CAPTURE(to_string(kind));
            CAPTURE(butterfly);
            for (int i = 0; i < 25; ++i) {
                const auto s = make_scenario(random_table_spec(d, kind, butterfly));
                const auto b = functional_B_difference(s);
                const double a = functional_A_difference(s);
                const double scale = std::max({std::abs(b.fsl_clock), std::abs(b.fsl_doppler), std::abs(b.chirp),
                                               std::abs(b.time_dilation), 1e-300});
                CHECK(std::abs(a - b.total()) <= 1e-9 * scale);
                for (int arm : {1, 2}) {
                    const double pa = arm_phase_functional_A(s, arm);
                    const double pb = arm_phase_functional_B(s, arm).total();
                    // Per arm the two forms differ by boundary terms common to both arms.
                    CHECK(std::isfinite(pa));
                    CHECK(std::isfinite(pb));
                }
            }
        }
    }
}

TEST_CASE("contributions are additive in the arm phases") {
    const auto s = make_scenario({.v0 = 0.3, .v_R = 0.3});
    const auto a1 = arm_phase_functional_B(s, 1);
    const auto a2 = arm_phase_functional_B(s, 2);
    const auto diff = functional_B_difference(s);
    CHECK(diff.fsl_clock == doctest::Approx(a1.fsl_clock - a2.fsl_clock));
    CHECK(diff.chirp == doctest::Approx(a1.chirp - a2.chirp));
    CHECK(diff.total() == doctest::Approx(diff.fsl_clock + diff.fsl_doppler + diff.chirp + diff.time_dilation));
}

TEST_CASE("mirror time shift terms") {
    Draw d(404);
    for (auto kind : kAll) {
        for (int i = 0; i < 20; ++i) {
            auto s = make_scenario(random_table_spec(d, kind, false));
            const double dT = d.uniform(-1e-8, 1e-8);
            s.time_shift = TimeShift{1, dT};
            const auto ts = compensation_phase(s);
            const double c = s.constants.c;
            const double T = s.geometry.pulses()[1].time;
            const double K = s.mechanism.K;
            const double v_pi = s.initial.v0 - s.g * T + s.recoil_velocity() / 2;
            const double dk = clock_wave_vector(s);
            const double detuning = dk * c;
            CHECK(ts.ts_clock == doctest::Approx(2 * detuning * dT).epsilon(1e-9));
            CHECK(ts.ts_doppler == doctest::Approx(2 * (dk - K) * v_pi * dT).epsilon(1e-9));
            CHECK(ts.ts_chirp == doctest::Approx(-2 * K * s.sigma * T * dT).epsilon(1e-9));
            const auto total = total_phase(s);
            CHECK(total.ts_clock == ts.ts_clock);
        }
    }
    auto none = make_scenario({});
    const auto zero = compensation_phase(none);
    CHECK(zero.ts_clock == 0.0);
    CHECK(zero.ts_doppler == 0.0);
    CHECK(zero.ts_chirp == 0.0);

    auto fly = make_scenario({.butterfly = true});
    fly.time_shift = TimeShift{1, 1e-9};
    CHECK_THROWS_AS(compensation_phase(fly), ConfigurationError);
}

TEST_CASE("total phase is the sum of its parts") {
    Draw d(505);
    for (auto kind : kAll) {
        auto s = make_scenario(random_table_spec(d, kind, false));
        s.time_shift = TimeShift{1, 3e-9};
        const auto p = total_phase(s);
        const double parts = p.fsl_clock + p.fsl_doppler + p.chirp + p.time_dilation + p.ts_clock + p.ts_doppler +
                             p.ts_chirp;
        CHECK(p.perturbation == doctest::Approx(parts).epsilon(1e-12));
        CHECK(p.total == doctest::Approx(p.unperturbed + p.perturbation).epsilon(1e-12));
        const auto ext = total_phase_extended(s);
        CHECK(to_double(ext.total()) == doctest::Approx(p.total).epsilon(1e-12));
    }
}

TEST_CASE("the unperturbed phase vanishes on the chirp resonance for any v0") {
    Draw d(606);
    for (int i = 0; i < 50; ++i) {
        auto spec = random_table_spec(d, MechanismKind::SPT, false);
        spec.sigma = spec.g;
        const auto s = make_scenario(spec);
        CHECK(std::abs(unperturbed_phase(s)) <= 1e-9);
    }
}

TEST_CASE("scenario validation") {
    auto s = make_scenario({});
    CHECK_NOTHROW(s.validate());
    auto bad = s;
    bad.g = std::nan("");
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = s;
    bad.L = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = s;
    bad.mechanism.delta_k *= 1.1;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = s;
    bad.geometry = Geometry::create({{0.0, 1, 0}, {0.3, -1, 1}, {0.7, 0, -1}});
    CHECK_THROWS_AS(unperturbed_phase(bad), ComputationError);
    bad = s;
    bad.on_resonance = true;
    bad.initial.v_R = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}
