#pragma once

#include "fslphase/gravimetry.hpp"
#include "fslphase/perturbation.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace fslphase::testing {

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a double.
inline Rational exact(double x) {
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
    Rational r(scaled);
    const int shift = exponent - 53;
    if (shift >= 0) {
        r *= Rational(boost::multiprecision::cpp_int(1) << shift);
    } else {
        r /= Rational(boost::multiprecision::cpp_int(1) << -shift);
    }
    return r;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline constexpr double kRubidiumMass = 1.443e-25;
inline const double kStrontiumClockK = 2.0 * std::numbers::pi / 698e-9;

struct ScenarioSpec {
    MechanismKind kind = MechanismKind::SPT;
    double K = kStrontiumClockK;
    double T = 0.3;
    double g = 9.81;
    double sigma = 9.81;
    double v0 = 0.0;
    double v_R = 0.0;
    double z0 = 0.0;
    double omega_A = 0.0;  ///< Raman, E1-M1
    bool butterfly = false;
};

/// Scenario tuned on resonance for v_R.
inline Scenario make_scenario(const ScenarioSpec& spec) {
    Scenario s;
    s.geometry = spec.butterfly ? build_butterfly(spec.T) : build_mzi(spec.T);
    s.g = spec.g;
    s.sigma = spec.sigma;
    s.species.m_bar = kRubidiumMass;
    s.initial = {spec.z0, spec.v0, spec.v_R};
    Mechanism m;
    m.kind = spec.kind;
    m.K = spec.kind == MechanismKind::E1M1 ? 0.0 : spec.K;
    m.omega_A = spec.omega_A;
    if (spec.kind == MechanismKind::SPT) m.delta_k = spec.K;
    m = tune_to_resonance(m, spec.v_R, s.species.m_bar, s.constants);
    s.mechanism = m;
    s.species.omega_A = m.omega_A;
    return s;
}

/// Deterministic uniform draws for property tests.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

/// Random MZI draw of the acceptance protocol for the contribution tables.
inline ScenarioSpec random_table_spec(Draw& d, MechanismKind kind, bool butterfly) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.K = d.log_uniform(1e6, 1e8);
    spec.T = d.log_uniform(0.01, 1.0);
    spec.g = d.uniform(1.0, 20.0);
    spec.sigma = spec.g * d.uniform(0.9, 1.1);
    spec.v0 = d.uniform(-1.0, 1.0);
    spec.v_R = spec.v0 + d.uniform(-1e-2, 1e-2);
    spec.z0 = d.uniform(-0.1, 0.1);
    spec.butterfly = butterfly;
    if (kind == MechanismKind::Raman) spec.omega_A = 2.0 * std::numbers::pi * d.uniform(1e9, 1e10);
    if (kind == MechanismKind::E1M1) spec.omega_A = 2.0 * std::numbers::pi * 299792458.0 / d.uniform(5e-7, 1e-6);
    return spec;
}

/// delta_k - k_A evaluated exactly; both are near K for SPT.
inline double clock_wave_vector(const Scenario& s) {
    const Rational c = exact(s.constants.c);
    const Rational r = (exact(s.mechanism.delta_k) * c - exact(s.mechanism.omega_A)) / c;
    return static_cast<double>(r);
}

/// Closed forms of the named Mach-Zehnder contributions with the mean
/// mirror-pulse velocity v_pi = v0 - gT + v_K / 2.
struct ClosedForm {
    double unperturbed, fsl_clock, fsl_doppler, chirp, time_dilation;
};

inline ClosedForm table_mzi(const Scenario& s) {
    const double c = s.constants.c;
    const double K = s.mechanism.K;
    const double dk = s.mechanism.delta_k;
    const double kA = s.mechanism.k_A(s.constants);
    const double g = s.g;
    const double sigma = s.sigma;
    const double T = s.geometry.pulses()[1].time;
    const double v_pi = s.initial.v0 - g * T + s.recoil_velocity() / 2.0;
    return {-K * (g - sigma) * T * T, clock_wave_vector(s) * g * T * T, (dk - K) * g * T * T * 3.0 * v_pi / c,
            (K - dk) * sigma * T * T * (2.0 * v_pi - g * T) / c, -kA * g * T * T * v_pi / c};
}

inline ClosedForm table_butterfly(const Scenario& s) {
    const double c = s.constants.c;
    const double K = s.mechanism.K;
    const double dk = s.mechanism.delta_k;
    const double kA = s.mechanism.k_A(s.constants);
    const double g = s.g;
    const double sigma = s.sigma;
    const double T = s.geometry.pulses()[1].time;
    return {0.0, 0.0, (dk - K) * g * T * T * 6.0 * g * T / c, (K - dk) * g * T * T * 6.0 * sigma * T / c,
            -kA * g * T * T * 2.0 * g * T / c};
}

}  // namespace fslphase::testing
