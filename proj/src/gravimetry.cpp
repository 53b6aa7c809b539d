#include "fslphase/gravimetry.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace fslphase {

namespace {

double mzi_interrogation_time(const Geometry& geom) {
    if (!is_mzi(geom)) throw ConfigurationError("operation requires a Mach-Zehnder geometry");
    return geom.pulses()[1].time - geom.pulses()[0].time;
}

}  // namespace

ZeroFringeResult solve_zero_fringe(const Scenario& s, ZeroFringeUnknown unknown) {
    s.validate();
    // Unknown is the fractional offset x with g = sigma (1 + x) or
    // sigma = g / (1 + x); gamma = x in both cases.
    auto phase_at = [&](double x) {
        Scenario trial = s;
        if (unknown == ZeroFringeUnknown::g_given_sigma) {
            trial.g = s.sigma * (1.0 + x);
        } else {
            trial.sigma = s.g / (1.0 + x);
        }
        return total_phase(trial).total;
    };
    double half_width = 1e-4;
    double lo = -half_width;
    double hi = half_width;
    double flo = phase_at(lo);
    double fhi = phase_at(hi);
    while (flo * fhi > 0.0) {
        half_width *= 4.0;
        if (half_width > 0.5)
            throw ComputationError("no sign change of the total phase around the seed; configuration is not monotonic");
        lo = -half_width;
        hi = half_width;
        flo = phase_at(lo);
        fhi = phase_at(hi);
    }
    ZeroFringeResult out;
    if (flo == 0.0 || fhi == 0.0) {
        out.gamma = flo == 0.0 ? lo : hi;
    } else {
        std::uintmax_t max_iter = 200;
        const auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-19 + 1e-15 * std::abs(a); };
        const auto [a, b] = boost::math::tools::toms748_solve(phase_at, lo, hi, flo, fhi, tol, max_iter);
        out.iterations = static_cast<int>(max_iter);
        out.gamma = 0.5 * (a + b);
    }
    out.root = unknown == ZeroFringeUnknown::g_given_sigma ? s.sigma * (1.0 + out.gamma) : s.g / (1.0 + out.gamma);
    return out;
}

double offset_gamma_analytic(const OffsetParameters& p) {
    if (!(p.c > 0.0)) throw ConfigurationError("speed of light must be positive");
    const double resonance = p.compensated ? 0.0 : (p.v_R - p.v0) / p.c;
    if (p.compensated && p.kind == MechanismKind::Raman)
        throw ConfigurationError("Raman: no compensation delay available (SPT and Bragg only)");
    switch (p.kind) {
        case MechanismKind::SPT: return resonance + p.sigma * p.T / p.c;
        case MechanismKind::Bragg: return resonance;
        case MechanismKind::Raman: return resonance + p.delta_k_over_K * p.sigma * p.T / p.c;
        case MechanismKind::E1M1: break;
    }
    throw ConfigurationError("E1M1: recoilless transitions transfer no momentum, the setup is not suitable for gravimetry");
}

OffsetParameters offset_parameters(const Scenario& s) {
    OffsetParameters p;
    p.kind = s.mechanism.kind;
    p.v_R = s.initial.v_R;
    p.v0 = s.initial.v0;
    p.sigma = s.sigma;
    p.T = mzi_interrogation_time(s.geometry);
    p.delta_k_over_K = s.mechanism.K != 0.0 ? s.mechanism.delta_k / s.mechanism.K : 0.0;
    p.c = s.constants.c;
    p.compensated = s.time_shift.has_value() && s.time_shift->delta_t != 0.0;
    return p;
}

OffsetReport offset_report(const Scenario& s) {
    OffsetReport r;
    r.mechanism = s.mechanism.kind;
    r.gamma_analytic = offset_gamma_analytic(offset_parameters(s));
    const auto root = solve_zero_fringe(s, ZeroFringeUnknown::g_given_sigma);
    r.gamma_numeric = root.gamma;
    r.g_root = root.root;
    return r;
}

ErrorBudget error_budget(const Scenario& s, double delta_phi, double delta_v0, bool compensated, double Gamma) {
    if (s.mechanism.kind != MechanismKind::SPT)
        throw ConfigurationError(std::string(to_string(s.mechanism.kind)) +
                                 ": error budgets are only available for single-photon transitions");
    if (!(delta_phi >= 0.0) || !(delta_v0 >= 0.0)) throw ConfigurationError("uncertainties must be non-negative");
    const double T = mzi_interrogation_time(s.geometry);
    const double c = s.constants.c;
    const double sigma = s.sigma;
    const double scaled_phase = delta_phi / (s.mechanism.K * sigma * T * T);
    ErrorBudget b;
    b.delta_phi = delta_phi;
    b.delta_v0 = delta_v0;
    b.Gamma = Gamma;
    b.compensated = compensated;
    if (compensated) {
        b.phase_term = (1.0 - 2.0 * (Gamma - sigma) * T / c) * scaled_phase * scaled_phase;
        const double v = Gamma / sigma * delta_v0 / c;
        b.velocity_term = v * v;
    } else {
        b.phase_term = (1.0 + 2.0 * (s.initial.v_R - s.initial.v0 + 2.0 * sigma * T) / c) * scaled_phase * scaled_phase;
        const double v = delta_v0 / c;
        b.velocity_term = v * v;
    }
    b.delta_g = std::abs(sigma) * std::sqrt(b.phase_term + b.velocity_term);
    return b;
}

double compensation_delay(MechanismKind kind, double g_estimate, double Gamma, double sigma, double T,
                          const PhysicalConstants& consts) {
    switch (kind) {
        case MechanismKind::SPT: return -(g_estimate + Gamma) * T * T / (2.0 * consts.c);
        case MechanismKind::Bragg: return -(3.0 * g_estimate + 3.0 * Gamma - 2.0 * sigma) * T * T / (2.0 * consts.c);
        case MechanismKind::Raman:
        case MechanismKind::E1M1: break;
    }
    throw ConfigurationError(std::string(to_string(kind)) + ": no compensation delay available (SPT and Bragg only)");
}

Scenario with_compensation(const Scenario& s, double Gamma) {
    const double T = mzi_interrogation_time(s.geometry);
    Scenario out = s;
    out.time_shift = TimeShift{1, compensation_delay(s.mechanism.kind, s.g, Gamma, s.sigma, T, s.constants)};
    return out;
}

double e1m1_differential_phase(double v_B, double T, double k_A, double g, const PhysicalConstants& consts) {
    if (v_B < 0.0 || !(T > 0.0) || !(k_A > 0.0) || !(g > 0.0))
        throw ConfigurationError("e1m1 differential phase needs v_B >= 0 and positive T, k_A, g");
    return k_A * g * T * T * 4.0 * v_B / consts.c;
}

}  // namespace fslphase
