#include "fslphase/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fslphase {

EffectiveField Scenario::field() const {
    EffectiveField f;
    f.Phi_off = phi_off;
    f.K = mechanism.K;
    f.delta_k = mechanism.delta_k;
    f.delta_omega = mechanism.delta_omega(constants);
    f.sigma = sigma;
    f.t_init_retarded = 0.0;
    return f;
}

double Scenario::recoil_velocity() const { return fslphase::recoil_velocity(mechanism.K, species.m_bar, constants); }

void Scenario::validate() const {
    constants.validate();
    species.validate();
    mechanism.validate(constants);
    if (species.omega_A != mechanism.omega_A)
        throw ConfigurationError("atom omega_A and mechanism omega_A disagree");
    if (!std::isfinite(g) || !std::isfinite(sigma) || !std::isfinite(phi_off))
        throw ConfigurationError("g, sigma and phi_off must be finite");
    if (!(L >= 0.0) || !std::isfinite(L)) throw ConfigurationError("laser distance L must be finite and non-negative");
    if (!std::isfinite(initial.z0) || !std::isfinite(initial.v0) || !std::isfinite(initial.v_R))
        throw ConfigurationError("initial conditions must be finite");
    if (time_shift) {
        const int n = static_cast<int>(geometry.pulses().size());
        if (time_shift->pulse_index < 0 || time_shift->pulse_index >= n)
            throw ConfigurationError("time shift refers to a nonexistent pulse");
        if (!std::isfinite(time_shift->delta_t)) throw ConfigurationError("time shift must be finite");
    }
    if (on_resonance) {
        const double expected = resonant_delta_omega(mechanism, initial.v_R, species.m_bar, constants);
        const double actual = mechanism.delta_omega(constants);
        const double scale = std::max({std::abs(expected), std::abs(actual), 1.0});
        if (std::abs(actual - expected) > 1e-12 * scale)
            throw ConfigurationError("laser tuning is inconsistent with the resonance condition for v_R");
    }
}

double ContributionTerms::total() const {
    CompensatedSum acc;
    acc += fsl_clock;
    acc += fsl_doppler;
    acc += chirp;
    acc += time_dilation;
    return acc.value();
}

namespace {

struct RealTerms {
    Real fsl_clock = 0;
    Real fsl_doppler = 0;
    Real chirp = 0;
    Real time_dilation = 0;

    Real total() const { return fsl_clock + fsl_doppler + chirp + time_dilation; }
    RealTerms operator-(const RealTerms& o) const {
        return {fsl_clock - o.fsl_clock, fsl_doppler - o.fsl_doppler, chirp - o.chirp,
                time_dilation - o.time_dilation};
    }
    ContributionTerms to_double_terms() const {
        return {to_double(fsl_clock), to_double(fsl_doppler), to_double(chirp), to_double(time_dilation)};
    }
};

struct Parameters {
    Real c, K, delta_k, delta_omega, k_A, omega_A, sigma, g, m_over_hbar;
};

Parameters parameters(const Scenario& s) {
    Parameters p;
    p.c = to_real(s.constants.c);
    p.K = to_real(s.mechanism.K);
    p.delta_k = to_real(s.mechanism.delta_k);
    p.delta_omega = p.delta_k * p.c;
    p.omega_A = to_real(s.mechanism.omega_A);
    p.k_A = p.omega_A / p.c;
    p.sigma = to_real(s.sigma);
    p.g = to_real(s.g);
    p.m_over_hbar = to_real(s.species.m_bar) / to_real(s.constants.hbar);
    return p;
}

const BasicArmTrajectory<Real>& pick(const ArmPair<Real>& arms, int arm) {
    if (arm != 1 && arm != 2) throw std::invalid_argument("arm index must be 1 or 2");
    return arm == 1 ? arms.first : arms.second;
}

ArmPair<Real> idealized_arms(const Scenario& s) {
    return propagate_idealized_as<Real>(s.geometry, s.mechanism, s.species, s.initial, s.g, s.constants);
}

// Integral of Lambda_j * f over [first pulse, last pulse], where f is v^2 or z.
template <class Integrand>
Real lambda_weighted_integral(const Geometry& geom, int arm, Integrand integrand) {
    const auto& pulses = geom.pulses();
    Real total = 0;
    for (std::size_t i = 0; i + 1 < pulses.size(); ++i) {
        const double lambda = geom.response_after(arm, static_cast<int>(i));
        total += Real(lambda) * integrand(geom.time_as<Real>(i), geom.time_as<Real>(i + 1));
    }
    return total;
}

RealTerms functional_b_terms(const Scenario& s, const ArmPair<Real>& arms, int arm) {
    const Parameters p = parameters(s);
    const auto& traj = pick(arms, arm);
    RealTerms out;
    const auto& pulses = s.geometry.pulses();
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const int w = pulses[i].weight(arm);
        if (w == 0) continue;
        const Real t = s.geometry.time_as<Real>(i);
        const Real z = traj.position(t);
        const Real v = traj.velocity_symmetric(t);
        out.fsl_clock += Real(w) * (p.k_A - p.delta_k) * z;
        out.fsl_doppler += Real(w) * (p.K - p.delta_k) * z * v / p.c;
        out.chirp += Real(w) * (p.K - p.delta_k) * z * p.sigma * t / p.c;
    }
    const Real v2 = lambda_weighted_integral(s.geometry, arm, [&](const Real& a, const Real& b) {
        return traj.integral_v2(a, b);
    });
    out.time_dilation = -p.k_A * v2 / (2 * p.c);
    return out;
}

Real functional_a_value(const Scenario& s, const ArmPair<Real>& arms, int arm, Truncation truncation) {
    const Parameters p = parameters(s);
    const auto& traj = pick(arms, arm);
    Real total = 0;
    const auto& pulses = s.geometry.pulses();
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const int w = pulses[i].weight(arm);
        if (w == 0) continue;
        const Real t = s.geometry.time_as<Real>(i);
        const Real z = traj.position(t);
        const Real v = traj.velocity_symmetric(t);
        // (dPhi_L/dt + dPhi_A/dt) * Delta T with the total time derivative
        // along the arm, plus the imprint of delta_Phi.
        Real term = (p.k_A - p.delta_k) * z * (1 + v / p.c);
        term += (p.K * v + p.K * p.sigma * t) * z / p.c;
        term -= p.delta_k * z * p.sigma * t / p.c;
        if (truncation == Truncation::full) {
            term += (p.K * v + p.K * p.sigma * t) * z * v / (p.c * p.c);
            term -= p.K * z * (p.g - p.sigma) * z / (2 * p.c * p.c);
        }
        total += Real(w) * term;
    }
    const Real v2 = lambda_weighted_integral(s.geometry, arm, [&](const Real& a, const Real& b) {
        return traj.integral_v2(a, b);
    });
    const Real zi = lambda_weighted_integral(s.geometry, arm, [&](const Real& a, const Real& b) {
        return traj.integral_z(a, b);
    });
    total += p.k_A * (v2 / (2 * p.c) - p.g * zi / p.c);
    return total;
}

Real unperturbed_arm(const Scenario& s, const ArmPair<Real>& arms, int arm) {
    const Parameters p = parameters(s);
    const auto& traj = pick(arms, arm);
    const EffectiveField field = s.field();
    const Real a = s.geometry.time_as<Real>(0);
    const Real b = s.geometry.time_as<Real>(s.geometry.pulses().size() - 1);
    const Real action_over_hbar = p.m_over_hbar * (traj.integral_v2(a, b) / 2 - p.g * traj.integral_z(a, b));
    Real imprint = 0;
    const auto& pulses = s.geometry.pulses();
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const int w = pulses[i].weight(arm);
        if (w == 0) continue;
        const Real t = s.geometry.time_as<Real>(i);
        const Real z = traj.position(t);
        imprint += Real(w) * (phase_effective<Real>(field, p.g, z, t, s.constants).Phi_L + p.omega_A * t);
    }
    return action_over_hbar + imprint;
}

void require_closed(const Scenario& s) {
    const auto report = check_closure(s.geometry, s.mechanism, s.species.m_bar, s.initial, s.g, s.constants);
    if (!report.internal_state_closed)
        throw ComputationError("geometry does not return both arms to the ground state");
    if (s.mechanism.K != 0.0 && !report.closed)
        throw ComputationError("unperturbed geometry does not close in phase space (dz = " +
                               std::to_string(report.delta_z) + " m, dv = " + std::to_string(report.delta_v) +
                               " m/s)");
}

struct RealShiftTerms {
    Real clock = 0;
    Real doppler = 0;
    Real chirp = 0;
};

RealShiftTerms shift_terms(const Scenario& s, const ArmPair<Real>& arms) {
    RealShiftTerms out;
    if (!s.time_shift || s.time_shift->delta_t == 0.0) return out;
    if (!is_mzi(s.geometry))
        throw ConfigurationError("pulse time-shift compensation is only defined for the Mach-Zehnder geometry");
    const Parameters p = parameters(s);
    const auto index = static_cast<std::size_t>(s.time_shift->pulse_index);
    const auto& pulse = s.geometry.pulses().at(index);
    const Real t = s.geometry.time_as<Real>(index);
    const Real dT = to_real(s.time_shift->delta_t);
    for (int arm : {1, 2}) {
        const int w = pulse.weight(arm);
        if (w == 0) continue;
        const Real sign = arm == 1 ? Real(w) : Real(-w);
        const Real v = pick(arms, arm).velocity_symmetric(t);
        // Frequency of the atom-light phase along the arm times the shift:
        // (omega_A - delta_omega)(1 + v/c) + K (v + sigma t).
        out.clock += sign * (p.omega_A - p.delta_omega) * dT;
        out.doppler += sign * (p.K + p.k_A - p.delta_k) * v * dT;
        out.chirp += sign * p.K * p.sigma * t * dT;
    }
    return out;
}

}  // namespace

double unperturbed_phase(const Scenario& s) {
    s.validate();
    require_closed(s);
    const auto arms = idealized_arms(s);
    return to_double(unperturbed_arm(s, arms, 1) - unperturbed_arm(s, arms, 2));
}

double arm_phase_functional_A(const Scenario& s, int arm, Truncation truncation) {
    s.validate();
    const auto arms = idealized_arms(s);
    return to_double(functional_a_value(s, arms, arm, truncation));
}

double functional_A_difference(const Scenario& s, Truncation truncation) {
    s.validate();
    require_closed(s);
    const auto arms = idealized_arms(s);
    return to_double(functional_a_value(s, arms, 1, truncation) - functional_a_value(s, arms, 2, truncation));
}

ContributionTerms arm_phase_functional_B(const Scenario& s, int arm) {
    s.validate();
    const auto arms = idealized_arms(s);
    return functional_b_terms(s, arms, arm).to_double_terms();
}

ContributionTerms functional_B_difference(const Scenario& s) {
    s.validate();
    require_closed(s);
    const auto arms = idealized_arms(s);
    return (functional_b_terms(s, arms, 1) - functional_b_terms(s, arms, 2)).to_double_terms();
}

TimeShiftTerms compensation_phase(const Scenario& s) {
    s.validate();
    const auto arms = idealized_arms(s);
    const auto t = shift_terms(s, arms);
    return {to_double(t.clock), to_double(t.doppler), to_double(t.chirp)};
}

PhaseBreakdown total_phase(const Scenario& s) {
    s.validate();
    require_closed(s);
    const auto arms = idealized_arms(s);
    const Real un = unperturbed_arm(s, arms, 1) - unperturbed_arm(s, arms, 2);
    const RealTerms b = functional_b_terms(s, arms, 1) - functional_b_terms(s, arms, 2);
    const RealShiftTerms ts = shift_terms(s, arms);
    const Real perturbation = b.total() + ts.clock + ts.doppler + ts.chirp;

    PhaseBreakdown out;
    out.unperturbed = to_double(un);
    out.fsl_clock = to_double(b.fsl_clock);
    out.fsl_doppler = to_double(b.fsl_doppler);
    out.chirp = to_double(b.chirp);
    out.time_dilation = to_double(b.time_dilation);
    out.ts_clock = to_double(ts.clock);
    out.ts_doppler = to_double(ts.doppler);
    out.ts_chirp = to_double(ts.chirp);
    out.perturbation = to_double(perturbation);
    out.total = to_double(un + perturbation);
    return out;
}

ExtendedPhase total_phase_extended(const Scenario& s) {
    s.validate();
    require_closed(s);
    const auto arms = idealized_arms(s);
    const RealTerms b = functional_b_terms(s, arms, 1) - functional_b_terms(s, arms, 2);
    const RealShiftTerms ts = shift_terms(s, arms);
    return {unperturbed_arm(s, arms, 1) - unperturbed_arm(s, arms, 2), b.total() + ts.clock + ts.doppler + ts.chirp};
}

}  // namespace fslphase
