#pragma once

#include "fslphase/constants.hpp"
#include "fslphase/precision.hpp"

#include <cmath>
#include <optional>
#include <string_view>

namespace fslphase {

enum class BeamDirection { up, down };

/// One chirped laser beam aligned with gravity.
///
/// The up beam is sourced at z = -L, the down beam at z = +L. The chirp rate
/// `sigma` has units of acceleration; the instantaneous frequency drifts by
/// omega * sigma / c per second.
struct LaserBeam {
    BeamDirection direction = BeamDirection::up;
    double omega = 0.0;            ///< rad/s
    double k = 0.0;                ///< rad/m, always omega / c
    double sigma = 0.0;            ///< m/s^2
    double phi0 = 0.0;             ///< rad, constant of the phase ansatz
    double source_position = 0.0;  ///< m, -L for up and +L for down
    double t_init = 0.0;           ///< s, switch-on time at the source

    static LaserBeam make(BeamDirection direction, double omega, double sigma, double phi0,
                          double source_distance, double t_init, const PhysicalConstants& consts);

    /// +1 for up, -1 for down.
    int sign() const { return direction == BeamDirection::up ? 1 : -1; }
    double source_distance() const { return std::abs(source_position); }

    /// Beam with the stored phase constant chosen so that the full phase at
    /// (z = 0, t = t_init) equals `phase_at_origin`. The ansatz constant and
    /// that value differ by the second-order spatial phase at the origin.
    LaserBeam with_origin_phase(double phase_at_origin, double g,
                                const PhysicalConstants& consts) const;

    void validate(const PhysicalConstants& consts) const;
};

/// Spatial part of the beam phase, vanishing at the source for all t.
template <class T>
T spatial_phase(const LaserBeam& beam, const T& g, const T& z, const T& t,
                const PhysicalConstants& consts) {
    const T c = T(consts.c);
    const T s = T(beam.sign());
    const T sigma = T(beam.sigma);
    const T L = T(beam.source_distance());
    const T tau = t - T(beam.t_init);
    const T bracket = T(1) + sigma * tau / c - ((g + s * sigma) * z + (sigma - s * g) * L) / (T(2) * c * c);
    return s * (z - T(beam.source_position)) * T(beam.k) * bracket;
}

/// Phase of a single chirped beam in the Rindler metric, truncated at 1/c^2.
template <class T>
T phase_single(const LaserBeam& beam, const T& g, const T& z, const T& t,
               const PhysicalConstants& consts) {
    const T tau = t - T(beam.t_init);
    const T temporal = T(beam.omega) * tau * (T(1) + T(beam.sigma) * tau / (T(2) * T(consts.c)));
    return T(beam.phi0) + spatial_phase(beam, g, z, t, consts) - temporal;
}

inline double phase_single(const LaserBeam& beam, double g, double z, double t,
                           const PhysicalConstants& consts) {
    return phase_single<double>(beam, g, z, t, consts);
}

/// Full beam phase at z = 0, t = t_init (the alternative phase convention).
double origin_phase(const LaserBeam& beam, double g, const PhysicalConstants& consts);

/// Two-beam phase Phi_+ - Phi_- split into a dominant part and its relativistic
/// correction. Time is measured from the retarded initiation time.
struct EffectiveField {
    double Phi_off = 0.0;          ///< rad
    double K = 0.0;                ///< rad/m
    double delta_omega = 0.0;      ///< rad/s
    double delta_k = 0.0;          ///< rad/m
    double sigma = 0.0;            ///< m/s^2; sigma_up = -sigma, sigma_down = +sigma
    double t_init_retarded = 0.0;  ///< s

    /// Builds the field from an up and a down beam. A down beam with zero
    /// frequency, wave vector and phase reduces to a single-photon field; a
    /// down beam with sign-flipped frequency gives the recoilless
    /// (E1-M1) configuration.
    static EffectiveField from_beams(const LaserBeam& up, const LaserBeam& down, double g,
                                     const PhysicalConstants& consts);
};

template <class T>
struct PhaseSplit {
    T Phi_L;
    T delta_Phi;
    T total() const { return Phi_L + delta_Phi; }
};

template <class T>
PhaseSplit<T> phase_effective(const EffectiveField& field, const T& g, const T& z, const T& t,
                              const PhysicalConstants& consts) {
    const T c = T(consts.c);
    const T K = T(field.K);
    const T sigma = T(field.sigma);
    const T tau = t - T(field.t_init_retarded);
    PhaseSplit<T> out;
    out.Phi_L = T(field.Phi_off) + K * z - T(field.delta_omega) * tau + K * sigma * tau * tau / T(2);
    out.delta_Phi = -T(field.delta_k) * z * sigma * tau / c - K * z * (g - sigma) * z / (T(2) * c * c);
    return out;
}

inline PhaseSplit<double> phase_effective(const EffectiveField& field, double g, double z, double t,
                                          const PhysicalConstants& consts) {
    return phase_effective<double>(field, g, z, t, consts);
}

/// d/dz of Phi_L + delta_Phi: the local transferred wave vector including the
/// chirped-momentum and redshift corrections.
template <class T>
T effective_wave_vector(const EffectiveField& field, const T& g, const T& z, const T& t,
                        const PhysicalConstants& consts) {
    const T c = T(consts.c);
    const T K = T(field.K);
    const T sigma = T(field.sigma);
    const T tau = t - T(field.t_init_retarded);
    return K - T(field.delta_k) * sigma * tau / c - K * (g - sigma) * z / (c * c);
}

enum class MechanismKind { SPT, Bragg, Raman, E1M1 };

std::string_view to_string(MechanismKind kind);
std::optional<MechanismKind> parse_mechanism(std::string_view name);

/// Diffraction mechanism: transferred wave vector K, wave-vector difference
/// delta_k = delta_omega / c and the internal splitting omega_A.
struct Mechanism {
    MechanismKind kind = MechanismKind::Bragg;
    double K = 0.0;
    double delta_k = 0.0;
    double omega_A = 0.0;

    double k_A(const PhysicalConstants& consts) const { return omega_A / consts.c; }
    double delta_omega(const PhysicalConstants& consts) const { return delta_k * consts.c; }

    /// Checks the identities of the mechanism (SPT: K = delta_k; Bragg:
    /// omega_A = 0; E1-M1: K = 0, delta_k = k_A; Raman: 0 <= delta_k <= K).
    void validate(const PhysicalConstants& consts) const;

    bool operator==(const Mechanism&) const = default;
};

/// Recoil velocity hbar K / m.
double recoil_velocity(double K, double m_bar, const PhysicalConstants& consts);

/// Laser frequency difference that is resonant for atoms moving at v_R.
double resonant_delta_omega(const Mechanism& mech, double v_R, double m_bar,
                            const PhysicalConstants& consts);

/// Returns `mech` retuned onto resonance for v_R. For SPT the laser fixes
/// delta_k = K, so the internal splitting is solved for; all other mechanisms
/// keep omega_A and retune delta_k.
Mechanism tune_to_resonance(const Mechanism& mech, double v_R, double m_bar,
                            const PhysicalConstants& consts);

/// Gaussian pulse envelope of spectral width sigma_omega.
struct PulseEnvelope {
    double sigma_omega = 0.0;  ///< rad/s
    double amplitude = 1.0;
};

double envelope(const LaserBeam& beam, const PulseEnvelope& env, double z, double t,
                const PhysicalConstants& consts);

/// Time at which the envelope peak passes z.
double envelope_peak_time(const LaserBeam& beam, double z, const PhysicalConstants& consts);

struct EikonalSteps {
    double dz = 0.0;
    double dt = 0.0;
    /// 1e-4 of the local wavelength and 1e-4 of 1/omega.
    static EikonalSteps defaults(const LaserBeam& beam);
};

/// (1 + g z / c^2)^-2 (d_t Phi / c)^2 - (d_z Phi)^2 from central finite
/// differences of phase_single, evaluated in extended precision. Steps much
/// larger than a wavelength let discretization dominate; that is the caller's
/// responsibility.
double eikonal_residual(const LaserBeam& beam, double g, double z, double t,
                        const EikonalSteps& steps, const PhysicalConstants& consts);

}  // namespace fslphase
