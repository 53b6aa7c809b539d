#include "fslphase/light_field.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fslphase {

LaserBeam LaserBeam::make(BeamDirection direction, double omega, double sigma, double phi0,
                          double source_distance, double t_init, const PhysicalConstants& consts) {
    consts.validate();
    if (!(source_distance >= 0.0)) throw ConfigurationError("source distance L must be non-negative");
    LaserBeam beam;
    beam.direction = direction;
    beam.omega = omega;
    beam.k = omega / consts.c;
    beam.sigma = sigma;
    beam.phi0 = phi0;
    beam.source_position = direction == BeamDirection::up ? -source_distance : source_distance;
    beam.t_init = t_init;
    return beam;
}

void LaserBeam::validate(const PhysicalConstants& consts) const {
    if (std::abs(k * consts.c - omega) > 1e-15 * std::abs(omega))
        throw ConfigurationError("laser wave vector must equal omega / c");
    if (source_position * sign() > 0.0)
        throw ConfigurationError("up beams are sourced below the origin, down beams above");
}

double origin_phase(const LaserBeam& beam, double g, const PhysicalConstants& consts) {
    return phase_single(beam, g, 0.0, beam.t_init, consts);
}

LaserBeam LaserBeam::with_origin_phase(double phase_at_origin, double g,
                                       const PhysicalConstants& consts) const {
    LaserBeam out = *this;
    out.phi0 = 0.0;
    out.phi0 = phase_at_origin - origin_phase(out, g, consts);
    return out;
}

EffectiveField EffectiveField::from_beams(const LaserBeam& up, const LaserBeam& down, double g,
                                          const PhysicalConstants& consts) {
    if (up.direction != BeamDirection::up || down.direction != BeamDirection::down)
        throw ConfigurationError("effective field needs one up beam and one down beam");
    const bool down_absent = down.omega == 0.0 && down.k == 0.0 && down.phi0 == 0.0;
    if (!down_absent) {
        if (up.sigma != -down.sigma)
            throw ConfigurationError("beams must be chirped in opposite directions (sigma_up = -sigma_down)");
        if (up.t_init != down.t_init || up.source_distance() != down.source_distance())
            throw ConfigurationError("beams must share initiation time and source distance");
    }
    EffectiveField f;
    f.K = up.k + down.k;
    f.delta_omega = up.omega - down.omega;
    f.delta_k = up.k - down.k;
    f.sigma = -up.sigma;
    f.t_init_retarded = up.t_init + up.source_distance() / consts.c;
    const Real tr = to_real(f.t_init_retarded);
    const Real gr = to_real(g);
    const Real zero = 0;
    Real off = phase_single<Real>(up, gr, zero, tr, consts);
    if (!down_absent) off -= phase_single<Real>(down, gr, zero, tr, consts);
    f.Phi_off = to_double(off);
    return f;
}

std::string_view to_string(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::SPT: return "SPT";
        case MechanismKind::Bragg: return "Bragg";
        case MechanismKind::Raman: return "Raman";
        case MechanismKind::E1M1: return "E1M1";
    }
    return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view name) {
    if (name == "SPT") return MechanismKind::SPT;
    if (name == "Bragg") return MechanismKind::Bragg;
    if (name == "Raman") return MechanismKind::Raman;
    if (name == "E1M1" || name == "E1-M1") return MechanismKind::E1M1;
    return std::nullopt;
}

namespace {

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

void Mechanism::validate(const PhysicalConstants& consts) const {
    const std::string name(to_string(kind));
    if (!std::isfinite(K) || !std::isfinite(delta_k) || !std::isfinite(omega_A))
        throw ConfigurationError(name + ": non-finite mechanism parameter");
    switch (kind) {
        case MechanismKind::SPT:
            if (!(K > 0.0)) throw ConfigurationError("SPT: K must be positive");
            if (!close_rel(K, delta_k, 1e-12)) throw ConfigurationError("SPT: requires K = delta_k");
            if (!close_rel(omega_A, delta_omega(consts), 1e-3))
                throw ConfigurationError("SPT: omega_A must be close to delta_omega");
            break;
        case MechanismKind::Bragg:
            if (!(K > 0.0)) throw ConfigurationError("Bragg: K must be positive");
            if (omega_A != 0.0) throw ConfigurationError("Bragg: omega_A must be 0");
            if (!(std::abs(delta_k) < K)) throw ConfigurationError("Bragg: requires |delta_k| << K");
            break;
        case MechanismKind::Raman:
            if (!(K > 0.0)) throw ConfigurationError("Raman: K must be positive");
            if (!(delta_k >= 0.0 && delta_k <= K)) throw ConfigurationError("Raman: requires 0 <= delta_k <= K");
            if (!(omega_A >= 0.0)) throw ConfigurationError("Raman: omega_A must be non-negative");
            break;
        case MechanismKind::E1M1:
            if (K != 0.0) throw ConfigurationError("E1M1: K must be 0");
            if (!(omega_A > 0.0)) throw ConfigurationError("E1M1: omega_A must be positive");
            if (!close_rel(delta_k, k_A(consts), 1e-12)) throw ConfigurationError("E1M1: requires delta_k = k_A");
            break;
    }
}

double recoil_velocity(double K, double m_bar, const PhysicalConstants& consts) {
    if (!(m_bar > 0.0)) throw ConfigurationError("mass must be positive");
    return consts.hbar * K / m_bar;
}

double resonant_delta_omega(const Mechanism& mech, double v_R, double m_bar,
                            const PhysicalConstants& consts) {
    if (!(m_bar > 0.0)) throw ConfigurationError("mass must be positive");
    if (mech.kind == MechanismKind::E1M1) return mech.omega_A;
    const double v_K = recoil_velocity(mech.K, m_bar, consts);
    return mech.omega_A + mech.K * v_K / 2.0 + mech.K * v_R;
}

Mechanism tune_to_resonance(const Mechanism& mech, double v_R, double m_bar,
                            const PhysicalConstants& consts) {
    Mechanism out = mech;
    switch (mech.kind) {
        case MechanismKind::SPT: {
            out.delta_k = mech.K;
            const double v_K = recoil_velocity(mech.K, m_bar, consts);
            out.omega_A = mech.K * consts.c - mech.K * (v_K / 2.0 + v_R);
            break;
        }
        case MechanismKind::E1M1:
            out.delta_k = mech.omega_A / consts.c;
            break;
        case MechanismKind::Bragg:
        case MechanismKind::Raman:
            out.delta_k = resonant_delta_omega(mech, v_R, m_bar, consts) / consts.c;
            break;
    }
    return out;
}

double envelope_peak_time(const LaserBeam& beam, double z, const PhysicalConstants& consts) {
    const double t_retarded = beam.t_init + beam.source_distance() / consts.c;
    return t_retarded + beam.sign() * z / consts.c;
}

double envelope(const LaserBeam& beam, const PulseEnvelope& env, double z, double t,
                const PhysicalConstants& consts) {
    if (!(env.sigma_omega > 0.0)) throw ConfigurationError("envelope width must be positive");
    const double dt = t - envelope_peak_time(beam, z, consts);
    return env.amplitude * std::exp(-env.sigma_omega * env.sigma_omega * dt * dt / 2.0);
}

EikonalSteps EikonalSteps::defaults(const LaserBeam& beam) {
    if (beam.omega == 0.0 || beam.k == 0.0)
        throw ConfigurationError("eikonal steps need a beam with nonzero frequency");
    const double wavelength = 2.0 * std::numbers::pi / std::abs(beam.k);
    return {1e-4 * wavelength, 1e-4 / std::abs(beam.omega)};
}

double eikonal_residual(const LaserBeam& beam, double g, double z, double t,
                        const EikonalSteps& steps, const PhysicalConstants& consts) {
    if (!(steps.dz > 0.0) || !(steps.dt > 0.0)) throw ConfigurationError("finite-difference steps must be positive");
    const Real gr = to_real(g);
    const Real zr = to_real(z);
    const Real tr = to_real(t);
    const Real hz = to_real(steps.dz);
    const Real ht = to_real(steps.dt);
    const Real dphi_dz =
        (phase_single<Real>(beam, gr, zr + hz, tr, consts) - phase_single<Real>(beam, gr, zr - hz, tr, consts)) /
        (2 * hz);
    const Real dphi_dt =
        (phase_single<Real>(beam, gr, zr, tr + ht, consts) - phase_single<Real>(beam, gr, zr, tr - ht, consts)) /
        (2 * ht);
    const Real c = to_real(consts.c);
    const Real lapse = 1 + gr * zr / (c * c);
    const Real temporal = dphi_dt / c;
    return to_double(temporal * temporal / (lapse * lapse) - dphi_dz * dphi_dz);
}

}  // namespace fslphase
