#pragma once

#include "fslphase/perturbation.hpp"

namespace fslphase {

enum class ZeroFringeUnknown {
    g_given_sigma,  ///< solve for gravity with the chirp rate fixed
    sigma_given_g,  ///< solve for the chirp rate with gravity fixed
};

struct ZeroFringeResult {
    double root = 0.0;   ///< g or sigma, depending on the unknown
    double gamma = 0.0;  ///< g / sigma - 1 at the zero fringe
    int iterations = 0;
};

/// Finds the operating point where the total phase vanishes. The bracket
/// starts at +-1e-4 around the seed and widens geometrically; a configuration
/// without a sign change raises ComputationError.
ZeroFringeResult solve_zero_fringe(const Scenario& s, ZeroFringeUnknown unknown = ZeroFringeUnknown::g_given_sigma);

/// Inputs of the closed-form offsets.
struct OffsetParameters {
    MechanismKind kind = MechanismKind::SPT;
    double v_R = 0.0;
    double v0 = 0.0;
    double sigma = 0.0;
    double T = 0.0;
    double delta_k_over_K = 0.0;  ///< Raman only
    double c = 0.0;
    bool compensated = false;  ///< mirror pulse delayed by compensation_delay
};

/// gamma_S = (v_R - v0)/c + sigma T / c, gamma_B = (v_R - v0)/c,
/// gamma_R = (v_R - v0)/c + (delta_k / K) sigma T / c. With the compensating
/// delay (Gamma = 0) the velocity terms drop out: gamma_S = sigma T / c and
/// gamma_B = 0. E1-M1 is refused: a Doppler-free interferometer carries no
/// gravimetric phase.
double offset_gamma_analytic(const OffsetParameters& p);
OffsetParameters offset_parameters(const Scenario& s);

struct OffsetReport {
    MechanismKind mechanism = MechanismKind::SPT;
    double gamma_analytic = 0.0;
    double gamma_numeric = 0.0;
    double g_root = 0.0;
};

OffsetReport offset_report(const Scenario& s);

struct ErrorBudget {
    double delta_phi = 0.0;
    double delta_v0 = 0.0;
    double delta_g = 0.0;
    double Gamma = 0.0;
    bool compensated = false;
    double phase_term = 0.0;     ///< phase-noise part of (delta_g / sigma)^2
    double velocity_term = 0.0;  ///< velocity part of (delta_g / sigma)^2
};

/// Linearized Gaussian error propagation for an SPT Mach-Zehnder gravimeter,
/// with or without the mirror-pulse compensation.
ErrorBudget error_budget(const Scenario& s, double delta_phi, double delta_v0, bool compensated, double Gamma);

/// Mirror-pulse delay cancelling the first-order dependence on v0:
/// SPT -(g + Gamma) T^2 / (2c), Bragg -(3g + 3Gamma - 2 sigma) T^2 / (2c).
double compensation_delay(MechanismKind kind, double g_estimate, double Gamma, double sigma, double T,
                          const PhysicalConstants& consts);

/// Returns `s` with the compensating delay applied to its mirror pulse.
Scenario with_compensation(const Scenario& s, double Gamma);

/// Differential phase of two recoilless Mach-Zehnder interferometers launched
/// with opposite velocities +-v_B: k_A g T^2 4 v_B / c.
double e1m1_differential_phase(double v_B, double T, double k_A, double g, const PhysicalConstants& consts);

}  // namespace fslphase
