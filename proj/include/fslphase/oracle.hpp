#pragma once

#include "fslphase/perturbation.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace fslphase {

/// The same experiment at an artificial light speed c_tilde. The transferred
/// wave vector K and the detuning delta_omega - omega_A are kept. SPT and E1-M1
/// keep delta_k (their laser frequency follows c_tilde), Bragg and Raman keep
/// delta_omega. A pulse time shift is scaled by c / c_tilde.
Scenario rescale_light_speed(const Scenario& s, double c_tilde);

/// Interaction event of one arm with one pulse.
struct ExactEvent {
    int pulse_index = 0;
    int weight = 0;
    double t_star = 0.0;
    double z_star = 0.0;
    double kick = 0.0;  ///< velocity change (m/s)
};

struct ExactArms {
    std::vector<ExactEvent> arm1;
    std::vector<ExactEvent> arm2;
    double window_begin = 0.0;  ///< earliest interaction time of either arm
    double window_end = 0.0;    ///< latest interaction time of either arm
};

/// Interaction events of both arms at c_tilde, with kicks from the local
/// gradient of the effective phase.
ExactArms exact_events(const Scenario& s, double c_tilde);

/// Classical phase of one arm at c_tilde: action, imprinted effective phase at
/// the exact events and the mass-defect integral, all over the common window
/// of both arms.
double exact_arm_phase(const Scenario& s, int arm, double c_tilde);

/// Arm 1 minus arm 2, including the separation phase at the window end.
double exact_phase_difference(const Scenario& s, double c_tilde);

struct SeriesFit {
    double a0 = 0.0;
    double a1 = 0.0;  ///< rad m/s
    double a2 = 0.0;  ///< rad m^2/s^2
    double rms_residual = 0.0;
};

struct OracleRun {
    std::vector<double> c_tilde_values;  ///< decreasing
    std::vector<double> exact_phases;
    std::vector<double> model_phases;  ///< unperturbed plus first-order terms at c_tilde
    std::vector<double> residuals;     ///< exact minus model
    std::vector<double> fit_residuals;  ///< exact minus a0 - a1 / c_tilde
    SeriesFit fit;        ///< fit of the exact phases
    SeriesFit model_fit;  ///< fit of the model phases
    double unperturbed = 0.0;
    /// Largest named first-order contribution at the physical c (rad).
    double first_order_phase = 0.0;
    /// first_order_phase times the physical c.
    double first_order_scale = 0.0;
    double max_atomic_speed = 0.0;
    double fit_residual_slope = 0.0;    ///< log-log slope of |fit_residuals|
    double model_residual_slope = 0.0;  ///< log-log slope of |residuals|
    /// Fit residual below 1e-3 of |a2| / c_min^2.
    bool fit_consistent = false;
};

/// Evaluates the exact and the perturbative phase at each c_tilde (in
/// parallel) and fits both against {1, 1/c_tilde, 1/c_tilde^2}. Needs at least
/// four values spanning 1.5 decades, each above ten times the largest atomic
/// speed.
OracleRun extract_series(const Scenario& s, std::vector<double> c_tilde_values);

/// a0 is compared relative to |phi_un|, or to the first-order phase when
/// phi_un vanishes, with an absolute floor.
struct OracleTolerances {
    double a0_relative = 1e-10;
    double a0_absolute = 1e-12;
    double a1_relative = 1e-4;
    /// A predicted a1 below this fraction of the first-order scale counts as
    /// zero; it is then compared relative to that scale.
    double null_fraction = 1e-6;
    double slope_target = -2.0;
    double slope_tolerance = 0.1;
};

struct OracleVerdict {
    bool a0_ok = false;
    bool a1_ok = false;
    bool slope_ok = false;
    bool slope_checked = false;
    double a0_error = 0.0;
    double a1_error = 0.0;  ///< relative to |a1| or, for a null a1, to the first-order scale
    bool pass() const { return a0_ok && a1_ok && (slope_ok || !slope_checked); }
};

OracleVerdict verdict(const OracleRun& run, const OracleTolerances& tol = {});

/// Columns c_tilde, exact_phase, model_phase, residual.
void write_csv(std::ostream& os, const OracleRun& run);

std::vector<double> default_c_tilde_grid();

}  // namespace fslphase
