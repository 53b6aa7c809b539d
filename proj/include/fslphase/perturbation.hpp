#pragma once

#include "fslphase/constants.hpp"
#include "fslphase/geometry.hpp"
#include "fslphase/light_field.hpp"
#include "fslphase/precision.hpp"
#include "fslphase/trajectory.hpp"

#include <optional>

namespace fslphase {

/// Shift of one pulse of the schedule by `delta_t`, treated as a perturbation.
struct TimeShift {
    int pulse_index = 1;
    double delta_t = 0.0;

    bool operator==(const TimeShift&) const = default;
};

/// Everything needed to evaluate one interferometer.
struct Scenario {
    Geometry geometry = build_mzi(1.0);
    Mechanism mechanism;
    AtomSpecies species;
    InitialConditions initial;
    double g = 0.0;        ///< m/s^2
    double sigma = 0.0;    ///< chirp rate, m/s^2
    double phi_off = 0.0;  ///< rad
    double L = 0.0;        ///< laser source distance from the origin, m
    PhysicalConstants constants = PhysicalConstants::codata();
    std::optional<TimeShift> time_shift;
    /// When set, validate() also requires the laser tuning to match the
    /// resonance condition for initial.v_R.
    bool on_resonance = false;

    /// Effective two-beam field with the retarded initiation time at t = 0.
    EffectiveField field() const;
    double recoil_velocity() const;
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

/// Per-arm (or arm-difference) first-order contributions.
struct ContributionTerms {
    double fsl_clock = 0.0;
    double fsl_doppler = 0.0;
    double chirp = 0.0;
    double time_dilation = 0.0;

    double total() const;
};

struct TimeShiftTerms {
    double ts_clock = 0.0;
    double ts_doppler = 0.0;
    double ts_chirp = 0.0;
};

struct PhaseBreakdown {
    double unperturbed = 0.0;
    double fsl_clock = 0.0;
    double fsl_doppler = 0.0;
    double chirp = 0.0;
    double time_dilation = 0.0;
    double ts_clock = 0.0;
    double ts_doppler = 0.0;
    double ts_chirp = 0.0;
    double total = 0.0;

    /// Sum of everything except the unperturbed phase, accumulated from the
    /// extended-precision terms.
    double perturbation = 0.0;
};

enum class Truncation {
    first_order,  ///< keep exactly the 1/c terms (frequencies counted as order c)
    full,         ///< also keep the 1/c^2 pieces of the delay and of delta_Phi
};

/// Unperturbed phase: action difference plus idealized laser and atomic
/// imprints. Throws ComputationError for open geometries.
double unperturbed_phase(const Scenario& s);

/// Delay-expanded arm phase (frequencies times delays, delta_Phi imprint,
/// mass-defect integral). Boundary terms are dropped identically on both arms.
double arm_phase_functional_A(const Scenario& s, int arm, Truncation truncation = Truncation::first_order);
double functional_A_difference(const Scenario& s, Truncation truncation = Truncation::first_order);

/// Integrated-by-parts arm phase, split into its four named contributions.
ContributionTerms arm_phase_functional_B(const Scenario& s, int arm);
ContributionTerms functional_B_difference(const Scenario& s);

/// Phase from shifting one pulse by s.time_shift (zero terms when absent).
/// Refuses geometries other than the Mach-Zehnder.
TimeShiftTerms compensation_phase(const Scenario& s);

/// Unperturbed phase plus arm-1 minus arm-2 contributions of functional B and
/// time-shift terms.
PhaseBreakdown total_phase(const Scenario& s);

/// Unperturbed phase and summed perturbation without rounding to double.
struct ExtendedPhase {
    Real unperturbed;
    Real perturbation;
    Real total() const { return unperturbed + perturbation; }
};
ExtendedPhase total_phase_extended(const Scenario& s);

}  // namespace fslphase
