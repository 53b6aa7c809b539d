#include "fslphase/trajectory.hpp"

namespace fslphase {

ArmPair<double> propagate_idealized(const Geometry& geom, const Mechanism& mech, const AtomSpecies& species,
                                    const InitialConditions& ic, double g, const PhysicalConstants& consts) {
    return propagate_idealized_as<double>(geom, mech, species, ic, g, consts);
}

double velocity_symmetric(const ArmTrajectory& arm, double t) { return arm.velocity_symmetric(t); }

double interaction_delay(const ArmTrajectory& arm, double t_pulse, const PhysicalConstants& consts) {
    return interaction_delay_as<double>(arm, t_pulse, consts.c);
}

double solve_exact_interaction_time(const ArmTrajectory& arm, double t_pulse, double c_tilde) {
    return solve_exact_interaction_time_as<double>(arm, t_pulse, c_tilde);
}

}  // namespace fslphase
