#pragma once

#include "fslphase/constants.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fslphase {

/// A light pulse at idealized time `time`. The weights are the signed jumps of
/// the state-response function of each arm (+1 absorption, -1 emission,
/// 0 when the pulse does not address that arm).
struct PulseEvent {
    double time = 0.0;
    int weight_arm1 = 0;
    int weight_arm2 = 0;

    int weight(int arm) const { return arm == 1 ? weight_arm1 : weight_arm2; }
    bool operator==(const PulseEvent&) const = default;
};

/// Value of an idealized state-response function at one instant.
struct ResponseSample {
    double lambda = 0.0;
    bool is_discontinuity = false;
};

/// Pulse schedule of a two-arm interferometer.
///
/// Each arm starts in the ground state (response -1/2). The running sum of
/// weights must stay in {0, 1}. Whether both arms return to the ground state is
/// part of the closure check, so open schedules can still be represented.
class Geometry {
public:
    static Geometry create(std::vector<PulseEvent> pulses, std::string label = {});

    const std::vector<PulseEvent>& pulses() const { return pulses_; }
    const std::string& label() const { return label_; }
    double first_time() const { return pulses_.front().time; }
    double last_time() const { return pulses_.back().time; }
    /// Duration from the first to the last pulse.
    double total_time() const { return last_time() - first_time(); }

    /// Idealized response Lambda_j(t); the one-sided average at pulse times.
    double response(int arm, double t) const { return sample(arm, t).lambda; }
    ResponseSample sample(int arm, double t) const;
    /// Response on the open interval following pulse `index` (-1 for before the first).
    double response_after(int arm, int index) const;

    /// Both arms return to the ground state.
    bool internal_state_closed() const;
    /// Arms have the same weights everywhere (zero-area interferometer).
    bool arms_identical() const;

    /// Schedule whose pulse times are integer multiples of `unit`. Extended
    /// precision code rebuilds the times from the multiples, so that e.g. 3T
    /// is exactly three times T.
    static Geometry create_regular(double unit, const std::vector<int>& multiples,
                                   const std::vector<std::pair<int, int>>& weights, std::string label = {});
    /// Pulse time `index` in the arithmetic type T.
    template <class T>
    T time_as(std::size_t index) const {
        if (unit_ > 0.0) return T(unit_) * T(multiples_[index]);
        return T(pulses_[index].time);
    }
    /// Time unit of a regular schedule, 0 otherwise.
    double time_unit() const { return unit_; }

    bool operator==(const Geometry&) const = default;

private:
    Geometry(std::vector<PulseEvent> pulses, std::string label)
        : pulses_(std::move(pulses)), label_(std::move(label)) {}

    std::vector<PulseEvent> pulses_;
    std::string label_;
    double unit_ = 0.0;
    std::vector<int> multiples_;
};

/// Beam splitter, mirror, beam splitter at 0, T, 2T.
Geometry build_mzi(double T);
/// Figure-of-eight: pulses at 0, T, 3T, 4T.
Geometry build_butterfly(double T);

/// True when the geometry has the pulse/weight pattern of build_mzi.
bool is_mzi(const Geometry& geom);

struct Mechanism;
struct InitialConditions;

struct ClosureReport {
    double delta_z = 0.0;       ///< arm 1 minus arm 2 position after the last pulse (m)
    double delta_v = 0.0;       ///< same for velocity (m/s)
    double natural_dz = 0.0;    ///< delta_z / (v_K * duration)
    double natural_dv = 0.0;    ///< delta_v / v_K
    bool internal_state_closed = false;
    bool closed = false;
};

/// Propagates both idealized arms and compares them after the last pulse.
/// Closed iff both natural-unit differences are below 1e-12 and both arms
/// return to the ground state.
ClosureReport check_closure(const Geometry& geom, const Mechanism& mech, double m_bar,
                            const InitialConditions& ic, double g, const PhysicalConstants& consts);

}  // namespace fslphase
