#include "fslphase/geometry.hpp"

#include "fslphase/trajectory.hpp"

#include <cmath>
#include <string>

namespace fslphase {

Geometry Geometry::create(std::vector<PulseEvent> pulses, std::string label) {
    if (pulses.empty()) throw ConfigurationError("geometry needs at least one pulse");
    int sum1 = 0;
    int sum2 = 0;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const auto& p = pulses[i];
        const std::string where = "pulse " + std::to_string(i);
        if (!std::isfinite(p.time)) throw ConfigurationError(where + ": non-finite time");
        if (i > 0 && !(p.time > pulses[i - 1].time))
            throw ConfigurationError(where + ": pulse times must be strictly increasing");
        if (std::abs(p.weight_arm1) > 1 || std::abs(p.weight_arm2) > 1)
            throw ConfigurationError(where + ": weights must be -1, 0 or +1");
        if (p.weight_arm1 == 0 && p.weight_arm2 == 0)
            throw ConfigurationError(where + ": at least one weight must be nonzero");
        sum1 += p.weight_arm1;
        sum2 += p.weight_arm2;
        if (sum1 < 0 || sum1 > 1 || sum2 < 0 || sum2 > 1)
            throw ConfigurationError(where + ": state-response function leaves {-1/2, +1/2}");
    }
    return Geometry(std::move(pulses), std::move(label));
}

double Geometry::response_after(int arm, int index) const {
    int sum = 0;
    for (int i = 0; i <= index && i < static_cast<int>(pulses_.size()); ++i) sum += pulses_[i].weight(arm);
    return sum - 0.5;
}

ResponseSample Geometry::sample(int arm, double t) const {
    int before = 0;
    for (std::size_t i = 0; i < pulses_.size(); ++i) {
        const auto& p = pulses_[i];
        if (p.time < t) {
            before += p.weight(arm);
        } else if (p.time == t) {
            const double left = before - 0.5;
            const double right = left + p.weight(arm);
            return {(left + right) / 2.0, p.weight(arm) != 0};
        } else {
            break;
        }
    }
    return {before - 0.5, false};
}

bool Geometry::internal_state_closed() const {
    int sum1 = 0;
    int sum2 = 0;
    for (const auto& p : pulses_) {
        sum1 += p.weight_arm1;
        sum2 += p.weight_arm2;
    }
    return sum1 == 0 && sum2 == 0;
}

bool Geometry::arms_identical() const {
    for (const auto& p : pulses_) {
        if (p.weight_arm1 != p.weight_arm2) return false;
    }
    return true;
}

Geometry Geometry::create_regular(double unit, const std::vector<int>& multiples,
                                  const std::vector<std::pair<int, int>>& weights, std::string label) {
    if (!(unit > 0.0) || !std::isfinite(unit)) throw ConfigurationError("time unit must be positive");
    if (multiples.size() != weights.size()) throw ConfigurationError("one weight pair per pulse required");
    std::vector<PulseEvent> pulses;
    for (std::size_t i = 0; i < multiples.size(); ++i) {
        pulses.push_back({unit * multiples[i], weights[i].first, weights[i].second});
    }
    Geometry geom = create(std::move(pulses), std::move(label));
    geom.unit_ = unit;
    geom.multiples_ = multiples;
    return geom;
}

Geometry build_mzi(double T) {
    if (!(T > 0.0)) throw ConfigurationError("interrogation time T must be positive");
    return Geometry::create_regular(T, {0, 1, 2}, {{1, 0}, {-1, 1}, {0, -1}}, "mzi");
}

Geometry build_butterfly(double T) {
    if (!(T > 0.0)) throw ConfigurationError("interrogation time T must be positive");
    return Geometry::create_regular(T, {0, 1, 3, 4}, {{1, 0}, {-1, 1}, {1, -1}, {-1, 0}}, "butterfly");
}

bool is_mzi(const Geometry& geom) {
    const auto& p = geom.pulses();
    if (p.size() != 3) return false;
    const double T = p[1].time - p[0].time;
    return p[0].weight_arm1 == 1 && p[0].weight_arm2 == 0 && p[1].weight_arm1 == -1 && p[1].weight_arm2 == 1 &&
           p[2].weight_arm1 == 0 && p[2].weight_arm2 == -1 &&
           std::abs((p[2].time - p[1].time) - T) <= 1e-12 * std::abs(T);
}

ClosureReport check_closure(const Geometry& geom, const Mechanism& mech, double m_bar,
                            const InitialConditions& ic, double g, const PhysicalConstants& consts) {
    const AtomSpecies species{m_bar, mech.omega_A};
    const auto [arm1, arm2] = propagate_idealized_as<Real>(geom, mech, species, ic, g, consts);
    const Real t_end = geom.time_as<Real>(geom.pulses().size() - 1);
    ClosureReport r;
    // Differences of the kick displacements only; the shared free fall cancels.
    Real dz = 0;
    Real dv = 0;
    for (const auto& k : arm1.kicks()) {
        dz += k.dv * (t_end - k.time);
        dv += k.dv;
    }
    for (const auto& k : arm2.kicks()) {
        dz -= k.dv * (t_end - k.time);
        dv -= k.dv;
    }
    r.delta_z = to_double(dz);
    r.delta_v = to_double(dv);
    const double v_K = recoil_velocity(mech.K, m_bar, consts);
    const double duration = geom.total_time() > 0.0 ? geom.total_time() : 1.0;
    if (v_K != 0.0) {
        r.natural_dz = r.delta_z / (std::abs(v_K) * duration);
        r.natural_dv = r.delta_v / std::abs(v_K);
    }
    r.internal_state_closed = geom.internal_state_closed();
    r.closed = r.internal_state_closed && std::abs(r.natural_dz) < 1e-12 && std::abs(r.natural_dv) < 1e-12;
    return r;
}

}  // namespace fslphase
