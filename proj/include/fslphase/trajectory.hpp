#pragma once

#include "fslphase/constants.hpp"
#include "fslphase/geometry.hpp"
#include "fslphase/light_field.hpp"
#include "fslphase/precision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fslphase {

class CausalityError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

struct AtomSpecies {
    double m_bar = 0.0;    ///< mean mass (kg)
    double omega_A = 0.0;  ///< internal splitting (rad/s)

    double delta_m(const PhysicalConstants& consts) const {
        return consts.hbar * omega_A / (consts.c * consts.c);
    }
    double mass_defect_ratio(const PhysicalConstants& consts) const { return delta_m(consts) / m_bar; }
    /// The perturbative expansion assumes delta_m / m_bar << 1.
    bool mass_defect_is_small(const PhysicalConstants& consts) const {
        return std::abs(mass_defect_ratio(consts)) <= 1e-6;
    }
    void validate() const {
        if (!(m_bar > 0.0)) throw ConfigurationError("atom mass must be positive");
        if (!std::isfinite(omega_A)) throw ConfigurationError("omega_A must be finite");
    }
    bool operator==(const AtomSpecies&) const = default;
};

struct InitialConditions {
    double z0 = 0.0;   ///< m, at t = 0
    double v0 = 0.0;   ///< m/s
    double v_R = 0.0;  ///< m/s, velocity the lasers are tuned to

    bool operator==(const InitialConditions&) const = default;
};

template <class T>
struct Kick {
    T time;
    T dv;
};

template <class T>
struct Segment {
    T t_start;
    T t_end;
    T z_start;
    T v_start;
    T acceleration;
};

/// Free fall under uniform gravity with instantaneous velocity kicks.
///
/// Stored as the common free-fall motion from (t0, z0, v0) plus the
/// displacement of each kick, so that differences between arms do not suffer
/// from cancellation of the shared motion.
template <class T>
class BasicArmTrajectory {
public:
    BasicArmTrajectory(T t0, T z0, T v0, T g, T t_begin, T t_end)
        : t0_(t0), z0_(z0), v0_(v0), g_(g), t_begin_(t_begin), t_end_(t_end) {}

    /// Kicks must be added in increasing time order.
    void add_kick(T time, T dv) {
        if (!kicks_.empty() && !(time > kicks_.back().time))
            throw std::logic_error("kicks must be added in strictly increasing time order");
        kicks_.push_back({time, dv});
    }

    void set_span(T t_begin, T t_end) {
        t_begin_ = t_begin;
        t_end_ = t_end;
    }

    T position(const T& t) const {
        const T s = t - t0_;
        T z = z0_ + v0_ * s - g_ * s * s / T(2);
        for (const auto& k : kicks_) {
            if (k.time < t) z += k.dv * (t - k.time);
        }
        return z;
    }

    T velocity_left(const T& t) const { return velocity_impl(t, false); }
    T velocity_right(const T& t) const { return velocity_impl(t, true); }

    /// Mean of the one-sided limits; equals the segment velocity away from kicks.
    T velocity_symmetric(const T& t) const {
        check_span(t);
        return (velocity_left(t) + velocity_right(t)) / T(2);
    }

    /// Closed-form integral of v^2 over [a, b] (no kick strictly inside required;
    /// kicks are handled by splitting).
    T integral_v2(const T& a, const T& b) const { return integrate(a, b, true); }
    /// Closed-form integral of z over [a, b].
    T integral_z(const T& a, const T& b) const { return integrate(a, b, false); }

    std::vector<Segment<T>> segments() const {
        std::vector<Segment<T>> out;
        T start = t_begin_;
        for (const auto& k : kicks_) {
            if (k.time <= start || k.time >= t_end_) continue;
            out.push_back({start, k.time, position(start), velocity_right(start), -g_});
            start = k.time;
        }
        out.push_back({start, t_end_, position(start), velocity_right(start), -g_});
        return out;
    }

    const std::vector<Kick<T>>& kicks() const { return kicks_; }
    T t_begin() const { return t_begin_; }
    T t_end() const { return t_end_; }
    T gravity() const { return g_; }

    /// Largest |v| over the span (extremes of a parabola's velocity lie at
    /// segment ends because the acceleration is constant).
    T max_speed() const {
        using std::abs;
        T best = T(0);
        for (const auto& seg : segments()) {
            best = std::max(best, abs(seg.v_start));
            best = std::max(best, abs(seg.v_start - g_ * (seg.t_end - seg.t_start)));
        }
        return best;
    }

    void check_span(const T& t) const {
        if (t < t_begin_ || t > t_end_)
            throw std::out_of_range("time outside trajectory span");
    }

private:
    T velocity_impl(const T& t, bool include_at) const {
        T v = v0_ - g_ * (t - t0_);
        for (const auto& k : kicks_) {
            if (k.time < t || (include_at && k.time == t)) v += k.dv;
        }
        return v;
    }

    T integrate(const T& a, const T& b, bool squared_velocity) const {
        T total = T(0);
        T start = a;
        auto piece = [&](const T& lo, const T& hi) {
            const T d = hi - lo;
            const T v = velocity_right(lo);
            if (squared_velocity) {
                total += v * v * d - v * g_ * d * d + g_ * g_ * d * d * d / T(3);
            } else {
                total += position(lo) * d + v * d * d / T(2) - g_ * d * d * d / T(6);
            }
        };
        for (const auto& k : kicks_) {
            if (k.time > start && k.time < b) {
                piece(start, k.time);
                start = k.time;
            }
        }
        piece(start, b);
        return total;
    }

    T t0_, z0_, v0_, g_;
    T t_begin_, t_end_;
    std::vector<Kick<T>> kicks_;
};

using ArmTrajectory = BasicArmTrajectory<double>;

template <class T>
using ArmPair = std::pair<BasicArmTrajectory<T>, BasicArmTrajectory<T>>;

/// Idealized arms: each pulse kicks arm j by weight * hbar K / m_bar at T_l.
template <class T>
ArmPair<T> propagate_idealized_as(const Geometry& geom, const Mechanism& mech, const AtomSpecies& species,
                                  const InitialConditions& ic, double g, const PhysicalConstants& consts) {
    const T v_K = T(consts.hbar) * T(mech.K) / T(species.m_bar);
    const T begin = T(std::min(0.0, geom.first_time()));
    const T end = geom.time_as<T>(geom.pulses().size() - 1);
    BasicArmTrajectory<T> arm1(T(0), T(ic.z0), T(ic.v0), T(g), begin, end);
    BasicArmTrajectory<T> arm2 = arm1;
    for (std::size_t i = 0; i < geom.pulses().size(); ++i) {
        const auto& p = geom.pulses()[i];
        const T t = geom.time_as<T>(i);
        if (p.weight_arm1 != 0) arm1.add_kick(t, T(p.weight_arm1) * v_K);
        if (p.weight_arm2 != 0) arm2.add_kick(t, T(p.weight_arm2) * v_K);
    }
    return {std::move(arm1), std::move(arm2)};
}

ArmPair<double> propagate_idealized(const Geometry& geom, const Mechanism& mech, const AtomSpecies& species,
                                    const InitialConditions& ic, double g, const PhysicalConstants& consts);

double velocity_symmetric(const ArmTrajectory& arm, double t);

/// Delta T = z / c (1 + v / c) with the symmetric velocity at T_l.
template <class T>
T interaction_delay_as(const BasicArmTrajectory<T>& arm, const T& t_pulse, const T& c) {
    const T z = arm.position(t_pulse);
    const T v = arm.velocity_symmetric(t_pulse);
    return z / c * (T(1) + v / c);
}

double interaction_delay(const ArmTrajectory& arm, double t_pulse, const PhysicalConstants& consts);

/// Root of t - t_pulse - z(t) / c_tilde = 0 on the trajectory as propagated so
/// far. Requires c_tilde above every speed on the trajectory; then the root is
/// unique. Bracketing is expanded from t_pulse towards the sign of z and
/// refined by safeguarded Newton steps down to the working precision of T.
template <class T>
T solve_exact_interaction_time_as(const BasicArmTrajectory<T>& arm, const T& t_pulse, const T& c_tilde) {
    using std::abs;
    if (!(c_tilde > T(0))) throw CausalityError("light speed must be positive");
    const T vmax = arm.max_speed();
    if (!(vmax < c_tilde)) {
        throw CausalityError("light speed " + std::to_string(to_double(c_tilde)) +
                             " m/s does not exceed the atomic speed " + std::to_string(to_double(vmax)) + " m/s");
    }
    auto f = [&](const T& t) { return t - t_pulse - arm.position(t) / c_tilde; };
    const T f0 = f(t_pulse);
    if (f0 == T(0)) return t_pulse;
    // f is increasing with slope >= 1 - vmax / c_tilde > 0.
    T lo = t_pulse;
    T hi = t_pulse;
    const T scale = abs(f0) / (T(1) - vmax / c_tilde) * T(1.0001) + std::numeric_limits<double>::min();
    if (f0 < T(0)) {
        hi = t_pulse + scale;
    } else {
        lo = t_pulse - scale;
    }
    if (lo < arm.t_begin() || hi > arm.t_end())
        throw CausalityError("no interaction time within the trajectory span for pulse at t = " +
                             std::to_string(to_double(t_pulse)));
    T flo = f(lo);
    T fhi = f(hi);
    if (flo > T(0) || fhi < T(0)) throw CausalityError("interaction time not bracketed");

    const T tol = std::numeric_limits<T>::epsilon() * T(8) * (abs(t_pulse) + abs(hi - lo));
    T x = lo - flo * (hi - lo) / (fhi - flo);
    for (int iter = 0; iter < 200; ++iter) {
        const T fx = f(x);
        if (fx == T(0)) return x;
        if (fx < T(0)) lo = x; else hi = x;
        const T slope = T(1) - arm.velocity_symmetric(x) / c_tilde;
        T next = x - fx / slope;
        if (!(next > lo && next < hi)) next = (lo + hi) / T(2);
        if (abs(next - x) <= tol || hi - lo <= tol) return next;
        x = next;
    }
    return x;
}

double solve_exact_interaction_time(const ArmTrajectory& arm, double t_pulse, double c_tilde);

}  // namespace fslphase
