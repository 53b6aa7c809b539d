#include "fslphase/oracle.hpp"

#include "fslphase/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>
#include <string>

namespace fslphase {

Scenario rescale_light_speed(const Scenario& s, double c_tilde) {
    if (!(c_tilde > 0.0) || !std::isfinite(c_tilde)) throw ConfigurationError("c_tilde must be positive and finite");
    Scenario out = s;
    out.constants = s.constants.with_light_speed(c_tilde);
    out.on_resonance = false;
    const double detuning = s.mechanism.delta_omega(s.constants) - s.mechanism.omega_A;
    switch (s.mechanism.kind) {
        case MechanismKind::SPT:
        case MechanismKind::E1M1: {
            const double delta_omega = c_tilde * s.mechanism.delta_k;
            out.mechanism.omega_A = s.mechanism.kind == MechanismKind::E1M1 ? delta_omega : delta_omega - detuning;
            break;
        }
        case MechanismKind::Bragg:
        case MechanismKind::Raman:
            out.mechanism.delta_k = s.mechanism.delta_omega(s.constants) / c_tilde;
            break;
    }
    out.species.omega_A = out.mechanism.omega_A;
    if (s.time_shift) out.time_shift->delta_t = s.time_shift->delta_t * (s.constants.c / c_tilde);
    return out;
}

namespace {

struct ExactState {
    BasicArmTrajectory<Real> arm1;
    BasicArmTrajectory<Real> arm2;
    ExactArms events;
};

Real pulse_time(const Scenario& s, std::size_t index) {
    Real t = s.geometry.time_as<Real>(index);
    if (s.time_shift && static_cast<std::size_t>(s.time_shift->pulse_index) == index) t += to_real(s.time_shift->delta_t);
    return t;
}

ExactState propagate_exact(const Scenario& scaled) {
    const auto& pulses = scaled.geometry.pulses();
    const Real c = to_real(scaled.constants.c);
    const Real g = to_real(scaled.g);
    const Real hbar_over_m = to_real(scaled.constants.hbar) / to_real(scaled.species.m_bar);
    const EffectiveField field = scaled.field();
    // Generous span so that early and late interaction events stay inside.
    const Real begin = to_real(std::min(0.0, scaled.geometry.first_time()) - 1.0 - scaled.geometry.total_time());
    const Real end = to_real(scaled.geometry.last_time() + 1.0 + scaled.geometry.total_time());
    BasicArmTrajectory<Real> arm1(Real(0), to_real(scaled.initial.z0), to_real(scaled.initial.v0), g, begin, end);
    BasicArmTrajectory<Real> arm2 = arm1;
    ExactArms events;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const Real t_pulse = pulse_time(scaled, i);
        for (int arm : {1, 2}) {
            const int w = pulses[i].weight(arm);
            if (w == 0) continue;
            auto& traj = arm == 1 ? arm1 : arm2;
            const Real t_star = solve_exact_interaction_time_as<Real>(traj, t_pulse, c);
            const Real z_star = traj.position(t_star);
            const Real k_local = effective_wave_vector<Real>(field, g, z_star, t_star, scaled.constants);
            const Real dv = Real(w) * hbar_over_m * k_local;
            traj.add_kick(t_star, dv);
            ExactEvent ev{static_cast<int>(i), w, to_double(t_star), to_double(z_star), to_double(dv)};
            (arm == 1 ? events.arm1 : events.arm2).push_back(ev);
        }
    }
    return {std::move(arm1), std::move(arm2), std::move(events)};
}

Real window_begin(const ExactState& st) {
    Real a = st.arm1.kicks().front().time;
    if (!st.arm2.kicks().empty()) a = std::min(a, st.arm2.kicks().front().time);
    return a;
}

Real window_end(const ExactState& st) {
    Real b = st.arm1.kicks().back().time;
    if (!st.arm2.kicks().empty()) b = std::max(b, st.arm2.kicks().back().time);
    return b;
}

// Weights come from the events: the kick sign is not usable when the local wave
// vector vanishes.
Real arm_phase_weighted(const Scenario& scaled, const BasicArmTrajectory<Real>& traj,
                        const std::vector<ExactEvent>& events, const Real& a, const Real& b) {
    const Real c = to_real(scaled.constants.c);
    const Real g = to_real(scaled.g);
    const Real omega_A = to_real(scaled.mechanism.omega_A);
    const Real m_over_hbar = to_real(scaled.species.m_bar) / to_real(scaled.constants.hbar);
    const EffectiveField field = scaled.field();

    const Real action = m_over_hbar * (traj.integral_v2(a, b) / 2 - g * traj.integral_z(a, b));

    Real imprint = 0;
    Real mass_defect = 0;
    Real lambda = Real(-1) / 2;
    Real start = a;
    auto piece = [&](const Real& lo, const Real& hi) {
        if (!(hi > lo)) return;
        const Real integrand = (hi - lo) - traj.integral_v2(lo, hi) / (2 * c * c) + g * traj.integral_z(lo, hi) / (c * c);
        mass_defect -= lambda * omega_A * integrand;
    };
    const auto& kicks = traj.kicks();
    for (std::size_t i = 0; i < kicks.size(); ++i) {
        const Real& t = kicks[i].time;
        const Real w = Real(events[i].weight);
        imprint += w * phase_effective<Real>(field, g, traj.position(t), t, scaled.constants).total();
        piece(start, t);
        start = t;
        lambda += w;
    }
    piece(start, b);
    return action + imprint + mass_defect;
}

struct ExactPhases {
    Real arm1;
    Real arm2;
    Real separation;
    Real difference() const { return arm1 - arm2 + separation; }
};

ExactPhases exact_phases(const Scenario& s, double c_tilde) {
    s.validate();
    const Scenario scaled = rescale_light_speed(s, c_tilde);
    scaled.validate();
    const ExactState st = propagate_exact(scaled);
    ExactPhases out;
    if (st.arm1.kicks().empty() && st.arm2.kicks().empty()) return out;
    const Real a = window_begin(st);
    const Real b = window_end(st);
    out.arm1 = arm_phase_weighted(scaled, st.arm1, st.events.arm1, a, b);
    out.arm2 = arm_phase_weighted(scaled, st.arm2, st.events.arm2, a, b);
    const Real m_over_hbar = to_real(scaled.species.m_bar) / to_real(scaled.constants.hbar);
    const Real v_sum = st.arm1.velocity_right(b) + st.arm2.velocity_right(b);
    out.separation = m_over_hbar * v_sum / 2 * (st.arm2.position(b) - st.arm1.position(b));
    return out;
}

struct RealFit {
    Real b0, b1, b2;  // in the scaled variable x = c_min / c_tilde
};

RealFit least_squares(const std::vector<Real>& x, const std::vector<Real>& y) {
    // Normal equations of the 3-column Vandermonde system, solved with partial
    // pivoting; the extended precision keeps them well conditioned.
    Real m[3][4] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Real basis[3] = {Real(1), x[i], x[i] * x[i]};
        for (int r = 0; r < 3; ++r) {
            for (int col = 0; col < 3; ++col) m[r][col] += basis[r] * basis[col];
            m[r][3] += basis[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (abs(m[r][col]) > abs(m[pivot][col])) pivot = r;
        }
        if (m[pivot][col] == 0) throw ComputationError("oracle fit: singular design matrix");
        if (pivot != col) {
            for (int k = 0; k < 4; ++k) std::swap(m[col][k], m[pivot][k]);
        }
        for (int r = col + 1; r < 3; ++r) {
            const Real f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    Real b[3];
    for (int r = 2; r >= 0; --r) {
        Real acc = m[r][3];
        for (int k = r + 1; k < 3; ++k) acc -= m[r][k] * b[k];
        b[r] = acc / m[r][r];
    }
    return {b[0], b[1], b[2]};
}

SeriesFit to_series(const RealFit& f, const Real& c_min, const std::vector<Real>& x, const std::vector<Real>& y) {
    SeriesFit out;
    out.a0 = to_double(f.b0);
    out.a1 = to_double(f.b1 * c_min);
    out.a2 = to_double(f.b2 * c_min * c_min);
    Real ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Real r = y[i] - (f.b0 + f.b1 * x[i] + f.b2 * x[i] * x[i]);
        ss += r * r;
    }
    out.rms_residual = to_double(sqrt(ss / Real(x.size())));
    return out;
}

double loglog_slope(const std::vector<double>& c, const std::vector<double>& r) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (r[i] == 0.0) continue;
        lx.push_back(std::log(c[i]));
        ly.push_back(std::log(std::abs(r[i])));
    }
    if (lx.size() < 2) return 0.0;
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

double idealized_max_speed(const Scenario& s) {
    const auto arms = propagate_idealized(s.geometry, s.mechanism, s.species, s.initial, s.g, s.constants);
    return std::max(arms.first.max_speed(), arms.second.max_speed());
}

struct PointResult {
    Real exact;
    Real model;
};

}  // namespace

ExactArms exact_events(const Scenario& s, double c_tilde) {
    s.validate();
    const Scenario scaled = rescale_light_speed(s, c_tilde);
    ExactState st = propagate_exact(scaled);
    if (!st.arm1.kicks().empty() || !st.arm2.kicks().empty()) {
        st.events.window_begin = to_double(window_begin(st));
        st.events.window_end = to_double(window_end(st));
    }
    return st.events;
}

double exact_arm_phase(const Scenario& s, int arm, double c_tilde) {
    if (arm != 1 && arm != 2) throw std::invalid_argument("arm index must be 1 or 2");
    const ExactPhases p = exact_phases(s, c_tilde);
    return to_double(arm == 1 ? p.arm1 : p.arm2);
}

double exact_phase_difference(const Scenario& s, double c_tilde) { return to_double(exact_phases(s, c_tilde).difference()); }

OracleRun extract_series(const Scenario& s, std::vector<double> c_tilde_values) {
    s.validate();
    if (c_tilde_values.size() < 4) throw ComputationError("oracle needs at least four c_tilde values");
    std::sort(c_tilde_values.begin(), c_tilde_values.end(), std::greater<>());
    if (std::adjacent_find(c_tilde_values.begin(), c_tilde_values.end()) != c_tilde_values.end())
        throw ComputationError("oracle c_tilde values must be distinct");
    const double c_max = c_tilde_values.front();
    const double c_min = c_tilde_values.back();
    if (!(c_min > 0.0) || std::log10(c_max / c_min) < 1.5)
        throw ComputationError("ill-conditioned oracle fit: c_tilde values must span at least 1.5 decades");

    OracleRun run;
    run.c_tilde_values = c_tilde_values;
    run.max_atomic_speed = idealized_max_speed(s);
    for (double c : c_tilde_values) {
        if (!(c > 10.0 * run.max_atomic_speed)) {
            std::ostringstream msg;
            msg << "c_tilde = " << c << " m/s is not above ten times the largest atomic speed ("
                << run.max_atomic_speed << " m/s)";
            throw CausalityError(msg.str());
        }
    }
    run.unperturbed = unperturbed_phase(s);
    {
        const PhaseBreakdown b = total_phase(s);
        for (double term : {b.fsl_clock, b.fsl_doppler, b.chirp, b.time_dilation, b.ts_clock, b.ts_doppler, b.ts_chirp})
            run.first_order_phase = std::max(run.first_order_phase, std::abs(term));
        run.first_order_scale = run.first_order_phase * s.constants.c;
    }

    std::vector<std::future<PointResult>> jobs;
    jobs.reserve(c_tilde_values.size());
    for (double c : c_tilde_values) {
        jobs.push_back(std::async(std::launch::async, [&s, c] {
            PointResult r;
            r.exact = exact_phases(s, c).difference();
            r.model = total_phase_extended(rescale_light_speed(s, c)).total();
            return r;
        }));
    }
    std::vector<Real> exact;
    std::vector<Real> model;
    for (auto& job : jobs) {
        const PointResult r = job.get();
        exact.push_back(r.exact);
        model.push_back(r.model);
    }

    const Real cm = to_real(c_min);
    std::vector<Real> x;
    for (double c : c_tilde_values) x.push_back(cm / to_real(c));
    const RealFit fe = least_squares(x, exact);
    const RealFit fm = least_squares(x, model);
    run.fit = to_series(fe, cm, x, exact);
    run.model_fit = to_series(fm, cm, x, model);

    for (std::size_t i = 0; i < x.size(); ++i) {
        run.exact_phases.push_back(to_double(exact[i]));
        run.model_phases.push_back(to_double(model[i]));
        run.residuals.push_back(to_double(exact[i] - model[i]));
        run.fit_residuals.push_back(to_double(exact[i] - fe.b0 - fe.b1 * x[i]));
    }
    run.fit_residual_slope = loglog_slope(run.c_tilde_values, run.fit_residuals);
    run.model_residual_slope = loglog_slope(run.c_tilde_values, run.residuals);
    run.fit_consistent = run.fit.rms_residual < 1e-3 * std::abs(run.fit.a2) / (c_min * c_min);
    return run;
}

OracleVerdict verdict(const OracleRun& run, const OracleTolerances& tol) {
    OracleVerdict v;
    const double c_min = run.c_tilde_values.back();

    v.a0_error = std::abs(run.fit.a0 - run.unperturbed);
    const double a0_ref = std::max(std::abs(run.unperturbed), run.first_order_phase);
    v.a0_ok = v.a0_error <= std::max(tol.a0_relative * a0_ref, tol.a0_absolute);

    const double a1_ref = std::abs(run.model_fit.a1);
    const double denominator = a1_ref > tol.null_fraction * run.first_order_scale ? a1_ref : run.first_order_scale;
    if (denominator > 0.0) {
        v.a1_error = std::abs(run.fit.a1 - run.model_fit.a1) / denominator;
        v.a1_ok = v.a1_error <= tol.a1_relative;
    } else {
        v.a1_error = std::abs(run.fit.a1);
        v.a1_ok = v.a1_error / c_min <= tol.a0_absolute;
    }

    // The order check needs a second-order term above rounding.
    v.slope_checked = std::abs(run.fit.a2) / (c_min * c_min) > tol.a0_absolute;
    v.slope_ok = std::abs(run.fit_residual_slope - tol.slope_target) <= tol.slope_tolerance;
    return v;
}

void write_csv(std::ostream& os, const OracleRun& run) {
    std::string out = "c_tilde,exact_phase,model_phase,residual\n";
    for (std::size_t i = 0; i < run.c_tilde_values.size(); ++i) {
        out += format_number(run.c_tilde_values[i]) + ',' + format_number(run.exact_phases[i]) + ',' +
               format_number(run.model_phases[i]) + ',' + format_number(run.residuals[i]) + '\n';
    }
    os << out;
}

std::vector<double> default_c_tilde_grid() { return {1e5, 3e5, 1e6, 3e6, 1e7}; }

}  // namespace fslphase
