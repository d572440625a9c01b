#include "rollsing/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rollsing/errors.hpp"
#include "rollsing/interp.hpp"

namespace rollsing {

namespace {

SimulationSample make_sample(double t, const SystemState& st, double theta_ddot_cmd,
                             const InverseStep& inv, const WaveParams& wave,
                             const GeometricParams& geom) {
    const DynamicsTerms& d = inv.terms;
    const EnergyBreakdown e = total_energy(st, wave, geom);
    const MassPointState m = mass_trajectory_point(st, wave, geom);

    SimulationSample s;
    s.t = t;
    s.theta = st.theta;
    s.theta_dot = st.theta_dot;
    s.theta_ddot_cmd = theta_ddot_cmd;
    s.gamma = st.gamma;
    s.gamma_dot = st.gamma_dot;
    s.gamma_ddot = inv.gamma_ddot;
    s.zeta = st.zeta();
    s.tau_gamma = inv.tau_gamma;
    s.M12 = d.M12;
    s.M_bar = (d.M11 * d.M22 - d.M12 * d.M12) / d.M12;
    s.kinetic = e.kinetic;
    s.potential = e.potential;
    s.power_residual = 0.0;  // filled after sampling
    s.mass_y = m.y;
    s.mass_z = m.z;
    return s;
}

}  // namespace

InverseStep inverse_step(const SystemState& state, double theta_ddot,
                         const WaveParams& wave, const GeometricParams& geom,
                         double guard) {
    const DynamicsTerms d = dynamics_terms(state, wave, geom);
    if (std::abs(d.M12) <= guard)
        throw SingularityHit(std::numeric_limits<double>::quiet_NaN(), state.zeta(), d.M12,
                             "coupling inertia within the singularity guard");

    InverseStep out;
    out.terms = d;
    out.coupling_negative = d.M12 < 0.0;
    out.gamma_ddot = -(d.M11 * theta_ddot + d.N1 + d.G1) / d.M12;
    out.tau_gamma = d.M12 * theta_ddot + d.M22 * out.gamma_ddot + d.N2 + d.G2;
    return out;
}

ReducedInverse reduced_inverse(const SystemState& state, double theta_ddot,
                               const WaveParams& wave, const GeometricParams& geom,
                               double guard) {
    const DynamicsTerms d = dynamics_terms(state, wave, geom);
    if (std::abs(d.M12) <= guard)
        throw SingularityHit(std::numeric_limits<double>::quiet_NaN(), state.zeta(), d.M12,
                             "coupling inertia within the singularity guard");

    ReducedInverse out;
    out.M_bar = (d.M11 * d.M22 - d.M12 * d.M12) / d.M12;
    out.N_bar = d.M22 * d.N1 / d.M12 - d.N2;
    out.G_bar = d.M22 * d.G1 / d.M12 - d.G2;
    out.tau_bar = out.M_bar * theta_ddot + out.N_bar + out.G_bar;
    return out;
}

SimulationTrace simulate_inverse(const ScenarioConfig& cfg) {
    cfg.geom.validate();
    cfg.wave.validate(cfg.geom, cfg.strict_wave);
    if (!(cfg.singularity_guard > 0.0))
        throw std::invalid_argument("singularity guard must be positive");

    const double T = cfg.profile.duration;
    const double dt = cfg.resolved_sample_dt();

    SimulationTrace trace;
    SimulationSummary& sum = trace.summary;
    sum.min_abs_M12 = std::numeric_limits<double>::infinity();

    // The run starts at rest; the coupling sign there anchors the flip check.
    bool start_negative = false;
    try {
        const InverseStep first = inverse_step(
            SystemState{}, beta_profile(0.0, cfg.profile).theta_ddot, cfg.wave, cfg.geom,
            cfg.singularity_guard);
        start_negative = first.terms.M12 < 0.0;
    } catch (const SingularityHit& s) {
        sum.singularity_hit = true;
        sum.singularity = SingularityRecord{0.0, s.zeta, s.coupling, "guard"};
        sum.min_abs_M12 = std::abs(s.coupling);
        return trace;
    }

    std::optional<SingularityRecord> hit;

    auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        SystemState st;
        const ProfilePoint p = beta_profile(t, cfg.profile);
        st.theta = p.theta;
        st.theta_dot = p.theta_dot;
        st.gamma = y[0];
        st.gamma_dot = y[1];
        try {
            const InverseStep inv =
                inverse_step(st, p.theta_ddot, cfg.wave, cfg.geom, cfg.singularity_guard);
            if ((inv.terms.M12 < 0.0) != start_negative) {
                hit = SingularityRecord{t, st.zeta(), inv.terms.M12, "sign-flip"};
                return false;
            }
            if (std::abs(inv.terms.M12) < sum.min_abs_M12) {
                sum.min_abs_M12 = std::abs(inv.terms.M12);
                sum.min_abs_M12_time = t;
            }
            dydt[0] = st.gamma_dot;
            dydt[1] = inv.gamma_ddot;
            return true;
        } catch (const SingularityHit& s) {
            hit = SingularityRecord{t, s.zeta, s.coupling, "guard"};
            return false;
        }
    };

    const double y0[2] = {0.0, 0.0};
    const SolutionTrace sol = integrate_adaptive(rhs, y0, 0.0, T, cfg.integrator, dt);

    trace.samples.reserve(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        SystemState st;
        const ProfilePoint p = beta_profile(sol.times[i], cfg.profile);
        st.theta = p.theta;
        st.theta_dot = p.theta_dot;
        st.gamma = sol.states[i][0];
        st.gamma_dot = sol.states[i][1];
        InverseStep inv;
        try {
            inv = inverse_step(st, p.theta_ddot, cfg.wave, cfg.geom, cfg.singularity_guard);
        } catch (const SingularityHit&) {
            break;  // sample landed on the singular configuration itself
        }
        trace.samples.push_back(make_sample(sol.times[i], st, p.theta_ddot, inv, cfg.wave, cfg.geom));
        sum.max_abs_tau = std::max(sum.max_abs_tau, std::abs(inv.tau_gamma));
        sum.max_abs_gamma = std::max(sum.max_abs_gamma, std::abs(st.gamma));
    }

    const PowerBalance pb = power_balance_residual(trace);
    for (std::size_t i = 0; i < trace.samples.size(); ++i)
        trace.samples[i].power_residual = pb.residual[i];
    sum.max_power_residual = pb.max_abs;

    sum.integrator_status = sol.status;
    sum.singularity_hit = hit.has_value();
    sum.singularity = hit;
    sum.completed = sol.ok() && !sum.singularity_hit;
    sum.n_accepted = sol.n_accepted;
    sum.n_rejected = sol.n_rejected;
    sum.n_rhs_evals = sol.n_rhs_evals;

    if (!trace.samples.empty()) {
        const SimulationSample& last = trace.samples.back();
        sum.final_time = last.t;
        sum.final_theta = last.theta;
        sum.final_theta_dot = last.theta_dot;
        sum.final_gamma = last.gamma;
        sum.final_gamma_dot = last.gamma_dot;
        sum.theta_target_error = std::abs(last.theta - cfg.profile.final_angle);
    }
    return trace;
}

PowerBalance power_balance_residual(const SimulationTrace& trace) {
    const std::size_t n = trace.samples.size();
    PowerBalance pb;
    pb.residual.assign(n, 0.0);
    pb.max_abs = 0.0;
    if (n < 3) return pb;

    auto energy = [&](std::size_t i) {
        return trace.samples[i].kinetic + trace.samples[i].potential;
    };
    // three-point derivative, second order on non-uniform spacing as well
    auto ddt = [&](std::size_t i) {
        std::size_t a, b, c;
        if (i == 0) {
            a = 0, b = 1, c = 2;
        } else if (i == n - 1) {
            a = n - 3, b = n - 2, c = n - 1;
        } else {
            a = i - 1, b = i, c = i + 1;
        }
        const double ta = trace.samples[a].t, tb = trace.samples[b].t, tc = trace.samples[c].t;
        const double fa = energy(a), fb = energy(b), fc = energy(c);
        const double ti = trace.samples[i].t;
        // derivative of the quadratic through (ta,fa),(tb,fb),(tc,fc) at ti
        return fa * (2.0 * ti - tb - tc) / ((ta - tb) * (ta - tc)) +
               fb * (2.0 * ti - ta - tc) / ((tb - ta) * (tb - tc)) +
               fc * (2.0 * ti - ta - tb) / ((tc - ta) * (tc - tb));
    };

    for (std::size_t i = 0; i < n; ++i) {
        pb.residual[i] = ddt(i) - trace.samples[i].tau_gamma * trace.samples[i].gamma_dot;
        pb.max_abs = std::max(pb.max_abs, std::abs(pb.residual[i]));
    }
    return pb;
}

RoundtripReport roundtrip_forward_check(const SimulationTrace& trace,
                                        const ScenarioConfig& cfg) {
    const std::size_t n = trace.samples.size();
    if (n < 2) return {0.0, 0.0, IntegratorStatus::Ok};

    std::vector<double> ts(n), taus(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = trace.samples[i].t;
        taus[i] = trace.samples[i].tau_gamma;
    }
    const MonotoneCubic tau_of_t(std::move(ts), std::move(taus));

    auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        SystemState st{y[0], y[1], y[2], y[3]};
        if (!st.finite()) return false;
        const Acceleration acc = forward_dynamics(st, tau_of_t(t), cfg.wave, cfg.geom);
        dydt[0] = st.theta_dot;
        dydt[1] = st.gamma_dot;
        dydt[2] = acc.theta_ddot;
        dydt[3] = acc.gamma_ddot;
        return true;
    };

    const double t_end = trace.samples.back().t;
    const double y0[4] = {trace.samples.front().theta, trace.samples.front().gamma,
                          trace.samples.front().theta_dot, trace.samples.front().gamma_dot};
    const SolutionTrace fwd =
        integrate_adaptive(rhs, y0, trace.samples.front().t, t_end, cfg.integrator,
                           cfg.resolved_sample_dt());

    RoundtripReport rep{0.0, 0.0, fwd.status};
    // sample grids coincide by construction; compare up to the shorter trace
    const std::size_t m = std::min(n, fwd.times.size());
    for (std::size_t i = 0; i < m; ++i) {
        const ProfilePoint p = beta_profile(fwd.times[i], cfg.profile);
        rep.max_theta_dev = std::max(rep.max_theta_dev, std::abs(fwd.states[i][0] - p.theta));
        rep.max_gamma_dev =
            std::max(rep.max_gamma_dev, std::abs(fwd.states[i][1] - trace.samples[i].gamma));
    }
    return rep;
}

ComparisonReport compare_classic_modified(const ScenarioConfig& cfg_classic,
                                          const ScenarioConfig& cfg_modified) {
    auto same = [](double a, double b) { return a == b; };
    const GeometricParams &ga = cfg_classic.geom, &gb = cfg_modified.geom;
    if (!(same(ga.rotor_mass, gb.rotor_mass) && same(ga.carrier_mass, gb.carrier_mass) &&
          same(ga.carrier_radius, gb.carrier_radius) && same(ga.rotor_radius, gb.rotor_radius) &&
          same(ga.gravity, gb.gravity) && same(ga.carrier_inertia, gb.carrier_inertia) &&
          same(ga.rotor_inertia, gb.rotor_inertia)))
        throw std::invalid_argument("comparison requires identical geometry");
    if (!(same(cfg_classic.profile.final_angle, cfg_modified.profile.final_angle) &&
          same(cfg_classic.profile.duration, cfg_modified.profile.duration)))
        throw std::invalid_argument("comparison requires identical motion profiles");
    if (cfg_classic.wave.amplitude != 0.0)
        throw std::invalid_argument("the classic configuration must have zero wave amplitude");

    ComparisonReport rep;
    rep.classic = simulate_inverse(cfg_classic);
    rep.modified = simulate_inverse(cfg_modified);

    rep.max_dtheta = rep.rms_dtheta = 0.0;
    rep.max_dgamma = rep.rms_dgamma = 0.0;
    rep.max_dtau = rep.rms_dtau = 0.0;
    const std::size_t m = std::min(rep.classic.samples.size(), rep.modified.samples.size());
    for (std::size_t i = 0; i < m; ++i) {
        const SimulationSample &a = rep.classic.samples[i], &b = rep.modified.samples[i];
        const double dth = a.theta - b.theta;
        const double dga = a.gamma - b.gamma;
        const double dta = a.tau_gamma - b.tau_gamma;
        rep.max_dtheta = std::max(rep.max_dtheta, std::abs(dth));
        rep.max_dgamma = std::max(rep.max_dgamma, std::abs(dga));
        rep.max_dtau = std::max(rep.max_dtau, std::abs(dta));
        rep.rms_dtheta += dth * dth;
        rep.rms_dgamma += dga * dga;
        rep.rms_dtau += dta * dta;
    }
    if (m > 0) {
        rep.rms_dtheta = std::sqrt(rep.rms_dtheta / static_cast<double>(m));
        rep.rms_dgamma = std::sqrt(rep.rms_dgamma / static_cast<double>(m));
        rep.rms_dtau = std::sqrt(rep.rms_dtau / static_cast<double>(m));
    }
    return rep;
}

}  // namespace rollsing
