#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rollsing/beta_profile.hpp"
#include "rollsing/integrate.hpp"
#include "rollsing/model.hpp"
#include "rollsing/params.hpp"
#include "rollsing/singularity.hpp"

namespace rollsing {

enum class ScenarioMode { InverseFeedforward, ForwardRoundtrip, CompareClassic };

/// Everything needed to run one experiment.
struct ScenarioConfig {
    GeometricParams geom;
    WaveParams wave;
    RestToRestSpec profile{0.0, 1.0};
    IntegratorConfig integrator;
    ScenarioMode mode = ScenarioMode::InverseFeedforward;
    double singularity_guard = 1e-8;  ///< abort threshold on |M12| (kg m^2)
    double sample_dt = 0.0;           ///< 0 = auto: duration / 600
    bool strict_wave = true;          ///< reject amplitudes >= 0.1 min(r, R)

    double resolved_sample_dt() const {
        return sample_dt > 0.0 ? sample_dt : profile.duration / 600.0;
    }
};

/// One inverse-dynamics evaluation at a prescribed carrier acceleration.
struct InverseStep {
    double gamma_ddot;        ///< (rad/s^2)
    double tau_gamma;         ///< (N m)
    DynamicsTerms terms;      ///< the terms used
    bool coupling_negative;   ///< M12 < 0: regular but inside a singular region
};

/// Reduced scalar form of the inverse dynamics:
///   tau_bar = M_bar theta_ddot + N_bar + G_bar, with tau_bar == -tau_gamma.
struct ReducedInverse {
    double tau_bar;
    double M_bar, N_bar, G_bar;
};

/// One dense-output row of a simulation. Column order matches the CSV schema.
struct SimulationSample {
    double t;
    double theta, theta_dot, theta_ddot_cmd;
    double gamma, gamma_dot, gamma_ddot;
    double zeta;
    double tau_gamma;
    double M12, M_bar;
    double kinetic, potential;
    double power_residual;
    double mass_y, mass_z;
};

struct SingularityRecord {
    double time;
    double zeta;
    double coupling;     ///< M12 at the hit
    std::string reason;  ///< "guard" or "sign-flip"
};

struct SimulationSummary {
    bool completed = false;
    bool singularity_hit = false;
    std::optional<SingularityRecord> singularity;
    IntegratorStatus integrator_status = IntegratorStatus::Ok;
    double min_abs_M12 = 0.0;
    double min_abs_M12_time = 0.0;
    double max_abs_tau = 0.0;
    double max_abs_gamma = 0.0;
    double max_power_residual = 0.0;
    double final_time = 0.0;
    double final_theta = 0.0, final_theta_dot = 0.0;
    double final_gamma = 0.0, final_gamma_dot = 0.0;
    double theta_target_error = 0.0;  ///< |theta(T) - k|
    std::size_t n_accepted = 0, n_rejected = 0, n_rhs_evals = 0;
};

/// Time-indexed record of one simulation run. When a singularity aborts the
/// run the samples stop at the flagged time; otherwise they span [0, T].
struct SimulationTrace {
    std::vector<SimulationSample> samples;
    SimulationSummary summary;
};

/// Deviation metrics of the forward re-integration against the prescribed
/// trajectory.
struct RoundtripReport {
    double max_theta_dev;  ///< max |theta_fwd - theta_beta| (rad)
    double max_gamma_dev;  ///< max |gamma_fwd - gamma_inverse| (rad)
    IntegratorStatus status;
};

/// Paired classic/modified traces with divergence metrics.
struct ComparisonReport {
    SimulationTrace classic;
    SimulationTrace modified;
    double max_dtheta, rms_dtheta;
    double max_dgamma, rms_dgamma;
    double max_dtau, rms_dtau;
};

/// Per-sample power-balance residuals d(K+P)/dt - tau * gamma_dot, the time
/// derivative taken by three-point finite differences on the sample grid.
struct PowerBalance {
    std::vector<double> residual;  ///< (W), aligned with trace samples
    double max_abs;
};

/// Rotor acceleration and torque for a commanded carrier acceleration:
///   gamma_ddot = -(M11 theta_ddot + N1 + G1) / M12
///   tau        = M12 theta_ddot + M22 gamma_ddot + N2 + G2
/// Throws SingularityHit when |M12| <= guard. A negative (but regular) M12
/// is flagged, not fatal.
InverseStep inverse_step(const SystemState& state, double theta_ddot,
                         const WaveParams& wave, const GeometricParams& geom,
                         double guard = 1e-8);

/// Reduced form; tau_bar equals -tau_gamma of inverse_step identically.
ReducedInverse reduced_inverse(const SystemState& state, double theta_ddot,
                               const WaveParams& wave, const GeometricParams& geom,
                               double guard = 1e-8);

/// Integrate the rotor states (gamma, gamma_dot) from rest under the
/// feed-forward carrier profile, recording torque and diagnostics at uniform
/// sample times. A guard violation or a sign flip of M12 stops the run with
/// a partial trace and singularity_hit set.
SimulationTrace simulate_inverse(const ScenarioConfig& cfg);

/// Recompute the power-balance residual column of a trace.
PowerBalance power_balance_residual(const SimulationTrace& trace);

/// Re-integrate the full two-DOF forward dynamics driven by the trace's
/// torque (monotone-cubic resampled) and compare against the prescribed
/// motion.
RoundtripReport roundtrip_forward_check(const SimulationTrace& trace,
                                        const ScenarioConfig& cfg);

/// Run classic (a = 0) and modified configurations sharing geometry and
/// profile; returns both traces and max/RMS divergence of theta, gamma, tau.
/// Throws std::invalid_argument when the configs do not share geometry and
/// profile or when the classic config has a nonzero amplitude.
ComparisonReport compare_classic_modified(const ScenarioConfig& cfg_classic,
                                          const ScenarioConfig& cfg_modified);

}  // namespace rollsing
