#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rollsing {

/// Adaptive step control settings. Zero for h_init or h_max selects the
/// defaults span/1000 and span/10.
struct IntegratorConfig {
    double rel_tol = 1e-4;
    double abs_tol = 1e-4;
    double h_init = 0.0;          ///< (s)
    double h_min = 1e-12;         ///< (s)
    double h_max = 0.0;           ///< (s)
    std::size_t max_steps = 1'000'000;
};

enum class IntegratorStatus {
    Ok,
    StepUnderflow,   ///< step fell below h_min (stiffness or singularity approach)
    BudgetExceeded,  ///< max_steps attempted steps reached
    RhsFailure,      ///< rhs signalled failure or returned non-finite output
};

/// How dense output samples are produced.
///  - StepEndpoint: steps never cross a sample time; each sample is an exact
///    integrator state. This is the default used by the simulation engine.
///  - Interpolant: steps are unconstrained by the sample grid; samples come
///    from the embedded pair's quartic continuous extension.
enum class SampleMode { StepEndpoint, Interpolant };

/// Dense-output record of one integration.
struct SolutionTrace {
    std::vector<double> times;                 ///< strictly increasing, first = t0
    std::vector<std::vector<double>> states;   ///< one state vector per sample
    std::vector<double> step_sizes;            ///< accepted step sizes, in order
    IntegratorStatus status = IntegratorStatus::Ok;
    double failure_time = 0.0;                 ///< time stamp for non-Ok status
    std::size_t n_accepted = 0;
    std::size_t n_rejected = 0;
    std::size_t n_rhs_evals = 0;

    bool ok() const { return status == IntegratorStatus::Ok; }
};

/// State derivative callback: fill dydt and return true, or return false to
/// abort the integration (recorded as RhsFailure at the evaluation time).
using RhsFunc = std::function<bool(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand-Prince 5(4) integration of y' = f(t, y) over [t0, t1] with
/// proportional step control: a step is accepted when the embedded error
/// estimate satisfies |e_i| <= abs_tol + rel_tol * |y_i| per component, and
/// the next step scales by 0.9 * err^(-1/5) clamped to [0.2, 5.0].
/// Dense output is emitted at t0, t0 + sample_dt, ..., t1.
SolutionTrace integrate_adaptive(const RhsFunc& rhs, std::span<const double> y0,
                                 double t0, double t1, const IntegratorConfig& cfg,
                                 double sample_dt,
                                 SampleMode mode = SampleMode::StepEndpoint);

}  // namespace rollsing
