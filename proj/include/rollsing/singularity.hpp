#pragma once

#include <cstdint>
#include <vector>

#include "rollsing/params.hpp"

namespace rollsing {

/// Result of the pointwise coupling condition. The margin is the coupling
/// inertia divided by the rotor mass:
///   margin = mu1a^2 + mu1b^2 + I_c/m_c - R (mu1a sin zeta + mu1b cos zeta)
/// so satisfied <=> M12 > 0.
struct CouplingCheck {
    bool satisfied;
    double margin;  ///< (m^2)
};

/// Singular interval of the rotor angle for the classic (a = 0, I_c = 0)
/// mass-point model: { gamma : |wrap(gamma - center)| <= half_width }.
/// Empty when r > R; half_width == 0 marks the boundary-only case r == R.
struct SingularBand {
    bool empty;
    double center;      ///< (rad), principal value in (-pi, pi]
    double half_width;  ///< (rad)

    bool contains(double gamma) const;
};

/// Minimum shift terms of the wave-design inequalities, with the tangency
/// angles at which the shifts are attained. All shifts scale linearly in the
/// wave amplitude.
struct DeltaMu {
    double dmu1, dmu2, dmu3;  ///< (m^2)
    double gamma1, gamma2;    ///< tangency angles (rad)
};

/// The three wave-design inequalities sharing one left-hand side:
///   lhs = r^2 + (a^2/2)[n^2 + (n^2 - 1) cos(2 eps) + 1] + I_c/m_c
///   rhs1 = dmu1,  rhs2 = (sqrt(2)/2) R r + dmu2,  rhs3 = R r + dmu3
struct FeasibilityVerdict {
    double lhs;
    double rhs1, rhs2, rhs3;
    bool cond1, cond2, cond3;
    bool feasible;  ///< conjunction of the three conditions
};

/// Options for the minimal-amplitude search.
struct AmplitudeSearchOptions {
    double bracket_hi = 0.0;      ///< 0 = auto: 0.1 * min(r, R)
    double tol = 1e-9;            ///< bisection tolerance on the amplitude (m)
    double safety_factor = 1.12;  ///< multiplier for the recommended amplitude
};

/// Result of the minimal-amplitude search.
struct AmplitudeDesign {
    double minimal;           ///< smallest feasible amplitude (m); 0 if feasible without wave
    double recommended;       ///< minimal * safety_factor (0 stays 0)
    int binding_condition;    ///< 1..3: condition with least slack at the minimal amplitude; 0 when minimal == 0
    bool feasible_without_wave;
};

/// Global minimum of the coupling inertia M12 over one configuration period.
struct CouplingScan {
    double min_coupling;  ///< min M12 (kg m^2)
    double argmin_zeta;   ///< (rad), located to ~1e-9
};

/// Grid of the coupling margin over (swept rotor radius, configuration angle).
/// margin and singular are row-major: index = i_param * zeta_values.size() + j.
struct RegionMap {
    std::vector<double> param_values;   ///< swept rotor radius values (m)
    std::vector<double> zeta_values;    ///< configuration angles (rad)
    std::vector<double> margin;         ///< M12 / m_c per cell (m^2)
    std::vector<std::uint8_t> singular; ///< margin <= 0
};

/// Pointwise singularity condition at a state (margin > 0 keeps the inverse
/// dynamics regular).
CouplingCheck coupling_condition(const SystemState& state, const WaveParams& wave,
                                 const GeometricParams& geom);

/// Singular band of the classic mass-point model at fixed carrier angle:
/// { gamma : cos(gamma + theta) >= r/R }.
SingularBand classic_masspoint_region(const GeometricParams& geom, double theta);

/// Rotor-inertia threshold m_c r (R - r); a classic model with I_c above it
/// is singularity-free.
double classic_inertia_threshold(const GeometricParams& geom);

/// Minimum shifts for the wave-design inequalities. Requires frequency > 0.
DeltaMu delta_mu(const WaveParams& wave, const GeometricParams& geom);

/// Evaluate the three wave-design inequalities. Throws AssumptionViolated
/// when amplitude > 0 and frequency <= 2; amplitude == 0 is evaluated as the
/// classic limit with all shifts zero.
FeasibilityVerdict theorem_feasible(const WaveParams& wave, const GeometricParams& geom);

/// Bisection for the smallest feasible amplitude at fixed (n, eps).
/// Returns 0 when the geometry is feasible without a wave. Throws
/// NoFeasibleAmplitude when the bracket's upper end is infeasible, and
/// AssumptionViolated when n <= 2.
AmplitudeDesign design_wave_amplitude(double frequency, double phase,
                                      const GeometricParams& geom,
                                      const AmplitudeSearchOptions& opts = {});

/// Brute-force minimum of M12 over zeta in [0, 2 pi): dense grid followed by
/// golden-section refinement of every coarse local minimum.
CouplingScan min_coupling_scan(const WaveParams& wave, const GeometricParams& geom,
                               std::size_t grid = 4096);

/// Coupling-margin map over a sweep of the rotor radius at fixed theta,
/// zeta spanning [0, 2 pi).
RegionMap region_map(const WaveParams& wave, const GeometricParams& geom,
                     double param_min, double param_max, std::size_t param_count,
                     double theta, std::size_t zeta_count);

}  // namespace rollsing
