#pragma once

#include <stdexcept>
#include <string>

namespace rollsing {

/// Inertia matrix numerically degenerate (det below the relative floor).
/// Indicates corrupted parameters rather than a physical configuration.
struct DegenerateInertia : std::runtime_error {
    double det;
    double tol;
    DegenerateInertia(double det_, double tol_)
        : std::runtime_error("inertia matrix degenerate: det=" + std::to_string(det_) +
                             " <= tol=" + std::to_string(tol_)),
          det(det_), tol(tol_) {}
};

/// A theorem assumption was violated (wave amplitude > 0 requires frequency > 2).
struct AssumptionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Amplitude search bracket contains no feasible wave amplitude.
struct NoFeasibleAmplitude : std::runtime_error {
    double bracket_hi;
    explicit NoFeasibleAmplitude(double hi)
        : std::runtime_error("no feasible wave amplitude in [0, " + std::to_string(hi) + "]"),
          bracket_hi(hi) {}
};

/// Rest-to-rest motion specification is invalid (non-positive duration).
struct InvalidMotionSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Inverse dynamics reached the coupling singularity: |M12| at or below the
/// guard, or the coupling term changed sign along a trajectory.
struct SingularityHit : std::runtime_error {
    double time;      ///< trajectory time if known, else NaN
    double zeta;      ///< configuration angle gamma + theta
    double coupling;  ///< M12 value at the hit
    SingularityHit(double time_, double zeta_, double coupling_, const std::string& what_)
        : std::runtime_error(what_), time(time_), zeta(zeta_), coupling(coupling_) {}
};

}  // namespace rollsing
