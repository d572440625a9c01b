#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace rollsing {

/// Geometry and inertia of the carrier/rotor system.
///
/// The carrier is a passive spherical shell of radius `carrier_radius` rolling
/// along a line; the rotor is an internal mass circulating at nominal radius
/// `rotor_radius` about the carrier center, optionally with an attached
/// inertia `rotor_inertia` (pendulum rod, entrained fluid, ...).
struct GeometricParams {
    double rotor_mass = 0.0;      ///< m_c (kg)
    double carrier_mass = 0.0;    ///< M_b (kg)
    double carrier_radius = 0.0;  ///< R (m)
    double rotor_radius = 0.0;    ///< r (m)
    double gravity = 9.8;         ///< g (m/s^2)
    double carrier_inertia = 0.0; ///< I_b (kg m^2)
    double rotor_inertia = 0.0;   ///< I_c (kg m^2)

    /// Construct with the carrier inertia of a uniform spherical shell,
    /// I_b = 2 M_b R^2 / 3.
    static GeometricParams consistent_carrier(double rotor_mass, double carrier_mass,
                                              double carrier_radius, double rotor_radius,
                                              double gravity, double rotor_inertia = 0.0) {
        GeometricParams p;
        p.rotor_mass = rotor_mass;
        p.carrier_mass = carrier_mass;
        p.carrier_radius = carrier_radius;
        p.rotor_radius = rotor_radius;
        p.gravity = gravity;
        p.carrier_inertia = 2.0 * carrier_mass * carrier_radius * carrier_radius / 3.0;
        p.rotor_inertia = rotor_inertia;
        return p;
    }

    /// True when carrier_inertia matches the uniform-shell value to rel_tol.
    bool carrier_inertia_consistent(double rel_tol = 1e-12) const {
        const double ref = 2.0 * carrier_mass * carrier_radius * carrier_radius / 3.0;
        return std::abs(carrier_inertia - ref) <= rel_tol * std::abs(ref);
    }

    /// Throws std::invalid_argument on any violated invariant:
    /// positive masses, radii and gravity, non-negative inertias, r < R.
    void validate() const;
};

/// Parameters of the sine wave superposed on the rotor's circular path.
/// amplitude == 0 recovers the classic circular model.
struct WaveParams {
    double amplitude = 0.0;  ///< a (m)
    double frequency = 0.0;  ///< n, wave count per rotor revolution
    double phase = 0.0;      ///< epsilon (rad)

    /// Hard checks (throws) plus advisory warnings appended to `warnings`:
    ///  - amplitude must be finite and >= 0
    ///  - amplitude > 0 requires frequency > 2 (throws AssumptionViolated)
    ///  - strict mode rejects amplitude >= 0.1 * min(r, R); permissive mode
    ///    only warns (the small-amplitude assumption is advisory)
    ///  - non-integer frequency warns (wave not periodic over one revolution)
    void validate(const GeometricParams& geom, bool strict,
                  std::vector<std::string>* warnings = nullptr) const;
};

/// Generalized coordinates and rates. Angles are stored unwrapped; the
/// configuration angle zeta = gamma + theta is always derived, never stored.
struct SystemState {
    double theta = 0.0;      ///< carrier roll angle (rad)
    double gamma = 0.0;      ///< rotor angle relative to the carrier (rad)
    double theta_dot = 0.0;  ///< (rad/s)
    double gamma_dot = 0.0;  ///< (rad/s)

    double zeta() const { return gamma + theta; }
    double zeta_dot() const { return gamma_dot + theta_dot; }

    bool finite() const {
        return std::isfinite(theta) && std::isfinite(gamma) &&
               std::isfinite(theta_dot) && std::isfinite(gamma_dot);
    }
};

}  // namespace rollsing
