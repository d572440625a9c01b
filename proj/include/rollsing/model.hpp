#pragma once

#include "rollsing/params.hpp"

namespace rollsing {

/// The seven trigonometric building blocks of the equations of motion,
/// evaluated at a configuration angle zeta = gamma + theta.
///
/// mu1a and mu1b are the two components of mu1:
///   mu1a = a n cos(n zeta + eps)
///   mu1b = r + a sin(n zeta + eps)
///   mu1  = mu1a sin(zeta) + mu1b cos(zeta)
///   mu2  = mu1a^2 + mu1b^2
/// mu3 = d(mu1)/d(zeta) and mu4 = d(mu2)/d(zeta) / 2 drive the velocity
/// terms; mu5 = d/d(zeta) of the potential height drives gravity.
struct MuTerms {
    double mu1a, mu1b, mu1, mu2, mu3, mu4, mu5;
};

/// Inertia, velocity and gravity terms of M(q) qdd + h(q, qd) = [0, tau]^T.
/// The inertia matrix is symmetric; M12 doubles as M21.
struct DynamicsTerms {
    double M11, M12, M22;  ///< inertia entries (kg m^2)
    double N1, N2;         ///< velocity-dependent terms (N m)
    double G1, G2;         ///< gravity terms, G1 == G2 (N m)
};

/// Rotor position and velocity in the reference (world) frame.
/// The carrier center sits at (y, z) = (R theta, R).
struct MassPointState {
    double y, z;    ///< (m)
    double vy, vz;  ///< (m/s)
};

/// Carrier and rotor rates from the rolling constraint.
struct BodyKinematics {
    double carrier_omega;   ///< theta_dot (rad/s)
    double carrier_speed;   ///< R theta_dot (m/s)
    double rotor_omega;     ///< gamma_dot + theta_dot (rad/s)
};

/// Kinetic/potential split of the mechanical energy.
struct EnergyBreakdown {
    double kinetic;    ///< (J)
    double potential;  ///< (J), zero at the rest configuration zeta = 0
    double total() const { return kinetic + potential; }
};

/// Generalized accelerations.
struct Acceleration {
    double theta_ddot, gamma_ddot;  ///< (rad/s^2)
};

/// Evaluate all mu terms at the given configuration angle.
MuTerms mu_terms(double zeta, const WaveParams& wave, const GeometricParams& geom);

/// Evaluate the dynamics terms at a state. The velocity terms carry the
/// squared total rate (gamma_dot + theta_dot)^2.
DynamicsTerms dynamics_terms(const SystemState& state, const WaveParams& wave,
                             const GeometricParams& geom);

/// Deviation of the wavy rotor path from the nominal circle of radius r:
/// a sin(n zeta + eps). Magnitude never exceeds the amplitude.
double trajectory_deviation(double zeta, const WaveParams& wave);

/// World-frame rotor position and velocity.
MassPointState mass_trajectory_point(const SystemState& state, const WaveParams& wave,
                                     const GeometricParams& geom);

/// Rolling-constraint rates: omega_b = theta_dot, V_b = R theta_dot,
/// omega_c = gamma_dot + theta_dot.
BodyKinematics body_kinematics(const SystemState& state, const GeometricParams& geom);

/// Mechanical energy. Kinetic energy is assembled from the rotor's world
/// velocity components; potential is m_c g (r + a sin(n zeta + eps))(1 - cos zeta),
/// the datum being the rest configuration zeta = 0.
EnergyBreakdown total_energy(const SystemState& state, const WaveParams& wave,
                             const GeometricParams& geom);

/// Solve the 2x2 system M qdd = [0 - N1 - G1, tau - N2 - G2]^T.
/// Throws DegenerateInertia when det(M) <= 1e-12 * M11 * M22.
Acceleration forward_dynamics(const SystemState& state, double tau_gamma,
                              const WaveParams& wave, const GeometricParams& geom);

}  // namespace rollsing
