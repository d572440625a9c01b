#pragma once

namespace rollsing {

/// Rest-to-rest motion: reach final_angle after duration seconds with zero
/// boundary velocity and acceleration.
struct RestToRestSpec {
    double final_angle;  ///< k (rad)
    double duration;     ///< T (s), must be positive
};

struct ProfilePoint {
    double theta, theta_dot, theta_ddot;
};

/// Seventh-degree rest-to-rest polynomial
///   theta(t) = k (-20 (t/T)^7 + 70 (t/T)^6 - 84 (t/T)^5 + 35 (t/T)^4)
/// with exact analytic derivatives. Times outside [0, T] clamp to the
/// boundary states, so a simulation may overrun T by one integrator step.
/// Throws InvalidMotionSpec when duration <= 0.
ProfilePoint beta_profile(double t, const RestToRestSpec& spec);

}  // namespace rollsing
