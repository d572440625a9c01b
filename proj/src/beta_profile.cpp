#include "rollsing/beta_profile.hpp"

#include <cmath>

#include "rollsing/errors.hpp"

namespace rollsing {

ProfilePoint beta_profile(double t, const RestToRestSpec& spec) {
    if (!(spec.duration > 0.0))
        throw InvalidMotionSpec("rest-to-rest profile requires a positive duration");
    if (!std::isfinite(spec.final_angle))
        throw InvalidMotionSpec("rest-to-rest profile requires a finite final angle");

    const double k = spec.final_angle;
    const double T = spec.duration;

    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= T) return {k, 0.0, 0.0};

    const double s = t / T;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double one_m = 1.0 - s;

    ProfilePoint p;
    p.theta = k * s3 * s * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
    // theta_dot = (140 k / T) s^3 (1-s)^3, theta_ddot = (420 k / T^2) s^2 (1-s)^2 (1-2s)
    p.theta_dot = (140.0 * k / T) * s3 * one_m * one_m * one_m;
    p.theta_ddot = (420.0 * k / (T * T)) * s2 * one_m * one_m * (1.0 - 2.0 * s);
    return p;
}

}  // namespace rollsing
