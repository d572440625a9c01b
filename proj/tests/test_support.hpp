#pragma once

#include <cmath>
#include <random>

#include "rollsing/params.hpp"

namespace rollsing::test {

// Reference geometry used across the suite: the mass-point carrier from the
// bundled demo scenario (explicit carrier inertia, zero rotor inertia).
inline GeometricParams demo_geom() {
    GeometricParams g;
    g.rotor_mass = 0.4;
    g.carrier_mass = 1.0;
    g.carrier_radius = 0.145;
    g.rotor_radius = 0.131;
    g.gravity = 9.8;
    g.carrier_inertia = 0.0140;
    g.rotor_inertia = 0.0;
    return g;
}

inline WaveParams demo_wave() { return {0.0055, 10.0, 0.0}; }
inline WaveParams no_wave() { return {0.0, 0.0, 0.0}; }

// Deterministic generators for property tests.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    SystemState state(double angle_span = 12.0, double rate_span = 3.0) {
        SystemState s;
        s.theta = uniform(-angle_span, angle_span);
        s.gamma = uniform(-angle_span, angle_span);
        s.theta_dot = uniform(-rate_span, rate_span);
        s.gamma_dot = uniform(-rate_span, rate_span);
        return s;
    }

    // Random geometry scaled around the demo values, always valid (r < R).
    GeometricParams geom(bool random_rotor_inertia = true) {
        const double length_scale = uniform(0.5, 2.0);
        const double mass_scale = uniform(0.5, 2.0);
        GeometricParams g;
        g.carrier_radius = 0.145 * length_scale;
        g.rotor_radius = g.carrier_radius * uniform(0.2, 0.95);
        g.rotor_mass = 0.4 * mass_scale;
        g.carrier_mass = 1.0 * mass_scale;
        g.gravity = 9.8;
        g.carrier_inertia = 2.0 * g.carrier_mass * g.carrier_radius * g.carrier_radius / 3.0;
        g.rotor_inertia = random_rotor_inertia
                              ? uniform(0.0, 0.01) * length_scale * length_scale * mass_scale
                              : 0.0;
        return g;
    }

    // Random wave valid for the geometry (small amplitude, frequency > 2).
    WaveParams wave(const GeometricParams& g, bool allow_off = true) {
        WaveParams w;
        if (allow_off && uniform(0.0, 1.0) < 0.25) return {0.0, 0.0, 0.0};
        w.amplitude = uniform(0.0, 0.099) * std::min(g.rotor_radius, g.carrier_radius);
        w.frequency = uniform(2.5, 14.0);
        w.phase = uniform(-6.3, 6.3);
        return w;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace rollsing::test
