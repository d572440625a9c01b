#include "rollsing/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rollsing/errors.hpp"

namespace rollsing {

void GeometricParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("geometry: " + msg); };
    if (!(rotor_mass > 0.0)) fail("rotor mass must be positive");
    if (!(carrier_mass > 0.0)) fail("carrier mass must be positive");
    if (!(carrier_radius > 0.0)) fail("carrier radius must be positive");
    if (!(rotor_radius > 0.0)) fail("rotor radius must be positive");
    if (!(gravity > 0.0)) fail("gravity must be positive");
    if (!(carrier_inertia >= 0.0)) fail("carrier inertia must be non-negative");
    if (!(rotor_inertia >= 0.0)) fail("rotor inertia must be non-negative");
    if (!(rotor_radius < carrier_radius))
        fail("rotor radius must be smaller than carrier radius");
    for (double v : {rotor_mass, carrier_mass, carrier_radius, rotor_radius, gravity,
                     carrier_inertia, rotor_inertia})
        if (!std::isfinite(v)) fail("all parameters must be finite");
}

void WaveParams::validate(const GeometricParams& geom, bool strict,
                          std::vector<std::string>* warnings) const {
    if (!std::isfinite(amplitude) || !std::isfinite(frequency) || !std::isfinite(phase))
        throw std::invalid_argument("wave: parameters must be finite");
    if (amplitude < 0.0) throw std::invalid_argument("wave: amplitude must be non-negative");
    if (amplitude > 0.0) {
        if (!(frequency > 2.0))
            throw AssumptionViolated("wave: amplitude > 0 requires frequency > 2");
        const double cap = 0.1 * std::min(geom.rotor_radius, geom.carrier_radius);
        if (amplitude >= cap) {
            const std::string msg = "wave: amplitude " + std::to_string(amplitude) +
                                    " breaks the small-amplitude assumption (cap " +
                                    std::to_string(cap) + ")";
            if (strict) throw std::invalid_argument(msg);
            if (warnings) warnings->push_back(msg);
        }
        if (warnings && frequency != std::floor(frequency))
            warnings->push_back("wave: non-integer frequency; wave is not periodic over one revolution");
    }
}

MuTerms mu_terms(double zeta, const WaveParams& wave, const GeometricParams& geom) {
    const double a = wave.amplitude;
    const double n = wave.frequency;
    const double r = geom.rotor_radius;

    const double phase = n * zeta + wave.phase;
    const double sn = std::sin(phase);
    const double cn = std::cos(phase);
    const double s = std::sin(zeta);
    const double c = std::cos(zeta);

    MuTerms mu;
    mu.mu1a = a * n * cn;
    mu.mu1b = r + a * sn;
    mu.mu1 = mu.mu1a * s + mu.mu1b * c;
    mu.mu2 = mu.mu1a * mu.mu1a + mu.mu1b * mu.mu1b;
    mu.mu3 = -a * n * n * sn * s + 2.0 * mu.mu1a * c - mu.mu1b * s;
    mu.mu4 = -a * a * n * n * n * sn * cn + mu.mu1a * mu.mu1b;
    mu.mu5 = mu.mu1a * (1.0 - c) + mu.mu1b * s;
    return mu;
}

DynamicsTerms dynamics_terms(const SystemState& state, const WaveParams& wave,
                             const GeometricParams& geom) {
    const MuTerms mu = mu_terms(state.zeta(), wave, geom);
    const double mc = geom.rotor_mass;
    const double R = geom.carrier_radius;
    const double zd = state.zeta_dot();
    const double zd2 = zd * zd;

    DynamicsTerms d;
    d.M11 = geom.rotor_inertia + geom.carrier_mass * R * R + geom.carrier_inertia +
            mc * R * R - 2.0 * mc * R * mu.mu1 + mc * mu.mu2;
    d.M12 = geom.rotor_inertia - mc * R * mu.mu1 + mc * mu.mu2;
    d.M22 = geom.rotor_inertia + mc * mu.mu2;
    d.N1 = -mc * R * zd2 * mu.mu3 + mc * zd2 * mu.mu4;
    d.N2 = mc * zd2 * mu.mu4;
    d.G1 = d.G2 = mc * geom.gravity * mu.mu5;
    return d;
}

double trajectory_deviation(double zeta, const WaveParams& wave) {
    return wave.amplitude * std::sin(wave.frequency * zeta + wave.phase);
}

MassPointState mass_trajectory_point(const SystemState& state, const WaveParams& wave,
                                     const GeometricParams& geom) {
    const double zeta = state.zeta();
    const double zd = state.zeta_dot();
    const double R = geom.carrier_radius;

    const double phase = wave.frequency * zeta + wave.phase;
    const double w = geom.rotor_radius + wave.amplitude * std::sin(phase);    // radial offset
    const double wp = wave.amplitude * wave.frequency * std::cos(phase);      // d(w)/d(zeta)
    const double s = std::sin(zeta);
    const double c = std::cos(zeta);

    MassPointState p;
    p.y = R * state.theta - w * s;
    p.z = R - w * c;
    p.vy = R * state.theta_dot - zd * (wp * s + w * c);
    p.vz = -zd * (wp * c - w * s);
    return p;
}

BodyKinematics body_kinematics(const SystemState& state, const GeometricParams& geom) {
    return {state.theta_dot, geom.carrier_radius * state.theta_dot, state.zeta_dot()};
}

EnergyBreakdown total_energy(const SystemState& state, const WaveParams& wave,
                             const GeometricParams& geom) {
    const double zeta = state.zeta();
    const double R = geom.carrier_radius;

    // Rotor world-velocity components from the time derivative of the wavy
    // trajectory; equivalent to the quadratic form in M(q).
    const MassPointState p = mass_trajectory_point(state, wave, geom);

    EnergyBreakdown e;
    e.kinetic = 0.5 * (geom.carrier_mass * R * R + geom.carrier_inertia) *
                    state.theta_dot * state.theta_dot +
                0.5 * geom.rotor_inertia * state.zeta_dot() * state.zeta_dot() +
                0.5 * geom.rotor_mass * (p.vy * p.vy + p.vz * p.vz);

    const double w = geom.rotor_radius + trajectory_deviation(zeta, wave);
    e.potential = geom.rotor_mass * geom.gravity * w * (1.0 - std::cos(zeta));
    return e;
}

Acceleration forward_dynamics(const SystemState& state, double tau_gamma,
                              const WaveParams& wave, const GeometricParams& geom) {
    const DynamicsTerms d = dynamics_terms(state, wave, geom);
    const double det = d.M11 * d.M22 - d.M12 * d.M12;
    const double tol_det = 1e-12 * d.M11 * d.M22;
    if (!(det > tol_det)) throw DegenerateInertia(det, tol_det);

    const double b1 = -d.N1 - d.G1;
    const double b2 = tau_gamma - d.N2 - d.G2;
    return {(b1 * d.M22 - b2 * d.M12) / det, (d.M11 * b2 - d.M12 * b1) / det};
}

}  // namespace rollsing
