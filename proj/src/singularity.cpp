#include "rollsing/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rollsing/errors.hpp"
#include "rollsing/model.hpp"

namespace rollsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double angle) {
    double a = std::fmod(angle + std::numbers::pi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - std::numbers::pi;
}

// Golden-section minimization of f over [lo, hi] to an abscissa tolerance.
template <typename F>
double golden_min(F&& f, double lo, double hi, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > xtol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

bool SingularBand::contains(double gamma) const {
    if (empty) return false;
    return std::abs(wrap_pi(gamma - center)) <= half_width;
}

CouplingCheck coupling_condition(const SystemState& state, const WaveParams& wave,
                                 const GeometricParams& geom) {
    const double zeta = state.zeta();
    const MuTerms mu = mu_terms(zeta, wave, geom);
    const double margin = mu.mu1a * mu.mu1a + mu.mu1b * mu.mu1b +
                          geom.rotor_inertia / geom.rotor_mass -
                          geom.carrier_radius * (mu.mu1a * std::sin(zeta) + mu.mu1b * std::cos(zeta));
    return {margin > 0.0, margin};
}

SingularBand classic_masspoint_region(const GeometricParams& geom, double theta) {
    const double ratio = geom.rotor_radius / geom.carrier_radius;
    SingularBand band;
    band.center = wrap_pi(-theta);
    if (ratio > 1.0) {
        band.empty = true;
        band.half_width = 0.0;
    } else {
        band.empty = false;
        band.half_width = std::acos(std::min(ratio, 1.0));
    }
    return band;
}

double classic_inertia_threshold(const GeometricParams& geom) {
    return geom.rotor_mass * geom.rotor_radius * (geom.carrier_radius - geom.rotor_radius);
}

DeltaMu delta_mu(const WaveParams& wave, const GeometricParams& geom) {
    if (!(wave.frequency > 0.0))
        throw std::invalid_argument("delta_mu requires a positive wave frequency");
    const double a = wave.amplitude;
    const double n = wave.frequency;
    const double r = geom.rotor_radius;
    const double R = geom.carrier_radius;
    const double sqrt2 = std::numbers::sqrt2;

    DeltaMu d;
    d.gamma1 = std::atan(-2.0 * r / (R * n));
    d.gamma2 = std::atan((R - 2.0 * sqrt2 * r) / (R * n));
    d.dmu1 = a * std::abs(2.0 * r * std::sin(d.gamma1) - R * n * std::cos(d.gamma1));
    d.dmu2 = (sqrt2 * a / 2.0) *
             std::abs((2.0 * sqrt2 * r - R) * std::sin(d.gamma2) - R * n * std::cos(d.gamma2));
    d.dmu3 = a * std::abs(2.0 * r - R);
    return d;
}

FeasibilityVerdict theorem_feasible(const WaveParams& wave, const GeometricParams& geom) {
    const double a = wave.amplitude;
    const double n = wave.frequency;
    if (a > 0.0 && !(n > 2.0))
        throw AssumptionViolated("wave design requires frequency > 2 for a positive amplitude");

    const double r = geom.rotor_radius;
    const double R = geom.carrier_radius;

    FeasibilityVerdict v;
    v.lhs = r * r +
            0.5 * a * a * (n * n + (n * n - 1.0) * std::cos(2.0 * wave.phase) + 1.0) +
            geom.rotor_inertia / geom.rotor_mass;

    // amplitude 0 is the classic limit: all shifts vanish regardless of n
    DeltaMu d{0.0, 0.0, 0.0, 0.0, 0.0};
    if (a > 0.0) d = delta_mu(wave, geom);

    v.rhs1 = d.dmu1;
    v.rhs2 = std::numbers::sqrt2 / 2.0 * R * r + d.dmu2;
    v.rhs3 = R * r + d.dmu3;
    v.cond1 = v.lhs > v.rhs1;
    v.cond2 = v.lhs > v.rhs2;
    v.cond3 = v.lhs > v.rhs3;
    v.feasible = v.cond1 && v.cond2 && v.cond3;
    return v;
}

AmplitudeDesign design_wave_amplitude(double frequency, double phase,
                                      const GeometricParams& geom,
                                      const AmplitudeSearchOptions& opts) {
    if (!(frequency > 2.0))
        throw AssumptionViolated("wave design requires frequency > 2");

    const double hi_default = 0.1 * std::min(geom.rotor_radius, geom.carrier_radius);
    const double bracket_hi = opts.bracket_hi > 0.0 ? opts.bracket_hi : hi_default;

    auto verdict_at = [&](double a) {
        return theorem_feasible({a, frequency, phase}, geom);
    };
    auto feasible_at = [&](double a) { return verdict_at(a).feasible; };

    AmplitudeDesign out;
    out.feasible_without_wave = feasible_at(0.0);
    if (out.feasible_without_wave) {
        out.minimal = 0.0;
        out.recommended = 0.0;
        out.binding_condition = 0;
        return out;
    }
    if (!feasible_at(bracket_hi)) throw NoFeasibleAmplitude(bracket_hi);

    double lo = 0.0, hi = bracket_hi;
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.minimal = hi;
    out.recommended = hi * opts.safety_factor;

    const FeasibilityVerdict v = verdict_at(hi);
    const double slack1 = v.lhs - v.rhs1;
    const double slack2 = v.lhs - v.rhs2;
    const double slack3 = v.lhs - v.rhs3;
    out.binding_condition = 1;
    double best = slack1;
    if (slack2 < best) {
        best = slack2;
        out.binding_condition = 2;
    }
    if (slack3 < best) out.binding_condition = 3;
    return out;
}

CouplingScan min_coupling_scan(const WaveParams& wave, const GeometricParams& geom,
                               std::size_t grid) {
    grid = std::max<std::size_t>(grid, 1000);

    auto coupling = [&](double zeta) {
        const MuTerms mu = mu_terms(zeta, wave, geom);
        return geom.rotor_inertia - geom.rotor_mass * geom.carrier_radius * mu.mu1 +
               geom.rotor_mass * mu.mu2;
    };

    std::vector<double> vals(grid);
    const double dz = kTwoPi / static_cast<double>(grid);
    for (std::size_t i = 0; i < grid; ++i) vals[i] = coupling(static_cast<double>(i) * dz);

    CouplingScan best{vals[0], 0.0};
    // refine every coarse local minimum (cyclic neighbors)
    for (std::size_t i = 0; i < grid; ++i) {
        const double prev = vals[(i + grid - 1) % grid];
        const double next = vals[(i + 1) % grid];
        if (vals[i] <= prev && vals[i] <= next) {
            const double z = static_cast<double>(i) * dz;
            const double zr = golden_min(coupling, z - dz, z + dz, 1e-10);
            const double vr = coupling(zr);
            if (vr < best.min_coupling) {
                best.min_coupling = vr;
                best.argmin_zeta = zr < 0.0 ? zr + kTwoPi : zr;
            }
        }
    }
    return best;
}

RegionMap region_map(const WaveParams& wave, const GeometricParams& geom,
                     double param_min, double param_max, std::size_t param_count,
                     double theta, std::size_t zeta_count) {
    if (!(param_min > 0.0) || !(param_max >= param_min))
        throw std::invalid_argument("region_map requires a strictly positive sweep range");
    if (param_count < 1 || zeta_count < 1)
        throw std::invalid_argument("region_map requires non-empty grid dimensions");
    (void)theta;  // the margin depends on gamma and theta only through zeta

    RegionMap map;
    map.param_values.resize(param_count);
    map.zeta_values.resize(zeta_count);
    map.margin.resize(param_count * zeta_count);
    map.singular.resize(param_count * zeta_count);

    for (std::size_t i = 0; i < param_count; ++i)
        map.param_values[i] =
            param_count == 1
                ? param_min
                : param_min + (param_max - param_min) * static_cast<double>(i) /
                                  static_cast<double>(param_count - 1);
    for (std::size_t j = 0; j < zeta_count; ++j)
        map.zeta_values[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(zeta_count);

    for (std::size_t i = 0; i < param_count; ++i) {
        GeometricParams g = geom;
        g.rotor_radius = map.param_values[i];
        for (std::size_t j = 0; j < zeta_count; ++j) {
            SystemState st;
            st.theta = theta;
            st.gamma = map.zeta_values[j] - theta;
            const CouplingCheck c = coupling_condition(st, wave, g);
            map.margin[i * zeta_count + j] = c.margin;
            map.singular[i * zeta_count + j] = c.margin <= 0.0 ? 1 : 0;
        }
    }
    return map;
}

}  // namespace rollsing
