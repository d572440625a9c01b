#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rollsing/errors.hpp"
#include "rollsing/simulate.hpp"
#include "test_support.hpp"

using namespace rollsing;
using rollsing::test::Rng;
using rollsing::test::demo_geom;
using rollsing::test::demo_wave;
using rollsing::test::no_wave;

namespace {

constexpr double kPi = std::numbers::pi;

ScenarioConfig demo_scenario() {
    ScenarioConfig cfg;
    cfg.geom = demo_geom();
    cfg.wave = demo_wave();
    cfg.profile = {kPi / 2.0, 6.0};
    return cfg;
}

// sign reversals of a sampled signal, ignoring values below the noise floor
int sign_reversals(const std::vector<double>& v, double floor) {
    int reversals = 0;
    int prev = 0;
    for (const double x : v) {
        if (std::abs(x) <= floor) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++reversals;
        prev = s;
    }
    return reversals;
}

}  // namespace

TEST_CASE("inverse step at reference states") {
    const GeometricParams geom = demo_geom();

    SUBCASE("unit carrier acceleration from rest with the demo wave") {
        const InverseStep inv = inverse_step(SystemState{}, 1.0, demo_wave(), geom);
        // hand-evaluated inertia entries drive the expectations
        const double M11 = 0.0363134, M12 = 0.0004764, M22 = 0.0080744;
        CHECK(inv.terms.M11 == doctest::Approx(M11).epsilon(1e-10));
        CHECK(inv.terms.M12 == doctest::Approx(M12).epsilon(1e-10));
        CHECK(inv.gamma_ddot == doctest::Approx(-M11 / M12).epsilon(1e-9));
        CHECK(inv.gamma_ddot == doctest::Approx(-76.2246).epsilon(1e-5));
        CHECK(inv.tau_gamma == doctest::Approx(M12 - M22 * (M11 / M12)).epsilon(1e-9));
        CHECK(inv.tau_gamma == doctest::Approx(-0.6150).epsilon(1e-4));
        CHECK_FALSE(inv.coupling_negative);
    }

    SUBCASE("equilibrium commands nothing") {
        const InverseStep inv = inverse_step(SystemState{}, 0.0, demo_wave(), geom);
        CHECK(inv.gamma_ddot == 0.0);
        CHECK(inv.tau_gamma == 0.0);
    }

    SUBCASE("classic mass-point at rest: regular but negative coupling") {
        const InverseStep inv = inverse_step(SystemState{}, 1.0, no_wave(), geom);
        CHECK(inv.coupling_negative);
        CHECK(inv.terms.M12 == doctest::Approx(-0.0007336).epsilon(1e-10));
        CHECK(std::isfinite(inv.gamma_ddot));
    }

    SUBCASE("coupling inside the guard raises the singularity error") {
        // choose zeta on the classic singular-band boundary: M12 = 0 there
        const GeometricParams g = demo_geom();
        SystemState s;
        s.gamma = std::acos(g.rotor_radius / g.carrier_radius);
        CHECK_THROWS_AS(inverse_step(s, 1.0, no_wave(), g, 1e-4), SingularityHit);
    }
}

TEST_CASE("reduced inverse form") {
    const GeometricParams geom = demo_geom();

    SUBCASE("hand-evaluated reduced inertia") {
        const ReducedInverse red = reduced_inverse(SystemState{}, 1.0, demo_wave(), geom);
        CHECK(red.M_bar == doctest::Approx(0.61499).epsilon(1e-4));
        CHECK(red.tau_bar == doctest::Approx(0.6150).epsilon(1e-4));
        CHECK(red.N_bar == 0.0);
        CHECK(red.G_bar == 0.0);
    }

    SUBCASE("zero command at equilibrium") {
        CHECK(reduced_inverse(SystemState{}, 0.0, demo_wave(), geom).tau_bar == 0.0);
    }

    SUBCASE("reduced torque is the negative of the direct torque everywhere") {
        Rng rng(88);
        for (int k = 0; k < 20000; ++k) {
            const GeometricParams g = rng.geom();
            const WaveParams w = rng.wave(g);
            const SystemState s = rng.state();
            const double thdd = rng.uniform(-3.0, 3.0);
            const DynamicsTerms d = dynamics_terms(s, w, g);
            if (std::abs(d.M12) <= 1e-6) continue;  // skip hairline couplings
            const InverseStep inv = inverse_step(s, thdd, w, g, 1e-8);
            const ReducedInverse red = reduced_inverse(s, thdd, w, g, 1e-8);
            REQUIRE(std::abs(red.tau_bar + inv.tau_gamma) <=
                    1e-10 * std::max(1.0, std::abs(inv.tau_gamma)));
        }
    }
}

TEST_CASE("demo scenario simulation") {
    const ScenarioConfig cfg = demo_scenario();
    const SimulationTrace trace = simulate_inverse(cfg);
    const SimulationSummary& sum = trace.summary;

    SUBCASE("completes the horizon without a singularity") {
        REQUIRE(sum.completed);
        REQUIRE_FALSE(sum.singularity_hit);
        CHECK(sum.integrator_status == IntegratorStatus::Ok);
        CHECK(trace.samples.size() == 601);
        CHECK(trace.samples.back().t == 6.0);
        CHECK(sum.min_abs_M12 > cfg.singularity_guard);
        // the coupling stays in the positive band the wave was designed for
        CHECK(sum.min_abs_M12 > 1e-4);
        CHECK(sum.min_abs_M12 < 1e-3);
        MESSAGE("min |M12| = ", sum.min_abs_M12, " at t = ", sum.min_abs_M12_time);
        MESSAGE("max |tau| = ", sum.max_abs_tau);
    }

    SUBCASE("rest-to-rest terminal state") {
        CHECK(sum.final_theta == doctest::Approx(kPi / 2.0).epsilon(1e-15));
        CHECK(sum.final_theta_dot == 0.0);  // prescribed
        CHECK(std::abs(sum.final_gamma_dot) <= 1e-2);
        CHECK(sum.final_gamma == doctest::Approx(-kPi / 2.0).epsilon(1e-2));
        MESSAGE("gamma_dot(T) = ", sum.final_gamma_dot);
    }

    SUBCASE("prescribed columns equal the profile exactly") {
        for (const SimulationSample& s : trace.samples) {
            const ProfilePoint p = beta_profile(s.t, cfg.profile);
            REQUIRE(s.theta == p.theta);
            REQUIRE(s.theta_dot == p.theta_dot);
            REQUIRE(s.theta_ddot_cmd == p.theta_ddot);
        }
    }

    SUBCASE("two-phase rotor motion: one rate reversal above the noise floor") {
        std::vector<double> gd;
        gd.reserve(trace.samples.size());
        double peak = 0.0;
        for (const SimulationSample& s : trace.samples) {
            gd.push_back(s.gamma_dot);
            peak = std::max(peak, std::abs(s.gamma_dot));
        }
        CHECK(sign_reversals(gd, 1e-3 * peak) == 1);
    }

    SUBCASE("torque sign identity at every sample") {
        for (const SimulationSample& s : trace.samples) {
            SystemState st{s.theta, s.gamma, s.theta_dot, s.gamma_dot};
            const ReducedInverse red =
                reduced_inverse(st, s.theta_ddot_cmd, cfg.wave, cfg.geom);
            REQUIRE(std::abs(red.tau_bar + s.tau_gamma) <= 1e-10);
        }
    }

    SUBCASE("power balance closes at the sampling resolution") {
        const PowerBalance pb = power_balance_residual(trace);
        CHECK(pb.max_abs <= 1e-2);
        CHECK(pb.max_abs == doctest::Approx(sum.max_power_residual));
        MESSAGE("max power residual = ", pb.max_abs, " W");

        // refining the sampling shrinks the finite-difference truncation
        ScenarioConfig fine = cfg;
        fine.sample_dt = 0.001;
        const PowerBalance pb_fine = power_balance_residual(simulate_inverse(fine));
        CHECK(pb_fine.max_abs < pb.max_abs);
        MESSAGE("max power residual at dt = 0.001: ", pb_fine.max_abs, " W");
    }

    SUBCASE("forward round trip reproduces the prescribed motion") {
        const RoundtripReport rt = roundtrip_forward_check(trace, cfg);
        CHECK(rt.status == IntegratorStatus::Ok);
        CHECK(rt.max_theta_dev <= 1e-3);
        MESSAGE("roundtrip deviations: theta ", rt.max_theta_dev, ", gamma ", rt.max_gamma_dev);

        // tightening the tolerances tenfold must not hurt the closure
        ScenarioConfig tight = cfg;
        tight.integrator.rel_tol = tight.integrator.abs_tol = 1e-5;
        const SimulationTrace tt = simulate_inverse(tight);
        const RoundtripReport rt2 = roundtrip_forward_check(tt, tight);
        CHECK(rt2.max_theta_dev <= rt.max_theta_dev * 1.5 + 1e-12);
    }
}

TEST_CASE("zero displacement keeps the system at rest") {
    ScenarioConfig cfg = demo_scenario();
    cfg.profile.final_angle = 0.0;
    const SimulationTrace trace = simulate_inverse(cfg);
    REQUIRE(trace.summary.completed);
    for (const SimulationSample& s : trace.samples) {
        REQUIRE(s.theta == 0.0);
        REQUIRE(s.gamma == 0.0);
        REQUIRE(s.gamma_dot == 0.0);
        REQUIRE(s.tau_gamma == 0.0);
        REQUIRE(s.kinetic == 0.0);
        REQUIRE(s.potential == 0.0);
        REQUIRE(s.power_residual == 0.0);
    }
}

TEST_CASE("classic pendulum with sufficient rotor inertia completes") {
    ScenarioConfig cfg = demo_scenario();
    cfg.wave = no_wave();
    cfg.geom.rotor_inertia = 0.0057;
    const SimulationTrace trace = simulate_inverse(cfg);
    REQUIRE(trace.summary.completed);
    CHECK(trace.summary.min_abs_M12 > 4e-3);  // shifted by the rotor inertia
    CHECK(std::abs(trace.summary.final_gamma_dot) <= 1e-2);
}

TEST_CASE("classic mass-point aborts on the singular band boundary") {
    ScenarioConfig cfg = demo_scenario();
    cfg.wave = no_wave();
    const SimulationTrace trace = simulate_inverse(cfg);
    const SimulationSummary& sum = trace.summary;

    REQUIRE(sum.singularity_hit);
    REQUIRE(sum.singularity.has_value());
    CHECK_FALSE(sum.completed);
    CHECK(sum.singularity->time > 0.0);
    CHECK(sum.singularity->time < 6.0);
    // the hit sits on the boundary cos(zeta) = r / R of the classic band
    CHECK(std::cos(sum.singularity->zeta) ==
          doctest::Approx(0.131 / 0.145).epsilon(1e-3));
    CHECK((sum.singularity->reason == "guard" || sum.singularity->reason == "sign-flip"));
    // partial trace is truncated at the flagged time
    REQUIRE(!trace.samples.empty());
    CHECK(trace.samples.back().t <= sum.singularity->time + 1e-12);
    MESSAGE("abort at t = ", sum.singularity->time, ", zeta = ", sum.singularity->zeta,
            ", reason = ", sum.singularity->reason);
}

TEST_CASE("classic and modified pendulum traces stay close") {
    ScenarioConfig classic = demo_scenario();
    classic.wave = no_wave();
    classic.geom.rotor_inertia = 0.0057;
    ScenarioConfig modified = demo_scenario();
    modified.geom.rotor_inertia = 0.0057;

    const ComparisonReport rep = compare_classic_modified(classic, modified);
    REQUIRE(rep.classic.summary.completed);
    REQUIRE(rep.modified.summary.completed);

    // theta is prescribed identically in both runs
    CHECK(rep.max_dtheta == 0.0);
    CHECK(rep.max_dtheta <= 0.05);
    // the substantive closeness shows in the rotor trajectory
    CHECK(rep.max_dgamma <= 0.05);
    CHECK(rep.rms_dgamma <= rep.max_dgamma);
    MESSAGE("pendulum comparison: max dgamma = ", rep.max_dgamma, ", max dtau = ", rep.max_dtau);

    SUBCASE("identical configurations diverge nowhere") {
        const ComparisonReport same = compare_classic_modified(classic, classic);
        CHECK(same.max_dtheta == 0.0);
        CHECK(same.max_dgamma == 0.0);
        CHECK(same.max_dtau == 0.0);
    }

    SUBCASE("doubling the amplitude grows but does not break the divergence") {
        ScenarioConfig doubled = modified;
        doubled.wave.amplitude = 0.011;
        const ComparisonReport rep2 = compare_classic_modified(classic, doubled);
        REQUIRE(rep2.modified.summary.completed);
        CHECK(rep2.max_dgamma >= rep.max_dgamma);
        CHECK(rep2.max_dgamma <= 0.1);
        MESSAGE("doubled amplitude: max dgamma = ", rep2.max_dgamma);
    }

    SUBCASE("mismatched configurations are rejected") {
        ScenarioConfig other = modified;
        other.geom.rotor_mass = 0.5;
        CHECK_THROWS_AS(compare_classic_modified(classic, other), std::invalid_argument);
        CHECK_THROWS_AS(compare_classic_modified(modified, modified), std::invalid_argument);
    }
}

TEST_CASE("guard soundness over scenario variations") {
    Rng rng(2718);
    for (int k = 0; k < 8; ++k) {
        ScenarioConfig cfg = demo_scenario();
        cfg.profile.final_angle = rng.uniform(-2.0, 2.0);
        cfg.profile.duration = rng.uniform(3.0, 8.0);
        cfg.geom.rotor_inertia = rng.uniform(0.0, 0.006);
        const SimulationTrace trace = simulate_inverse(cfg);
        if (!trace.summary.singularity_hit)
            REQUIRE(trace.summary.min_abs_M12 > cfg.singularity_guard);
    }
}
