#include "rollsing/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rollsing/errors.hpp"

namespace rollsing::io {

using nlohmann::json;

namespace {

constexpr double kHalfPi = 1.5707963267948966;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw std::invalid_argument("config: " + where + " must be a number");
    return j.get<double>();
}

// Recursive merge of `user` onto `base`; keys absent from `base` are typos.
void merge_checked(json& base, const json& user, const std::string& path) {
    if (!user.is_object())
        throw std::invalid_argument("config: expected an object at " + (path.empty() ? "top level" : path));
    for (const auto& [key, value] : user.items()) {
        const std::string here = path.empty() ? key : path + "." + key;
        if (!base.contains(key)) throw std::invalid_argument("config: unknown key " + here);
        if (base[key].is_object() && !base[key].empty())
            merge_checked(base[key], value, here);
        else
            base[key] = value;
    }
}

ScenarioMode parse_mode(const std::string& mode) {
    if (mode == "inverse-feedforward") return ScenarioMode::InverseFeedforward;
    if (mode == "forward-roundtrip") return ScenarioMode::ForwardRoundtrip;
    if (mode == "compare-classic") return ScenarioMode::CompareClassic;
    throw std::invalid_argument("config: unknown mode \"" + mode + "\"");
}

const char* status_name(IntegratorStatus st) {
    switch (st) {
        case IntegratorStatus::Ok: return "ok";
        case IntegratorStatus::StepUnderflow: return "step-underflow";
        case IntegratorStatus::BudgetExceeded: return "budget-exceeded";
        case IntegratorStatus::RhsFailure: return "rhs-failure";
    }
    return "unknown";
}

AmplitudeSearchOptions search_options(const json& cfg) {
    AmplitudeSearchOptions opts;
    opts.bracket_hi = cfg.at("design").at("bracket_hi_m").get<double>();
    opts.tol = cfg.at("design").at("tol_m").get<double>();
    opts.safety_factor = cfg.at("design").at("safety_factor").get<double>();
    if (!(opts.tol > 0.0)) throw std::invalid_argument("config: design.tol_m must be positive");
    return opts;
}

}  // namespace

json default_config_json() {
    return json{
        {"scenario_name", "demo-masspoint"},
        {"geometry",
         {{"rotor_mass_kg", 0.4},
          {"carrier_mass_kg", 1.0},
          {"carrier_radius_m", 0.145},
          {"rotor_radius_m", 0.131},
          {"gravity_m_s2", 9.8},
          {"carrier_inertia_kg_m2", 0.0140},
          {"rotor_inertia_kg_m2", 0.0}}},
        {"wave",
         {{"amplitude_m", 0.0055},
          {"frequency_per_rev", 10.0},
          {"phase_rad", 0.0},
          {"strict_amplitude", true}}},
        {"profile", {{"final_angle_rad", kHalfPi}, {"duration_s", 6.0}}},
        {"integrator",
         {{"rel_tol", 1e-4},
          {"abs_tol", 1e-4},
          {"h_init_s", 0.0},
          {"h_min_s", 1e-12},
          {"h_max_s", 0.0},
          {"max_steps", 1000000}}},
        {"mode", "inverse-feedforward"},
        {"singularity_guard_kg_m2", 1e-8},
        {"sample_dt_s", 0.0},
        {"region_sweep",
         {{"parameter", "rotor_radius_m"},
          {"min_m", 0.05},
          {"max_m", 0.145},
          {"count", 50},
          {"zeta_count", 720},
          {"theta_rad", 0.0}}},
        {"design", {{"bracket_hi_m", 0.0}, {"tol_m", 1e-9}, {"safety_factor", 1.12}}},
    };
}

ResolvedScenario resolve_scenario(const json& config) {
    json resolved = default_config_json();
    merge_checked(resolved, config, "");

    ResolvedScenario s;
    s.resolved_json = resolved;
    s.name = resolved.at("scenario_name").get<std::string>();

    const json& g = resolved.at("geometry");
    s.config.geom.rotor_mass = require_number(g.at("rotor_mass_kg"), "geometry.rotor_mass_kg");
    s.config.geom.carrier_mass = require_number(g.at("carrier_mass_kg"), "geometry.carrier_mass_kg");
    s.config.geom.carrier_radius =
        require_number(g.at("carrier_radius_m"), "geometry.carrier_radius_m");
    s.config.geom.rotor_radius =
        require_number(g.at("rotor_radius_m"), "geometry.rotor_radius_m");
    s.config.geom.gravity = require_number(g.at("gravity_m_s2"), "geometry.gravity_m_s2");
    s.config.geom.carrier_inertia =
        require_number(g.at("carrier_inertia_kg_m2"), "geometry.carrier_inertia_kg_m2");
    s.config.geom.rotor_inertia =
        require_number(g.at("rotor_inertia_kg_m2"), "geometry.rotor_inertia_kg_m2");

    const json& w = resolved.at("wave");
    s.config.wave.amplitude = require_number(w.at("amplitude_m"), "wave.amplitude_m");
    s.config.wave.frequency = require_number(w.at("frequency_per_rev"), "wave.frequency_per_rev");
    s.config.wave.phase = require_number(w.at("phase_rad"), "wave.phase_rad");
    s.config.strict_wave = w.at("strict_amplitude").get<bool>();

    const json& p = resolved.at("profile");
    s.config.profile.final_angle = require_number(p.at("final_angle_rad"), "profile.final_angle_rad");
    s.config.profile.duration = require_number(p.at("duration_s"), "profile.duration_s");
    if (!(s.config.profile.duration > 0.0))
        throw std::invalid_argument("config: profile.duration_s must be positive");

    const json& i = resolved.at("integrator");
    s.config.integrator.rel_tol = require_number(i.at("rel_tol"), "integrator.rel_tol");
    s.config.integrator.abs_tol = require_number(i.at("abs_tol"), "integrator.abs_tol");
    s.config.integrator.h_init = require_number(i.at("h_init_s"), "integrator.h_init_s");
    s.config.integrator.h_min = require_number(i.at("h_min_s"), "integrator.h_min_s");
    s.config.integrator.h_max = require_number(i.at("h_max_s"), "integrator.h_max_s");
    s.config.integrator.max_steps = i.at("max_steps").get<std::size_t>();
    if (!(s.config.integrator.rel_tol > 0.0) || !(s.config.integrator.abs_tol > 0.0))
        throw std::invalid_argument("config: integrator tolerances must be positive");
    if (s.config.integrator.h_min < 0.0 || s.config.integrator.h_init < 0.0 ||
        s.config.integrator.h_max < 0.0)
        throw std::invalid_argument("config: integrator step bounds must be non-negative");
    if (s.config.integrator.h_init > 0.0 && s.config.integrator.h_init < s.config.integrator.h_min)
        throw std::invalid_argument("config: integrator.h_init_s below h_min_s");
    if (s.config.integrator.h_max > 0.0 && s.config.integrator.h_init > s.config.integrator.h_max)
        throw std::invalid_argument("config: integrator.h_init_s above h_max_s");
    if (s.config.integrator.max_steps == 0)
        throw std::invalid_argument("config: integrator.max_steps must be positive");

    s.config.mode = parse_mode(resolved.at("mode").get<std::string>());
    s.config.singularity_guard =
        require_number(resolved.at("singularity_guard_kg_m2"), "singularity_guard_kg_m2");
    if (!(s.config.singularity_guard > 0.0))
        throw std::invalid_argument("config: singularity_guard_kg_m2 must be positive");
    s.config.sample_dt = require_number(resolved.at("sample_dt_s"), "sample_dt_s");
    if (s.config.sample_dt < 0.0)
        throw std::invalid_argument("config: sample_dt_s must be non-negative");

    const json& r = resolved.at("region_sweep");
    if (r.at("parameter").get<std::string>() != "rotor_radius_m")
        throw std::invalid_argument("config: region_sweep.parameter must be rotor_radius_m");
    s.sweep.param_min = require_number(r.at("min_m"), "region_sweep.min_m");
    s.sweep.param_max = require_number(r.at("max_m"), "region_sweep.max_m");
    s.sweep.param_count = r.at("count").get<std::size_t>();
    s.sweep.zeta_count = r.at("zeta_count").get<std::size_t>();
    s.sweep.theta = require_number(r.at("theta_rad"), "region_sweep.theta_rad");

    s.config.geom.validate();
    s.config.wave.validate(s.config.geom, s.config.strict_wave, &s.warnings);
    return s;
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override must look like key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;  // bare strings are allowed unquoted
    }

    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw std::invalid_argument("override has an empty key segment: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string trace_csv(const SimulationTrace& trace) {
    std::string out =
        "t,theta,theta_dot,theta_ddot_cmd,gamma,gamma_dot,gamma_ddot,zeta,tau_gamma,"
        "M12,M_bar,kinetic,potential,power_residual,mass_y,mass_z\n";
    for (const SimulationSample& s : trace.samples) {
        const double cols[16] = {s.t, s.theta, s.theta_dot, s.theta_ddot_cmd,
                                 s.gamma, s.gamma_dot, s.gamma_ddot, s.zeta,
                                 s.tau_gamma, s.M12, s.M_bar, s.kinetic,
                                 s.potential, s.power_residual, s.mass_y, s.mass_z};
        for (int i = 0; i < 16; ++i) {
            out += fmt17(cols[i]);
            out += i == 15 ? '\n' : ',';
        }
    }
    return out;
}

std::string region_csv(const RegionMap& map) {
    std::string out = "param,zeta,margin,singular\n";
    for (std::size_t i = 0; i < map.param_values.size(); ++i)
        for (std::size_t j = 0; j < map.zeta_values.size(); ++j) {
            const std::size_t c = i * map.zeta_values.size() + j;
            out += fmt17(map.param_values[i]);
            out += ',';
            out += fmt17(map.zeta_values[j]);
            out += ',';
            out += fmt17(map.margin[c]);
            out += ',';
            out += map.singular[c] ? '1' : '0';
            out += '\n';
        }
    return out;
}

namespace {

json verdict_json(const FeasibilityVerdict& v) {
    return json{{"lhs_m2", v.lhs},   {"rhs1_m2", v.rhs1},   {"rhs2_m2", v.rhs2},
                {"rhs3_m2", v.rhs3}, {"cond1", v.cond1},    {"cond2", v.cond2},
                {"cond3", v.cond3},  {"feasible", v.feasible}};
}

json scan_json(const CouplingScan& scan) {
    return json{{"min_M12_kg_m2", scan.min_coupling},
                {"argmin_zeta_rad", scan.argmin_zeta},
                {"positive_everywhere", scan.min_coupling > 0.0}};
}

}  // namespace

json summary_json(const ResolvedScenario& scenario, const SimulationTrace& trace) {
    const SimulationSummary& s = trace.summary;
    const ScenarioConfig& cfg = scenario.config;

    json sing = nullptr;
    if (s.singularity) {
        sing = json{{"time_s", s.singularity->time},
                    {"zeta_rad", s.singularity->zeta},
                    {"M12_kg_m2", s.singularity->coupling},
                    {"reason", s.singularity->reason}};
    }

    const FeasibilityVerdict verdict = theorem_feasible(cfg.wave, cfg.geom);
    const CouplingScan scan = min_coupling_scan(cfg.wave, cfg.geom);

    return json{
        {"scenario_name", scenario.name},
        {"tool_version", kToolVersion},
        {"completed", s.completed},
        {"singularity_hit", s.singularity_hit},
        {"singularity", sing},
        {"integrator_status", status_name(s.integrator_status)},
        {"samples", trace.samples.size()},
        {"min_abs_M12_kg_m2", finite_or_null(s.min_abs_M12)},
        {"min_abs_M12_time_s", s.min_abs_M12_time},
        {"max_abs_tau_Nm", s.max_abs_tau},
        {"max_abs_gamma_rad", s.max_abs_gamma},
        {"max_power_residual_W", s.max_power_residual},
        {"final_state",
         {{"t_s", s.final_time},
          {"theta_rad", s.final_theta},
          {"theta_dot_rad_s", s.final_theta_dot},
          {"gamma_rad", s.final_gamma},
          {"gamma_dot_rad_s", s.final_gamma_dot}}},
        {"final_errors",
         {{"theta_vs_target_rad", s.theta_target_error},
          {"gamma_dot_rad_s", std::abs(s.final_gamma_dot)}}},
        {"wave_design", verdict_json(verdict)},
        {"coupling_scan", scan_json(scan)},
        {"theorem_scan_disagreement", (scan.min_coupling > 0.0) != verdict.feasible},
        {"roundtrip", nullptr},
    };
}

json design_report_json(const ResolvedScenario& scenario, double frequency, double phase) {
    const ScenarioConfig& cfg = scenario.config;
    const AmplitudeSearchOptions opts = search_options(scenario.resolved_json);

    json report{{"scenario_name", scenario.name},
                {"tool_version", kToolVersion},
                {"frequency_per_rev", frequency},
                {"phase_rad", phase}};

    const WaveParams config_wave{cfg.wave.amplitude, frequency, phase};
    report["config_amplitude_m"] = cfg.wave.amplitude;
    report["config_amplitude_verdict"] = verdict_json(theorem_feasible(config_wave, cfg.geom));
    if (cfg.wave.amplitude > 0.0) {
        const DeltaMu d = delta_mu(config_wave, cfg.geom);
        report["delta_mu_at_config_amplitude"] = {{"dmu1_m2", d.dmu1},
                                                  {"dmu2_m2", d.dmu2},
                                                  {"dmu3_m2", d.dmu3},
                                                  {"gamma1_rad", d.gamma1},
                                                  {"gamma2_rad", d.gamma2}};
    } else {
        report["delta_mu_at_config_amplitude"] = nullptr;
    }
    report["classic_inertia_threshold_kg_m2"] = classic_inertia_threshold(cfg.geom);

    bool no_feasible = false;
    try {
        const AmplitudeDesign design = design_wave_amplitude(frequency, phase, cfg.geom, opts);
        report["minimal_amplitude_m"] = design.minimal;
        report["recommended_amplitude_m"] = design.recommended;
        report["binding_condition"] = design.binding_condition;
        report["feasible_without_wave"] = design.feasible_without_wave;

        const WaveParams scan_wave{design.minimal > 0.0 ? design.minimal : cfg.wave.amplitude,
                                   frequency, phase};
        const CouplingScan scan = min_coupling_scan(scan_wave, cfg.geom);
        const FeasibilityVerdict v = theorem_feasible(scan_wave, cfg.geom);
        report["scan_amplitude_m"] = scan_wave.amplitude;
        report["coupling_scan"] = scan_json(scan);
        report["theorem_scan_disagreement"] = (scan.min_coupling > 0.0) != v.feasible;
    } catch (const NoFeasibleAmplitude& e) {
        no_feasible = true;
        report["minimal_amplitude_m"] = nullptr;
        report["error"] = e.what();
    }
    report["no_feasible_amplitude"] = no_feasible;
    return report;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path out_dir, std::string scenario_name,
                               json resolved_config)
    : dir_(std::move(out_dir)) {
    std::filesystem::create_directories(dir_);
    manifest_ = json{{"scenario_name", std::move(scenario_name)},
                     {"tool_version", kToolVersion},
                     {"output_dir", dir_.string()},
                     {"config_checksum_fnv1a64", fnv1a64_hex(resolved_config.dump())},
                     {"resolved_config", std::move(resolved_config)},
                     {"artifacts", json::array()}};
}

void ArtifactWriter::write(const std::string& filename, const std::string& bytes) {
    atomic_write(dir_ / filename, bytes);
    manifest_["artifacts"].push_back(json{{"path", filename},
                                          {"bytes", bytes.size()},
                                          {"checksum_fnv1a64", fnv1a64_hex(bytes)}});
}

void ArtifactWriter::finalize() {
    atomic_write(dir_ / "manifest.json", manifest_.dump(2) + "\n");
}

namespace {

int exit_code_for(const SimulationTrace& trace) {
    if (trace.summary.singularity_hit) return kSingularity;
    if (trace.summary.integrator_status != IntegratorStatus::Ok) return kIntegratorFailure;
    return kOk;
}

int run_compare(const ResolvedScenario& classic, const ResolvedScenario& modified,
                const std::filesystem::path& out_dir) {
    const ComparisonReport rep =
        compare_classic_modified(classic.config, modified.config);

    json divergence{{"classic_scenario", classic.name},
                    {"modified_scenario", modified.name},
                    {"max_dtheta_rad", rep.max_dtheta},
                    {"rms_dtheta_rad", rep.rms_dtheta},
                    {"max_dgamma_rad", rep.max_dgamma},
                    {"rms_dgamma_rad", rep.rms_dgamma},
                    {"max_dtau_Nm", rep.max_dtau},
                    {"rms_dtau_Nm", rep.rms_dtau},
                    {"classic_summary", summary_json(classic, rep.classic)},
                    {"modified_summary", summary_json(modified, rep.modified)}};

    ArtifactWriter writer(out_dir, modified.name, modified.resolved_json);
    writer.write("trace_classic.csv", trace_csv(rep.classic));
    writer.write("trace_modified.csv", trace_csv(rep.modified));
    writer.write("divergence.json", divergence.dump(2) + "\n");
    writer.finalize();

    const int ec = exit_code_for(rep.classic);
    const int em = exit_code_for(rep.modified);
    return ec != kOk ? ec : em;
}

}  // namespace

int cmd_simulate(const json& config, const std::filesystem::path& out_dir) {
    ResolvedScenario scenario;
    try {
        scenario = resolve_scenario(config);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    }
    for (const std::string& w : scenario.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    if (scenario.config.mode == ScenarioMode::CompareClassic) {
        ResolvedScenario classic = scenario;
        classic.name += "-classic";
        classic.config.wave = WaveParams{0.0, 0.0, 0.0};
        classic.resolved_json["wave"]["amplitude_m"] = 0.0;
        classic.resolved_json["wave"]["frequency_per_rev"] = 0.0;
        classic.resolved_json["wave"]["phase_rad"] = 0.0;
        classic.resolved_json["scenario_name"] = classic.name;
        try {
            return run_compare(classic, scenario, out_dir);
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return kConfigError;
        }
    }

    const SimulationTrace trace = simulate_inverse(scenario.config);
    json summary = summary_json(scenario, trace);
    if (scenario.config.mode == ScenarioMode::ForwardRoundtrip && trace.summary.completed) {
        const RoundtripReport rt = roundtrip_forward_check(trace, scenario.config);
        summary["roundtrip"] = json{{"max_theta_dev_rad", rt.max_theta_dev},
                                    {"max_gamma_dev_rad", rt.max_gamma_dev},
                                    {"integrator_status", status_name(rt.status)}};
    }

    ArtifactWriter writer(out_dir, scenario.name, scenario.resolved_json);
    writer.write("trace.csv", trace_csv(trace));
    writer.write("summary.json", summary.dump(2) + "\n");
    writer.finalize();
    return exit_code_for(trace);
}

int cmd_design_wave(const json& config, std::optional<double> frequency,
                    std::optional<double> phase, const std::filesystem::path& out_dir,
                    std::string* report_out) {
    ResolvedScenario scenario;
    json report;
    double freq = 0.0, ph = 0.0;
    try {
        scenario = resolve_scenario(config);
        freq = frequency.value_or(scenario.config.wave.frequency);
        ph = phase.value_or(scenario.config.wave.phase);
        if (!(freq > 2.0))
            throw AssumptionViolated("design-wave requires a frequency > 2");
        report = design_report_json(scenario, freq, ph);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    }

    ArtifactWriter writer(out_dir, scenario.name, scenario.resolved_json);
    writer.write("design_report.json", report.dump(2) + "\n");
    writer.finalize();
    if (report_out) *report_out = report.dump(2);
    return report.at("no_feasible_amplitude").get<bool>() ? kNoFeasibleAmplitude : kOk;
}

int cmd_map_region(const json& config, const std::filesystem::path& out_dir) {
    ResolvedScenario scenario;
    RegionMap map;
    try {
        scenario = resolve_scenario(config);
        const RegionSweep& sw = scenario.sweep;
        map = region_map(scenario.config.wave, scenario.config.geom, sw.param_min, sw.param_max,
                         sw.param_count, sw.theta, sw.zeta_count);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    }

    ArtifactWriter writer(out_dir, scenario.name, scenario.resolved_json);
    writer.write("region.csv", region_csv(map));
    writer.finalize();
    return kOk;
}

int cmd_compare(const json& config_classic, const json& config_modified,
                const std::filesystem::path& out_dir) {
    ResolvedScenario classic, modified;
    try {
        classic = resolve_scenario(config_classic);
        modified = resolve_scenario(config_modified);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    }
    try {
        return run_compare(classic, modified, out_dir);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    }
}

}  // namespace rollsing::io
