#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rollsing/scenario_io.hpp"

namespace {

using nlohmann::json;

// Loads the config file (or {}) and applies --set overrides. Returns nullopt
// after printing a diagnostic when anything fails.
std::optional<json> load_config(const std::string& path, const std::vector<std::string>& sets) {
    json config = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            std::fprintf(stderr, "config error: cannot open %s\n", path.c_str());
            return std::nullopt;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s: %s\n", path.c_str(), e.what());
            return std::nullopt;
        }
    }
    for (const std::string& s : sets) {
        try {
            rollsing::io::apply_override(config, s);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return std::nullopt;
        }
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singularity-free rolling-carrier simulation and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("rollsing ") + rollsing::io::kToolVersion);

    std::string config_path, out_dir = "out";
    std::vector<std::string> sets;
    bool seedless = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario JSON (defaults used when omitted)");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--set", sets, "override config values, e.g. wave.amplitude_m=0.002");
        // reserved: every run is already deterministic, no randomness exists
        sub->add_flag("--seedless", seedless, "deterministic mode (reserved, always on)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run an inverse-dynamics scenario");
    add_common(sim);

    CLI::App* design = app.add_subcommand("design-wave", "wave feasibility and minimal amplitude");
    add_common(design);
    double freq_arg = 0.0, phase_arg = 0.0;
    CLI::Option* freq_opt = design->add_option("--n", freq_arg, "wave frequency (per revolution)");
    CLI::Option* phase_opt = design->add_option("--eps", phase_arg, "wave phase (rad)");

    CLI::App* region = app.add_subcommand("map-region", "coupling-margin grid over a radius sweep");
    add_common(region);

    CLI::App* compare = app.add_subcommand("compare", "classic vs modified model comparison");
    std::string classic_path, modified_path;
    compare->add_option("--classic", classic_path, "classic scenario JSON (amplitude 0)")
        ->required();
    compare->add_option("--modified", modified_path, "modified scenario JSON")->required();
    compare->add_option("--out", out_dir, "output directory")->capture_default_str();
    compare->add_option("--set", sets, "override applied to the modified config");
    compare->add_flag("--seedless", seedless, "deterministic mode (reserved, always on)");

    CLI11_PARSE(app, argc, argv);

    const std::filesystem::path out{out_dir};

    if (compare->parsed()) {
        const auto classic = load_config(classic_path, {});
        const auto modified = load_config(modified_path, sets);
        if (!classic || !modified) return rollsing::io::kConfigError;
        return rollsing::io::cmd_compare(*classic, *modified, out);
    }

    const auto config = load_config(config_path, sets);
    if (!config) return rollsing::io::kConfigError;

    if (sim->parsed()) return rollsing::io::cmd_simulate(*config, out);

    if (design->parsed()) {
        std::optional<double> freq, phase;
        if (freq_opt->count() > 0) freq = freq_arg;
        if (phase_opt->count() > 0) phase = phase_arg;
        std::string report;
        const int rc = rollsing::io::cmd_design_wave(*config, freq, phase, out, &report);
        if (!report.empty()) std::printf("%s\n", report.c_str());
        return rc;
    }

    if (region->parsed()) return rollsing::io::cmd_map_region(*config, out);

    return rollsing::io::kConfigError;
}
