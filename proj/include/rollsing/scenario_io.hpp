#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollsing/simulate.hpp"

namespace rollsing::io {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSingularity = 3,
    kIntegratorFailure = 4,
    kNoFeasibleAmplitude = 5,
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Region-sweep request for the map-region command.
struct RegionSweep {
    double param_min = 0.05;
    double param_max = 0.145;
    std::size_t param_count = 50;
    std::size_t zeta_count = 720;
    double theta = 0.0;
};

/// A scenario file resolved against the built-in defaults.
struct ResolvedScenario {
    std::string name;
    ScenarioConfig config;
    RegionSweep sweep;
    nlohmann::json resolved_json;       ///< exact resolved configuration
    std::vector<std::string> warnings;  ///< advisory validation messages
};

/// Built-in defaults: the bundled demo system (mass-point carrier with the
/// designed wave, quarter-turn rest-to-rest over six seconds).
nlohmann::json default_config_json();

/// Parse + validate a config JSON against the defaults. Unknown keys and
/// malformed values throw std::invalid_argument; wave assumption violations
/// propagate as AssumptionViolated.
ResolvedScenario resolve_scenario(const nlohmann::json& config);

/// Apply one `--set key.path=value` override onto a config JSON. The value
/// text is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// FNV-1a 64-bit checksum, hex-encoded.
std::string fnv1a64_hex(const std::string& bytes);

/// Write bytes to path atomically (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

/// Serialize a trace as CSV with the fixed 16-column header. All numbers are
/// printed with 17 significant digits.
std::string trace_csv(const SimulationTrace& trace);

/// Serialize a region map as long-format CSV (param,zeta,margin,singular).
std::string region_csv(const RegionMap& map);

/// Fixed-schema run summary, including the wave-design verdict, the coupling
/// scan and their disagreement flag.
nlohmann::json summary_json(const ResolvedScenario& scenario, const SimulationTrace& trace);

/// Feasibility report for the design-wave command.
nlohmann::json design_report_json(const ResolvedScenario& scenario, double frequency,
                                  double phase);

/// One subcommand run: output directory plus every artifact written.
class ArtifactWriter {
  public:
    ArtifactWriter(std::filesystem::path out_dir, std::string scenario_name,
                   nlohmann::json resolved_config);

    /// Write a file under the output directory and record it in the manifest.
    void write(const std::string& filename, const std::string& bytes);

    /// Write manifest.json itself (listing all previously written files).
    void finalize();

    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
    nlohmann::json manifest_;
};

/// Subcommand entry points; return process exit codes. design-wave's
/// frequency and phase fall back to the config's wave when not given.
int cmd_simulate(const nlohmann::json& config, const std::filesystem::path& out_dir);
int cmd_design_wave(const nlohmann::json& config, std::optional<double> frequency,
                    std::optional<double> phase, const std::filesystem::path& out_dir,
                    std::string* report_out = nullptr);
int cmd_map_region(const nlohmann::json& config, const std::filesystem::path& out_dir);
int cmd_compare(const nlohmann::json& config_classic, const nlohmann::json& config_modified,
                const std::filesystem::path& out_dir);

}  // namespace rollsing::io
