#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmbn/baselines.hpp"
#include "mmbn/metrics.hpp"

namespace mmbn {

inline constexpr const char* kVersion = "1.0.0";

/// One swept parameter; several axes form a grid.
struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

struct ExperimentConfig {
  TopologyParams topology;
  RadioConfig radio;
  double price = 1.0;       ///< q, currency per sub-channel
  double kappa_mbps = 0.0;  ///< kappa in Mbit/s per currency unit
  FormationOptions formation;
  ExhaustiveLimits limits;

  std::string preset = "custom";
  std::vector<std::string> schemes{"cooperative", "noncoop", "random"};
  std::size_t seeds = 200;
  std::uint64_t first_seed = 1;
  std::vector<SweepAxis> sweep;
  std::size_t cdf_points = 101;
  bool snapshot = false;  ///< also dump topology, formation and allocation of the first run
};

/// Names accepted in the "defaults" block, as key=value overrides and as sweep keys.
const std::vector<std::string>& parameter_names();
/// Sets one named parameter. Throws ConfigError for unknown keys or bad values.
void set_parameter(ExperimentConfig& cfg, const std::string& key, const nlohmann::json& value);
nlohmann::json parameters_to_json(const ExperimentConfig& cfg);

const std::vector<std::string>& scheme_names();
const std::vector<std::string>& preset_names();
/// Throws ConfigError listing the presets when the name is unknown.
ExperimentConfig make_preset(const std::string& name);

/// {"defaults": {...}, "experiment": {...}} layered over `base`.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
/// Parses text; syntax errors are reported with line and column.
ExperimentConfig config_from_text(const std::string& text, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Applies "key=value"; the value is read as JSON when it parses, else as a string.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);
/// Checks ranges and scheme names, and refuses the exhaustive scheme on instances over its limits.
void validate(const ExperimentConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// Everything needed to run one seed at one sweep point.
struct RunSetup {
  TopologyParams topology;
  RadioConfig radio;
  FormationOptions formation;
  ExhaustiveLimits limits;
  double price = 1.0;
  double kappa_mbps = 0.0;

  PricingConfig pricing() const;
};

/// Resolved parameters of every grid point, first axis slowest.
std::vector<ExperimentConfig> sweep_points(const ExperimentConfig& cfg);
RunSetup setup_of(const ExperimentConfig& point);

struct SchemeRun {
  std::string scheme;
  RunMetrics metrics;
  OverheadReport overhead;
  std::size_t structural_violations = 0;
};

/// Builds topology and channel from the seed and runs the requested schemes.
std::vector<SchemeRun> run_seed(const RunSetup& setup, std::uint64_t seed, const std::vector<std::string>& schemes);

/// Runs the whole sweep on `workers` threads and writes sumrate.csv, summary.csv,
/// cdf.csv, cost.csv, overhead.csv and manifest.json (plus snapshot files) to `out`.
void run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out, std::size_t workers);

}  // namespace mmbn
