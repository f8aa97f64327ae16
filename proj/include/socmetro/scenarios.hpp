#pragma once

// Named reproduction scenarios behind the soc-metrology command line.
// Every scenario is a pure function of its resolved configuration: the
// emitted CSV/JSON text is byte-identical across runs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "socmetro/error.hpp"
#include "socmetro/metrology.hpp"
#include "socmetro/models.hpp"

namespace socmetro {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 2;
  bool log_spacing = false;
  std::vector<double> explicit_values;  // overrides start/stop/points when set

  std::vector<double> values() const;
};

struct RunConfig {
  std::string scenario;
  ModelParams params;
  double k_over_kc = 0.0;
  SweepSpec sweep;
  std::vector<std::size_t> n_list;
  std::vector<Statistics> statistics;
  std::vector<double> density_dumps;  // k/k_c values for p(x1, x2) dumps
  std::size_t dump_points = 128;
  std::size_t cutoff = 0;
  std::size_t grid_points = 1024;
  double dOmega_rel = 1e-4;
  std::uint64_t seed = 0;
  std::string output_path;
  nlohmann::json resolved;  // defaults merged with file and overrides
};

inline constexpr double kFig2RatioCap = 0.99;

const std::vector<std::string>& scenario_names();

// Scenario defaults as a JSON document.
nlohmann::json default_config(std::string_view scenario);

// Applies "key=value" with a dotted key path; bare parameter names map into
// "params". The value is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// Merges `file_doc` and the overrides over the scenario defaults and
// validates. Throws ConfigError on any invalid entry.
RunConfig resolve_config(std::string_view scenario, const nlohmann::json& file_doc,
                         const std::vector<std::string>& overrides = {});

// FNV-1a 64 of the canonical resolved config, as 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

struct ScenarioOutput {
  std::string primary_extension;  // "csv" or "json"
  std::string primary;
  std::optional<std::string> summary_json;
  // (file-name suffix, content) pairs written next to the primary output.
  std::vector<std::pair<std::string, std::string>> extra_files;
};

ScenarioOutput scenario_fig2(const RunConfig& config);
ScenarioOutput scenario_scaling(const RunConfig& config);
ScenarioOutput scenario_thermal(const RunConfig& config);
ScenarioOutput scenario_limits(const RunConfig& config);

ScenarioOutput run_scenario(const RunConfig& config);

// Shortest round-trip decimal representation.
std::string format_double(double value);

// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace socmetro
