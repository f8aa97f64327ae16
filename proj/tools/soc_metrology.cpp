// soc-metrology <scenario> [--config <path>] [--out <path>] [--seed <u64>]
//               [--param key=value ...]
//
// Exit codes: 0 ok, 2 invalid config, 3 numerical non-convergence, 4 I/O.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "socmetro/scenarios.hpp"

namespace fs = std::filesystem;
using namespace socmetro;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto doc = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
  return doc;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-orbit coupled atom frequency metrology"};
  std::string scenario;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> params;

  app.add_option("scenario", scenario, "fig2 | scaling | thermal | limits")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output path");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--param", params, "override key=value (dotted keys allowed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    nlohmann::json file_doc;
    if (!config_path.empty()) file_doc = read_config(config_path);
    if (seed) params.push_back("numerics.seed=" + std::to_string(*seed));
    const RunConfig config = resolve_config(scenario, file_doc, params);

    const ScenarioOutput output = run_scenario(config);

    fs::path primary = !out_path.empty()             ? fs::path(out_path)
                       : !config.output_path.empty() ? fs::path(config.output_path)
                                                     : fs::path(scenario + "." + output.primary_extension);
    write_file(primary, output.primary);
    if (output.summary_json) {
      fs::path summary = primary;
      summary.replace_extension(".json");
      if (summary == primary) summary += ".summary.json";
      write_file(summary, *output.summary_json);
    }
    for (const auto& [suffix, content] : output.extra_files) {
      fs::path extra = primary;
      extra.replace_extension();
      extra += suffix;
      write_file(extra, content);
    }
    std::cerr << "wrote " << primary.string() << "\n";
    return kExitOk;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OutOfPhase& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Unsupported& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
