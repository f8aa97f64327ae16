#include <doctest.h>

#include <sstream>

#include "socmetro/scenarios.hpp"

using namespace socmetro;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> out;
  bool header_seen = false;
  for (const auto& line : lines_of(csv)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

std::vector<double> split(const std::string& row) {
  std::vector<double> out;
  std::istringstream in(row);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

TEST_CASE("overrides and precedence") {
  json file = {{"params", {{"Omega", 50.0}, {"k_over_kc", 0.3}}}};
  const RunConfig base = resolve_config("limits", file);
  CHECK(base.params.Omega == 50.0);
  CHECK(base.k_over_kc == doctest::Approx(0.3));

  const RunConfig cli = resolve_config("limits", file, {"Omega=200", "params.gamma=0.05"});
  CHECK(cli.params.Omega == 200.0);
  CHECK(cli.params.gamma == 0.05);
  CHECK(cli.params.k == doctest::Approx(0.3 * std::sqrt(200.0)));

  json doc = json::object();
  apply_override(doc, "sweep.points=7");
  CHECK(doc["sweep"]["points"] == 7);
  apply_override(doc, "name=abc");
  CHECK(doc["name"] == "abc");
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "=3"), ConfigError);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(resolve_config("nope", json()), ConfigError);
  CHECK_THROWS_AS(resolve_config("limits", json(), {"k_over_kc=1.0"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("limits", json(), {"Omega=-1"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("fig2", json(), {"n_atoms=3"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("fig2", json(), {"sweep.stop=0.9997"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("fig2", json(), {"sweep.points=1"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("fig2", json(), {"sweep.spacing=cubic"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("scaling", json(), {"scaling.statistics=[\"anyons\"]"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("thermal", json(), {"sweep.values=[1, -2]"}), ConfigError);
  CHECK_THROWS_AS(resolve_config("limits", json{{"params", 3}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("limits", json{{"scenario", "fig2"}}), ConfigError);
}

TEST_CASE("sweep values") {
  SweepSpec s;
  s.start = 1.0;
  s.stop = 100.0;
  s.points = 3;
  s.log_spacing = true;
  const auto v = s.values();
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v[2] == 100.0);
  s.explicit_values = {0.5, 0.7};
  CHECK(s.values() == std::vector<double>{0.5, 0.7});
}

TEST_CASE("fig2 scenario") {
  const RunConfig cfg = resolve_config(
      "fig2", json(), {"sweep.start=0.1", "sweep.stop=0.9", "sweep.points=9", "grid_points=256"});
  const ScenarioOutput out = scenario_fig2(cfg);
  CHECK(out.primary_extension == "csv");
  const auto lines = lines_of(out.primary);
  CHECK(lines.front().rfind("# soc-metrology", 0) == 0);
  bool has_hash = false;
  for (const auto& l : lines) has_hash = has_hash || l.rfind("# config_hash: ", 0) == 0;
  CHECK(has_hash);
  const auto rows = data_rows(out.primary);
  REQUIRE(rows.size() == 9);
  for (const auto& row : rows) CHECK(split(row)[3] < 0.01);
  REQUIRE(out.summary_json);
  const json summary = json::parse(*out.summary_json);
  CHECK(summary.contains("config"));
  CHECK(summary.contains("results"));
  CHECK(summary["diagnostics"]["k_over_kc_cap"] == 0.99);

  const RunConfig zero = resolve_config(
      "fig2", json(), {"sweep.values=[0.0, 0.5]", "grid_points=128"});
  const auto zrow = split(data_rows(scenario_fig2(zero).primary).front());
  CHECK(zrow[1] == 0.0);
  CHECK(zrow[2] == 0.0);

  CHECK(scenario_fig2(cfg).primary == out.primary);

  const RunConfig dumps = resolve_config(
      "fig2", json(), {"sweep.values=[0.3, 0.5]", "grid_points=128", "fig2.density_dumps=[0.5]",
                       "fig2.dump_points=64"});
  const auto with_dump = scenario_fig2(dumps);
  REQUIRE(with_dump.extra_files.size() == 1);
  CHECK(data_rows(with_dump.extra_files.front().second).size() == 64 * 64);
}

TEST_CASE("scaling scenario") {
  const ScenarioOutput out = scenario_scaling(resolve_config("scaling", json()));
  const auto rows = data_rows(out.primary);
  CHECK(rows.size() == 9);
  for (const auto& row : rows) {
    const auto v = split(row);
    CHECK(v[1] == v[3]);
  }
  const json s = json::parse(*out.summary_json);
  CHECK(std::abs(s["results"]["log_log_slopes"]["fermionic"]["all_n"].get<double>() - 2.0) < 0.01);
  CHECK(std::abs(s["results"]["log_log_slopes"]["symmetric-bosonic"]["n_ge_100"].get<double>() - 3.0) < 0.02);
}

TEST_CASE("thermal scenario") {
  const ScenarioOutput out = scenario_thermal(resolve_config("thermal", json()));
  const auto rows = data_rows(out.primary);
  REQUIRE(rows.size() == 6);
  const auto last = split(rows.back());
  CHECK(last[0] == 50.0);
  const double zero_t = qfi_single_particle_analytic(ModelParams::from_ratio(0.5)).value;
  CHECK(std::abs(last[2] - zero_t) / zero_t < 1e-8);
  for (const auto& row : rows) {
    const auto v = split(row);
    CHECK(std::abs(v[3] - v[2]) / v[2] < 1e-6);
  }
  const json s = json::parse(*out.summary_json);
  CHECK(s["results"]["monotone_non_increasing_in_beta_spectral"] == true);
}

TEST_CASE("limits scenario") {
  const ScenarioOutput high = scenario_limits(resolve_config("limits", json(), {"Omega=1000"}));
  const json h = json::parse(high.primary);
  CHECK(h["results"]["n_ceiling"].get<double>() == doctest::Approx(10.0));
  CHECK(h["config"]["params"]["Omega"] == 1000);

  const json l = json::parse(scenario_limits(resolve_config("limits", json())).primary);
  CHECK(l["results"]["n_min"].get<double>() == doctest::Approx(4.6416e4).epsilon(1e-4));
  for (const char* key : {"omega", "Omega", "gamma", "k_over_kc", "n_atoms", "mass"})
    CHECK(l["config"]["params"].contains(key));
  CHECK(l.contains("diagnostics"));
}

TEST_CASE("formatting helpers") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(log_log_slope({1, 10, 100}, {2, 200, 20000}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(log_log_slope({1}, {1}), InvalidArgument);
  CHECK(config_hash(json{{"a", 1}}) != config_hash(json{{"a", 2}}));
  CHECK(config_hash(json{{"a", 1}}).size() == 16);
}
