#include "socmetro/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "socmetro/measurement.hpp"
#include "socmetro/parallel.hpp"

namespace socmetro {

using nlohmann::json;

namespace {

std::string csv_header(const RunConfig& config, const std::vector<std::string>& extra) {
  std::string out;
  out += "# soc-metrology " + std::string(kLibraryVersion) + "\n";
  out += "# scenario: " + config.scenario + "\n";
  out += "# config_hash: " + config_hash(config.resolved) + "\n";
  out += "# seed: " + std::to_string(config.seed) + "\n";
  for (const auto& line : extra) out += "# " + line + "\n";
  return out;
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  out += '\n';
  return out;
}

json base_diagnostics(const RunConfig& config) {
  return {{"library_version", kLibraryVersion},
          {"config_hash", config_hash(config.resolved)},
          {"seed", config.seed}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// Spot-check of producer invariants before anything is written.
void require_valid(bool ok, const std::string& what) {
  if (!ok) throw NumericalError("validation pass failed: " + what);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

ModelParams at_ratio(const ModelParams& base, double ratio) {
  ModelParams p = base;
  p.k = ratio * critical_coupling(base);
  return p;
}

template <typename T>
T get_or(const json& node, const char* key, T fallback) {
  if (!node.is_object() || !node.contains(key) || node.at(key).is_null()) return fallback;
  return node.at(key).get<T>();
}

Statistics parse_statistics(const std::string& name) {
  if (name == "fermionic") return Statistics::Fermionic;
  if (name == "symmetric-bosonic" || name == "bosonic") return Statistics::SymmetricBosonic;
  if (name == "tonks-girardeau" || name == "tg") return Statistics::TonksGirardeau;
  throw ConfigError("unknown statistics '" + name + "'");
}

void merge_into(json& target, const json& source) {
  if (!source.is_object()) throw ConfigError("config document must be a JSON object");
  for (auto it = source.begin(); it != source.end(); ++it) {
    if (it.value().is_object() && target.contains(it.key()) && target[it.key()].is_object())
      merge_into(target[it.key()], it.value());
    else
      target[it.key()] = it.value();
  }
}

bool is_param_key(std::string_view key) {
  static const std::vector<std::string_view> names = {
      "omega", "Omega", "mass", "k", "k_over_kc", "gamma", "n_atoms", "beta", "beta_omega"};
  return std::find(names.begin(), names.end(), key) != names.end();
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("log_log_slope: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log_log_slope: non-positive value");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> SweepSpec::values() const {
  if (!explicit_values.empty()) return explicit_values;
  if (points < 2) throw ConfigError("sweep.points must be at least 2");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = log_spacing ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                         : start + t * (stop - start);
  }
  out.back() = stop;
  return out;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"fig2", "scaling", "thermal", "limits"};
  return names;
}

json default_config(std::string_view scenario) {
  json doc = {
      {"scenario", std::string(scenario)},
      {"params",
       {{"omega", 1.0}, {"Omega", 100.0}, {"mass", 1.0}, {"k_over_kc", 0.5}, {"gamma", 0.1},
        {"n_atoms", 1}, {"beta_omega", nullptr}}},
      {"numerics", {{"cutoff", 0}, {"grid_points", 1024}, {"dOmega_rel", 1e-4}, {"seed", 0}}},
      {"output", {{"path", nullptr}}},
  };
  if (scenario == "fig2") {
    doc["params"]["n_atoms"] = 2;
    doc["sweep"] = {{"parameter", "k_over_kc"}, {"start", 0.1}, {"stop", 0.99},
                    {"points", 12}, {"spacing", "linear"}};
    doc["fig2"] = {{"density_dumps", json::array()}, {"dump_points", 128}};
  } else if (scenario == "scaling") {
    doc["scaling"] = {{"n_list", {2, 3, 5, 10, 20, 50, 100, 200, 500}},
                      {"statistics", {"fermionic", "symmetric-bosonic", "tonks-girardeau"}}};
  } else if (scenario == "thermal") {
    doc["sweep"] = {{"parameter", "beta_omega"}, {"values", {0.2, 0.5, 1.0, 2.0, 5.0, 50.0}}};
  } else if (scenario == "limits") {
    doc["params"]["k_over_kc"] = 0.9;
  } else {
    throw ConfigError("unknown scenario '" + std::string(scenario) + "'");
  }
  return doc;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("--param expects key=value, got '" + std::string(assignment) + "'");
  std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  if (key.find('.') == std::string::npos && is_param_key(key)) key = "params." + key;

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw ConfigError("empty key segment in '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    if (!(*node)[part].is_object()) (*node)[part] = json::object();
    node = &(*node)[part];
    pos = dot + 1;
  }
}

std::string config_hash(const json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig resolve_config(std::string_view scenario, const json& file_doc,
                         const std::vector<std::string>& overrides) {
  json doc = default_config(scenario);
  if (!file_doc.is_null()) {
    json file_copy = file_doc;
    if (file_copy.contains("scenario") && file_copy["scenario"] != std::string(scenario))
      throw ConfigError("config file is for scenario '" +
                        file_copy["scenario"].get<std::string>() + "'");
    merge_into(doc, file_copy);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  for (const char* section : {"params", "numerics", "output", "sweep", "scaling", "fig2"})
    if (doc.contains(section) && !doc[section].is_object())
      throw ConfigError(std::string("config section '") + section + "' must be an object");

  RunConfig cfg;
  cfg.scenario = std::string(scenario);
  try {
    const json& p = doc.at("params");
    cfg.params.omega = get_or(p, "omega", 1.0);
    cfg.params.Omega = get_or(p, "Omega", 100.0);
    cfg.params.mass = get_or(p, "mass", 1.0);
    cfg.params.gamma = get_or(p, "gamma", 0.1);
    cfg.params.n_atoms = get_or<std::size_t>(p, "n_atoms", 1);
    if (p.contains("beta") && !p["beta"].is_null()) {
      cfg.params.beta = p["beta"].get<double>();
    } else if (p.contains("beta_omega") && !p["beta_omega"].is_null()) {
      cfg.params.beta = p["beta_omega"].get<double>() / cfg.params.omega;
    }
    if (p.contains("k") && !p["k"].is_null()) {
      cfg.params.k = p["k"].get<double>();
      cfg.k_over_kc = cfg.params.k / std::sqrt(cfg.params.Omega * cfg.params.omega);
    } else {
      cfg.k_over_kc = get_or(p, "k_over_kc", 0.0);
      cfg.params.k = cfg.k_over_kc * std::sqrt(cfg.params.Omega * cfg.params.omega);
    }
    cfg.params.validate();
    if (!(cfg.k_over_kc >= 0.0 && cfg.k_over_kc < 1.0))
      throw ConfigError("k/k_c must lie in [0, 1): the stripe phase is not modeled");

    const json& num = doc.at("numerics");
    cfg.cutoff = get_or<std::size_t>(num, "cutoff", 0);
    cfg.grid_points = get_or<std::size_t>(num, "grid_points", 1024);
    cfg.dOmega_rel = get_or(num, "dOmega_rel", 1e-4);
    cfg.seed = get_or<std::uint64_t>(num, "seed", 0);
    if (cfg.grid_points < 64) throw ConfigError("numerics.grid_points must be at least 64");
    if (!(cfg.dOmega_rel > 0.0 && cfg.dOmega_rel < 0.1))
      throw ConfigError("numerics.dOmega_rel must lie in (0, 0.1)");

    if (doc.contains("output") && doc["output"].is_object())
      cfg.output_path = get_or<std::string>(doc["output"], "path", "");

    if (doc.contains("sweep")) {
      const json& s = doc["sweep"];
      cfg.sweep.parameter = get_or<std::string>(s, "parameter", "");
      if (s.contains("values")) {
        cfg.sweep.explicit_values = s["values"].get<std::vector<double>>();
        if (cfg.sweep.explicit_values.size() < 2)
          throw ConfigError("sweep.values needs at least 2 entries");
      } else {
        cfg.sweep.start = s.at("start").get<double>();
        cfg.sweep.stop = s.at("stop").get<double>();
        cfg.sweep.points = s.at("points").get<std::size_t>();
        const std::string spacing = get_or<std::string>(s, "spacing", "linear");
        if (spacing != "linear" && spacing != "log")
          throw ConfigError("sweep.spacing must be 'linear' or 'log'");
        cfg.sweep.log_spacing = spacing == "log";
        if (cfg.sweep.points < 2) throw ConfigError("sweep.points must be at least 2");
      }
    }
    if (doc.contains("scaling")) {
      cfg.n_list = doc["scaling"].at("n_list").get<std::vector<std::size_t>>();
      for (const auto& name : doc["scaling"].at("statistics").get<std::vector<std::string>>())
        cfg.statistics.push_back(parse_statistics(name));
    }
    if (doc.contains("fig2")) {
      cfg.density_dumps = get_or<std::vector<double>>(doc["fig2"], "density_dumps", {});
      cfg.dump_points = get_or<std::size_t>(doc["fig2"], "dump_points", 128);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  if (scenario == "fig2") {
    if (cfg.params.n_atoms != 2) throw ConfigError("fig2 requires n_atoms = 2");
    if (cfg.sweep.parameter != "k_over_kc") throw ConfigError("fig2 sweeps k_over_kc");
    for (const double v : cfg.sweep.values())
      if (!(v >= 0.0 && v <= kFig2RatioCap))
        throw ConfigError("fig2 sweep values must lie in [0, 0.99]");
    for (const double v : cfg.density_dumps)
      if (!(v >= 0.0 && v <= kFig2RatioCap))
        throw ConfigError("fig2 density dumps must lie in [0, 0.99]");
    if (cfg.dump_points < 2) throw ConfigError("fig2.dump_points must be at least 2");
  } else if (scenario == "scaling") {
    if (cfg.n_list.size() < 2) throw ConfigError("scaling.n_list needs at least 2 entries");
    for (const auto n : cfg.n_list)
      if (n < 1) throw ConfigError("scaling.n_list entries must be >= 1");
    if (cfg.statistics.empty()) throw ConfigError("scaling.statistics must not be empty");
  } else if (scenario == "thermal") {
    if (cfg.sweep.parameter != "beta_omega") throw ConfigError("thermal sweeps beta_omega");
    for (const double v : cfg.sweep.values())
      if (!(v > 0.0)) throw ConfigError("beta_omega values must be positive");
  }
  cfg.resolved = doc;
  return cfg;
}

ScenarioOutput scenario_fig2(const RunConfig& config) {
  const std::vector<double> ratios = config.sweep.values();
  const ModelParams base = config.params;
  const double margin = 20.0 * config.dOmega_rel;
  const double widest = *std::max_element(ratios.begin(), ratios.end());
  const Grid1D grid =
      default_grid_for_params(at_ratio(base, widest), 1, config.grid_points, Quadrature::Position,
                              margin);

  struct Row {
    double ratio, qfi, cfi, gap, richardson, excluded, raw_mass;
  };
  std::vector<Row> rows(ratios.size());
  parallel_for(ratios.size(), [&](std::size_t i) {
    const ModelParams p = at_ratio(base, ratios[i]);
    const double qfi = qfi_fermionic_analytic(p).value;
    const FisherResult cfi = classical_fisher_information(
        pair_density_provider(p, Statistics::Fermionic, grid), p.Omega, config.dOmega_rel * p.Omega);
    rows[i] = {ratios[i], qfi, cfi.value, relative_gap(qfi, cfi.value),
               cfi.metadata.at("richardson_rel_diff"), cfi.metadata.at("excluded_mass"),
               cfi.metadata.at("raw_mass")};
  });

  double max_gap = 0.0;
  double max_mass_error = 0.0;
  for (const auto& r : rows) {
    require_valid(finite_non_negative(r.qfi) && finite_non_negative(r.cfi),
                  "Fisher information must be finite and non-negative");
    max_gap = std::max(max_gap, r.gap);
    max_mass_error = std::max(max_mass_error, std::abs(r.raw_mass - 1.0));
  }
  require_valid(max_mass_error < 1e-8, "pair density normalization on the grid");

  ScenarioOutput out;
  out.primary_extension = "csv";
  out.primary = csv_header(config, {"n_atoms: 2",
                                    "grid_points: " + std::to_string(grid.n_points()),
                                    "grid_half_width: " + format_double(grid.half_coverage()),
                                    "k_over_kc_cap: " + format_double(kFig2RatioCap)});
  out.primary += "k_over_kc,qfi_analytic,cfi_position,relative_gap\n";
  for (const auto& r : rows) out.primary += csv_row({r.ratio, r.qfi, r.cfi, r.gap});

  json results = {{"rows", rows.size()},
                  {"max_relative_gap", max_gap},
                  {"all_within_1pct", max_gap < 0.01}};
  json diag = base_diagnostics(config);
  diag["grid_points"] = grid.n_points();
  diag["grid_half_width"] = grid.half_coverage();
  diag["k_over_kc_cap"] = kFig2RatioCap;
  diag["cap_note"] = "k/k_c = 0.9997 needs cutoffs beyond the dense budget; sweep capped at 0.99";
  diag["max_normalization_error"] = max_mass_error;
  json per_row = json::array();
  for (const auto& r : rows)
    per_row.push_back({{"k_over_kc", r.ratio},
                       {"richardson_rel_diff", r.richardson},
                       {"excluded_mass", r.excluded}});
  diag["rows"] = per_row;
  out.summary_json = dump({{"config", config.resolved}, {"results", results}, {"diagnostics", diag}});

  for (const double ratio : config.density_dumps) {
    const ModelParams p = at_ratio(base, ratio);
    const double xi = squeeze_parameter(p.k, critical_coupling(p));
    const Grid1D dump_grid = default_grid(xi, 1, p.mass, p.omega, std::max<std::size_t>(64, config.dump_points));
    const MeasurementDistribution dist = pair_correlation_density(
        ManyBodyProbe::ground(2, Statistics::Fermionic, xi), dump_grid, p);
    std::string csv = csv_header(config, {"density p(x1,x2) at k_over_kc " + format_double(ratio)});
    csv += "x1,x2,density\n";
    for (std::size_t i = 0; i < dump_grid.n_points(); ++i)
      for (std::size_t j = 0; j < dump_grid.n_points(); ++j)
        csv += csv_row({dump_grid.point(i), dump_grid.point(j), dist.density(i, j)});
    out.extra_files.emplace_back("_density_k" + format_double(ratio) + ".csv", std::move(csv));
  }
  return out;
}

ScenarioOutput scenario_scaling(const RunConfig& config) {
  const ModelParams base = config.params;
  std::vector<double> ns;
  std::map<Statistics, std::vector<double>> columns;
  for (const std::size_t n : config.n_list) {
    ModelParams p = base;
    p.n_atoms = n;
    ns.push_back(static_cast<double>(n));
    for (const Statistics s : config.statistics) {
      const double v = s == Statistics::SymmetricBosonic ? qfi_bosonic_excited_analytic(p).value
                                                         : qfi_fermionic_analytic(p).value;
      columns[s].push_back(v);
    }
  }

  // Combinatorial variance route as a cross-check where it applies.
  double max_route_gap = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (config.n_list[i] > kMaxCombinatorialAtoms) continue;
    ModelParams p = base;
    p.n_atoms = config.n_list[i];
    for (const Statistics s : config.statistics) {
      const double v = qfi_collective_variance(ManyBodyProbe::ground(p.n_atoms, s), p).value;
      max_route_gap = std::max(max_route_gap, relative_gap(v, columns[s][i]));
    }
  }
  for (const auto& [s, col] : columns)
    for (const double v : col) require_valid(finite_non_negative(v), "QFI must be non-negative");
  require_valid(max_route_gap < 1e-8, "analytic and generator-variance routes disagree");

  ScenarioOutput out;
  out.primary_extension = "csv";
  out.primary = csv_header(config, {"k_over_kc: " + format_double(config.k_over_kc)});
  std::string header = "n_atoms";
  for (const Statistics s : config.statistics) header += ",qfi_" + std::string(to_string(s));
  out.primary += header + "\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> row{ns[i]};
    for (const Statistics s : config.statistics) row.push_back(columns[s][i]);
    out.primary += csv_row(row);
  }

  json slopes = json::object();
  const bool positive = base.k > 0.0;
  for (const Statistics s : config.statistics) {
    json entry = {{"all_n", positive ? json(log_log_slope(ns, columns[s])) : json(nullptr)}};
    std::vector<double> big_n, big_v;
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (ns[i] >= 100.0) {
        big_n.push_back(ns[i]);
        big_v.push_back(columns[s][i]);
      }
    entry["n_ge_100"] =
        positive && big_n.size() >= 2 ? json(log_log_slope(big_n, big_v)) : json(nullptr);
    slopes[std::string(to_string(s))] = entry;
  }
  json diag = base_diagnostics(config);
  diag["max_route_relative_gap"] = max_route_gap;
  diag["tonks_girardeau_note"] = "TG QFI equals the fermionic QFI";
  out.summary_json = dump({{"config", config.resolved},
                           {"results", {{"log_log_slopes", slopes}, {"n_list", config.n_list}}},
                           {"diagnostics", diag}});
  return out;
}

ScenarioOutput scenario_thermal(const RunConfig& config) {
  const std::vector<double> bws = config.sweep.values();
  struct Row {
    double bw, printed, spectral, exact;
    std::size_t cutoff;
  };
  std::vector<Row> rows(bws.size());
  parallel_for(bws.size(), [&](std::size_t i) {
    ModelParams p = config.params;
    p.beta = bws[i] / p.omega;
    const FisherResult closed = qfi_thermal_closed_form(p);
    const ThermalState state = thermal_state(p, config.cutoff);
    const FisherResult spectral = qfi_mixed_spectral(state, p);
    rows[i] = {bws[i], closed.value, spectral.value, closed.metadata.at("value_exact_sum_factor"),
               state.cutoff};
  });

  // Order by beta for the monotonicity flags.
  std::vector<Row> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const Row& a, const Row& b) { return a.bw < b.bw; });
  bool spectral_monotone = true;
  bool printed_monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    spectral_monotone = spectral_monotone && sorted[i].spectral <= sorted[i - 1].spectral;
    printed_monotone = printed_monotone && sorted[i].printed <= sorted[i - 1].printed;
  }
  double max_gap_printed = 0.0;
  double max_gap_exact = 0.0;
  for (const auto& r : rows) {
    require_valid(finite_non_negative(r.spectral) && finite_non_negative(r.printed),
                  "thermal QFI must be finite and non-negative");
    max_gap_printed = std::max(max_gap_printed, relative_gap(r.printed, r.spectral));
    max_gap_exact = std::max(max_gap_exact, relative_gap(r.exact, r.spectral));
  }
  ModelParams zero_t = config.params;
  zero_t.beta = std::numeric_limits<double>::infinity();
  const double zero_temperature = qfi_single_particle_analytic(zero_t).value;

  ScenarioOutput out;
  out.primary_extension = "csv";
  out.primary = csv_header(config, {"k_over_kc: " + format_double(config.k_over_kc),
                                    "closed_form uses the printed factor (tanh(bw)+1)/tanh^2(bw/2)",
                                    "closed_form_exact uses 2(1+q)^2/(1+q^2), q = exp(-bw)"});
  out.primary += "beta_omega,qfi_closed_form,qfi_spectral_sum,qfi_closed_form_exact,cutoff\n";
  for (const auto& r : rows)
    out.primary += csv_row({r.bw, r.printed, r.spectral, r.exact, static_cast<double>(r.cutoff)});

  json results = {{"monotone_non_increasing_in_beta_spectral", spectral_monotone},
                  {"monotone_non_increasing_in_beta_closed_form", printed_monotone},
                  {"max_relative_gap_closed_form_vs_spectral", max_gap_printed},
                  {"max_relative_gap_exact_form_vs_spectral", max_gap_exact},
                  {"zero_temperature_qfi", zero_temperature}};
  json diag = base_diagnostics(config);
  diag["tail_probability_bound"] = 1e-12;
  out.summary_json = dump({{"config", config.resolved}, {"results", results}, {"diagnostics", diag}});
  return out;
}

ScenarioOutput scenario_limits(const RunConfig& config) {
  const ModelParams& p = config.params;
  const ThresholdReport r = sql_hl_thresholds(p, p.k);
  json results = {
      {"sql_margin", r.sql_margin},
      {"sql_margin_with_ratio", r.sql_margin_with_ratio},
      {"sql_beaten", r.sql_beaten},
      {"hl_margin_bosonic", r.hl_margin_bosonic},
      {"hl_beaten_bosonic", r.hl_beaten_bosonic},
      {"excitations_at_kf", r.excitations_at_kf},
      {"n_ceiling", r.excitation_ceiling},
      {"max_k_over_kc", r.max_k_over_kc},
      {"squeezing_within_ceiling", r.squeezing_within_ceiling},
      {"n_min", r.n_min},
      {"n_atoms_above_threshold", r.n_atoms_above_threshold},
      {"sweep_time", r.sweep_time},
  };
  json diag = base_diagnostics(config);
  diag["adiabaticity_warning"] = adiabaticity_warning(p);
  diag["polarized_regime"] = p.polarized_regime();
  diag["note"] = "threshold booleans hold up to numerical factors; margins are the contract";
  ScenarioOutput out;
  out.primary_extension = "json";
  out.primary = dump({{"config", config.resolved}, {"results", results}, {"diagnostics", diag}});
  return out;
}

ScenarioOutput run_scenario(const RunConfig& config) {
  if (config.scenario == "fig2") return scenario_fig2(config);
  if (config.scenario == "scaling") return scenario_scaling(config);
  if (config.scenario == "thermal") return scenario_thermal(config);
  if (config.scenario == "limits") return scenario_limits(config);
  throw ConfigError("unknown scenario '" + config.scenario + "'");
}

}  // namespace socmetro
