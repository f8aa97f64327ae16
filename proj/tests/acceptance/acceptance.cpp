// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N] [--cli <path to soc-metrology>]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <unistd.h>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "socmetro/measurement.hpp"
#include "socmetro/metrology.hpp"
#include "socmetro/models.hpp"
#include "socmetro/scenarios.hpp"

using namespace socmetro;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double gap(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

ModelParams ratio(double r, double Omega, std::size_t n = 1) {
  return ModelParams::from_ratio(r, 1.0, Omega, n);
}

Outcome oracle_triangle() {
  double worst = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const ModelParams p = ratio(r, 100.0);
    const double analytic = qfi_single_particle_analytic(p).value;
    const auto fd = converge_in_cutoff(
        [&](std::size_t d) {
          return qfi_finite_difference([d](const ModelParams& q) { return effective_ground_state(q, d); }, p)
              .value;
        },
        default_model_cutoff(p), 1e-6);
    const double xi = squeeze_parameter(p.k, critical_coupling(p));
    const std::size_t d = recommended_cutoff(xi, 2);
    const double variance = 4.0 * SqueezedFockState{0, xi}.materialize(d).variance(local_generator(p, d));
    worst = std::max({worst, gap(analytic, fd.value), gap(analytic, variance), gap(fd.value, variance)});
  }
  return {worst < 0.01, "max pairwise gap " + fmt(worst) + " (tol 1e-2)"};
}

Outcome fig2_reproduction() {
  const RunConfig cfg = resolve_config("fig2", nlohmann::json());
  const auto summary = nlohmann::json::parse(*scenario_fig2(cfg).summary_json);
  const double worst = summary["results"]["max_relative_gap"].get<double>();
  const auto points = summary["results"]["rows"].get<std::size_t>();
  return {worst < 0.01, std::to_string(points) + " points on k/k_c in [0.1, 0.99], max CFI/QFI gap " +
                            fmt(worst) + " (tol 1e-2)"};
}

Outcome cubic_cancellation() {
  bool integer_exact = true;
  double worst = 0.0;
  for (std::size_t n = 1; n <= 10000; ++n) {
    const ModelParams p = ratio(0.5, 10.0, n);
    const auto c = qfi_fermionic_contributions(p);
    const auto nn = static_cast<std::int64_t>(n);
    integer_exact = integer_exact && (c.first_numerator + c.second_numerator == 3 * nn * nn);
    // Rounding is measured against the size of the cancelling terms.
    const double scale = std::abs(c.first) + std::abs(c.second);
    worst = std::max(worst, std::abs(c.first + c.second - qfi_fermionic_analytic(p).value) / scale);
  }
  const double ulps = worst / std::numeric_limits<double>::epsilon();
  const bool ok = integer_exact && ulps <= 8.0;
  return {ok, std::string("integer identity ") + (integer_exact ? "exact" : "BROKEN") +
                  " for N in [1, 1e4], floating residual " + fmt(ulps) + " ulp of term size (tol 8 ulp)"};
}

Outcome scaling_exponents() {
  std::vector<double> nf, vf, nb, vb;
  for (std::size_t n = 2; n <= 100; ++n) {
    nf.push_back(static_cast<double>(n));
    vf.push_back(qfi_fermionic_analytic(ratio(0.5, 100.0, n)).value);
  }
  for (std::size_t n = 50; n <= 500; ++n) {
    nb.push_back(static_cast<double>(n));
    vb.push_back(qfi_bosonic_excited_analytic(ratio(0.5, 100.0, n)).value);
  }
  const double sf = log_log_slope(nf, vf);
  const double sb = log_log_slope(nb, vb);
  const bool ok = std::abs(sf - 2.0) <= 0.01 && std::abs(sb - 3.0) <= 0.02;
  return {ok, "fermionic slope " + fmt(sf) + " (2 +- 0.01), bosonic slope " + fmt(sb) + " (3 +- 0.02)"};
}

Outcome tensor_oracle() {
  double worst = 0.0;
  double per_mode_ratio = 0.0;
  for (std::size_t n : {2u, 3u}) {
    const ModelParams p = ratio(0.5, 10.0, n);
    for (auto s : {Statistics::Fermionic, Statistics::SymmetricBosonic}) {
      const auto comb = qfi_collective_variance(ManyBodyProbe::ground(n, s), p);
      const auto tens = qfi_collective_variance(ManyBodyProbe::ground(n, s), p, 0, VarianceRoute::TensorProduct);
      worst = std::max(worst, gap(comb.value, tens.value));
      per_mode_ratio = comb.metadata.at("per_mode_sum") / comb.metadata.at("per_mode_sum_printed_coefficient");
    }
  }
  const ModelParams p2 = ratio(0.5, 10.0, 2);
  const double f2 = qfi_collective_variance(ManyBodyProbe::ground(2, Statistics::Fermionic), p2, 0,
                                            VarianceRoute::TensorProduct)
                        .value;
  const double closed = gap(f2, qfi_fermionic_analytic(p2).value);
  const bool ok = worst < 1e-8 && closed < 1e-8;
  return {ok, "tensor vs combinatorial " + fmt(worst) + ", fermionic N=2 vs closed form " + fmt(closed) +
                  " (tol 1e-8); per-mode <h^2> oracle/printed = " + fmt(per_mode_ratio)};
}

Outcome thermal() {
  double worst = 0.0;
  double worst_bw = 0.0;
  double worst_exact = 0.0;
  std::vector<double> spectral;
  const std::vector<double> bws = {0.2, 0.5, 1.0, 2.0, 5.0, 50.0};
  for (double bw : bws) {
    ModelParams p = ratio(0.5, 100.0);
    p.beta = bw;
    const double s = qfi_mixed_spectral(thermal_state(p), p).value;
    const auto closed = qfi_thermal_closed_form(p);
    spectral.push_back(s);
    if (gap(s, closed.value) > worst) {
      worst = gap(s, closed.value);
      worst_bw = bw;
    }
    worst_exact = std::max(worst_exact, gap(s, closed.metadata.at("value_exact_sum_factor")));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < spectral.size(); ++i) monotone = monotone && spectral[i] <= spectral[i - 1];
  const double zero_t = gap(spectral.back(), qfi_single_particle_analytic(ratio(0.5, 100.0)).value);
  const bool ok = worst < 1e-6 && zero_t < 1e-8 && monotone;
  return {ok, "spectral vs closed form max gap " + fmt(worst) + " at beta*omega=" + fmt(worst_bw) +
                  " (tol 1e-6); beta*omega=50 vs zero-T " + fmt(zero_t) + " (tol 1e-8); monotone " +
                  (monotone ? "yes" : "no") + "; spectral vs 2(1+q)^2/(1+q^2) form " + fmt(worst_exact)};
}

Outcome tg_equivalence() {
  double worst = 0.0;
  for (double r : {0.3, 0.7}) {
    const ModelParams p = ratio(r, 100.0, 2);
    const Grid1D g = default_grid_for_params(p, 1, 512);
    const double f = grid_qfi_real_wavefunction(pair_wavefunction_provider(p, Statistics::Fermionic, g), p.Omega).value;
    const double tg =
        grid_qfi_real_wavefunction(pair_wavefunction_provider(p, Statistics::TonksGirardeau, g), p.Omega).value;
    worst = std::max(worst, gap(f, tg));
  }
  return {worst < 1e-8, "max |Psi_F| vs Psi_F grid QFI gap " + fmt(worst) + " (tol 1e-8)"};
}

Outcome effective_convergence() {
  std::vector<double> deviations;
  for (double w_over_W : {0.1, 0.03, 0.01}) {
    const ModelParams p = ratio(0.5, 1.0 / w_over_W);
    const double fd =
        qfi_finite_difference([](const ModelParams& q) { return rabi_ground_state(q, 40); }, p).value;
    deviations.push_back(gap(fd, qfi_single_particle_analytic(p).value));
  }
  const bool ok = deviations[1] < deviations[0] && deviations[2] < deviations[1];
  return {ok, "deviations " + fmt(deviations[0]) + ", " + fmt(deviations[1]) + ", " + fmt(deviations[2]) +
                  " (strictly decreasing)"};
}

Outcome mle_efficiency() {
  const ModelParams p = ratio(0.7, 100.0);
  const Grid1D g = default_grid_for_params(p, 0, kDefaultGridPoints, Quadrature::Position, 0.2);
  const EstimationRun run = mle_monte_carlo(single_particle_density_provider(p, 0, g), p.Omega, 100000, 2024);
  const double ratio_to_crb = run.empirical_variance / run.crb;
  return {std::abs(ratio_to_crb - 1.0) < 0.1,
          "variance/CRB " + fmt(ratio_to_crb) + " over " + std::to_string(run.repetitions) +
              " repetitions (tol 10%)"};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  bool same = true;
  std::vector<std::string> checked;
  for (const std::string scenario : {"fig2", "scaling", "thermal", "limits"}) {
    std::vector<std::string> over = {"numerics.seed=99"};
    if (scenario == "fig2") over.push_back("sweep.points=4");
    const RunConfig cfg = resolve_config(scenario, nlohmann::json(), over);
    const ScenarioOutput a = run_scenario(cfg);
    const ScenarioOutput b = run_scenario(cfg);
    same = same && a.primary == b.primary && a.summary_json == b.summary_json;
    checked.push_back(scenario);
  }
  std::string detail = "in-process outputs identical: " + std::string(same ? "yes" : "no");
  if (!cli.empty()) {
    const fs::path dir = fs::temp_directory_path() / ("socmetro_det_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    bool cli_same = true;
    for (const std::string scenario : {"fig2", "thermal"}) {
      for (const char* run : {"a", "b"}) {
        const std::string cmd = "\"" + cli + "\" " + scenario +
                                " --seed 7 --param sweep.points=4 --out \"" +
                                (dir / (scenario + "_" + run + ".csv")).string() + "\" 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) cli_same = false;
      }
      cli_same = cli_same &&
                 slurp(dir / (scenario + "_a.csv")) == slurp(dir / (scenario + "_b.csv")) &&
                 slurp(dir / (scenario + "_a.json")) == slurp(dir / (scenario + "_b.json"));
    }
    fs::remove_all(dir);
    same = same && cli_same;
    detail += ", CLI CSV/JSON byte-identical: " + std::string(cli_same ? "yes" : "no");
  }
  return {same, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "path to the soc-metrology executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle triangle (single particle)", oracle_triangle},
      {"two-fermion CFI equals QFI", fig2_reproduction},
      {"cubic cancellation", cubic_cancellation},
      {"scaling exponents", scaling_exponents},
      {"tensor-product oracle", tensor_oracle},
      {"thermal closed form", thermal},
      {"Tonks-Girardeau equivalence", tg_equivalence},
      {"effective-theory convergence", effective_convergence},
      {"MLE efficiency", mle_efficiency},
      {"determinism", [&] { return determinism(cli); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2zu %-36s %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
