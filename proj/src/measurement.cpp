#include "socmetro/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

#include "socmetro/error.hpp"
#include "socmetro/parallel.hpp"

namespace socmetro {

namespace {

double xi_at(const ModelParams& base, double Omega) {
  const ModelParams p = base.with_Omega(Omega);
  p.validate();
  return squeeze_parameter(p.k, critical_coupling(p));
}

// Real mode functions e^{-+xi/2} phi_n(e^{-+xi} x) sampled on the grid, one
// column per requested mode. Momentum-space modes drop their (-i)^n phase.
Eigen::MatrixXd mode_table(const std::vector<std::size_t>& modes, double xi, const Grid1D& grid,
                           const ModelParams& params, Quadrature quadrature) {
  const std::size_t n_max = *std::max_element(modes.begin(), modes.end());
  // Position modes are stretched by e^{xi}; momentum modes compressed.
  const double stretch = quadrature == Quadrature::Position ? std::exp(-xi) : std::exp(xi);
  const double mass = quadrature == Quadrature::Position ? params.mass
                                                         : 1.0 / (params.mass * params.omega);
  const double omega = quadrature == Quadrature::Position ? params.omega : 1.0;
  Eigen::MatrixXd table(static_cast<Eigen::Index>(grid.n_points()),
                        static_cast<Eigen::Index>(modes.size()));
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const Eigen::VectorXd phi =
        oscillator_wavefunctions(n_max, stretch * grid.point(i), mass, omega);
    for (std::size_t c = 0; c < modes.size(); ++c)
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          std::sqrt(stretch) * phi(static_cast<Eigen::Index>(modes[c]));
  }
  return table;
}

void check_probe_coverage(const ManyBodyProbe& probe, const Grid1D& grid,
                          const ModelParams& params, Quadrature quadrature) {
  for (const std::size_t n : probe.modes)
    grid.check_coverage(quadrature_sigma({n, probe.xi}, params.mass, params.omega, quadrature));
}

void require_pair(const ManyBodyProbe& probe) {
  probe.validate();
  if (probe.n_atoms != 2)
    throw Unsupported("pair densities are implemented for N = 2 only");
  if (probe.statistics == Statistics::SymmetricBosonic)
    throw Unsupported("pair densities are implemented for fermionic and Tonks-Girardeau probes");
}

// (phi_a(x1) phi_b(x2) - phi_b(x1) phi_a(x2)) / sqrt(2) on the product grid.
std::vector<double> pair_determinant(const Eigen::MatrixXd& table, std::size_t n_points) {
  std::vector<double> psi(n_points * n_points);
  const double norm = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n_points; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n_points; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      psi[i * n_points + j] = norm * (table(ii, 0) * table(jj, 1) - table(ii, 1) * table(jj, 0));
    }
  }
  return psi;
}

MeasurementDistribution finish(const Grid1D& grid, std::size_t rank, std::vector<double> p,
                               double bin_volume) {
  double mass = 0.0;
  for (const double v : p) mass += v;
  if (!(mass > 0.0)) throw NumericalError("distribution has zero mass on the grid");
  for (double& v : p) v /= mass;
  return MeasurementDistribution{grid, rank, std::move(p), bin_volume, mass};
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double log_likelihood(const DistributionProvider& provider, double Omega,
                      const std::vector<std::pair<std::size_t, std::size_t>>& counts) {
  const MeasurementDistribution dist = provider(Omega);
  double ll = 0.0;
  for (const auto& [bin, count] : counts)
    ll += static_cast<double>(count) * std::log(std::max(dist.probabilities[bin], 1e-300));
  return ll;
}

}  // namespace

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (n_points_ < 64) throw InvalidArgument("Grid1D: n_points must be at least 64");
  if (!(x_max_ > x_min_) || !std::isfinite(x_min_) || !std::isfinite(x_max_))
    throw InvalidArgument("Grid1D: x_max must exceed x_min");
}

Grid1D Grid1D::symmetric(double half_width, std::size_t n_points) {
  return {-half_width, half_width, n_points};
}

double Grid1D::half_coverage() const { return std::min(-x_min_, x_max_); }

void Grid1D::check_coverage(double sigma) const {
  if (half_coverage() < kCoverageSigmas * sigma * (1.0 - 1e-12))
    throw DomainError("grid covers " + std::to_string(half_coverage() / sigma) +
                      " standard deviations; at least 6 required");
}

double quadrature_sigma(const SqueezedFockState& state, double mass, double omega,
                        Quadrature quadrature) {
  state.validate();
  const double level = std::sqrt(static_cast<double>(state.n) + 0.5);
  if (quadrature == Quadrature::Position)
    return std::exp(state.xi) * level / std::sqrt(mass * omega);
  return std::exp(-state.xi) * level * std::sqrt(mass * omega);
}

Grid1D default_grid(double xi, std::size_t n_max, double mass, double omega,
                    std::size_t n_points, Quadrature quadrature) {
  const double sigma = quadrature_sigma({n_max, xi}, mass, omega, quadrature);
  return Grid1D::symmetric(kCoverageSigmas * sigma, n_points);
}

Grid1D default_grid_for_params(const ModelParams& params, std::size_t n_max,
                               std::size_t n_points, Quadrature quadrature,
                               double omega_margin) {
  if (!(omega_margin >= 0.0 && omega_margin < 1.0))
    throw InvalidArgument("default_grid_for_params: omega_margin must lie in [0, 1)");
  // Position width grows with xi (smaller Omega); momentum width is largest at xi = 0.
  const double xi = quadrature == Quadrature::Position
                        ? xi_at(params, params.Omega * (1.0 - omega_margin))
                        : 0.0;
  return default_grid(xi, n_max, params.mass, params.omega, n_points, quadrature);
}

MeasurementDistribution single_particle_density(const SqueezedFockState& state,
                                                const Grid1D& grid, const ModelParams& params,
                                                Quadrature quadrature) {
  grid.check_coverage(quadrature_sigma(state, params.mass, params.omega, quadrature));
  const Eigen::MatrixXd table = mode_table({state.n}, state.xi, grid, params, quadrature);
  const double dx = grid.spacing();
  std::vector<double> p(grid.n_points());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = table(static_cast<Eigen::Index>(i), 0);
    p[i] = v * v * dx;
  }
  return finish(grid, 1, std::move(p), dx);
}

MeasurementDistribution pair_correlation_density(const ManyBodyProbe& probe,
                                                 const Grid1D& grid, const ModelParams& params,
                                                 Quadrature quadrature) {
  require_pair(probe);
  check_probe_coverage(probe, grid, params, quadrature);
  const Eigen::MatrixXd table = mode_table(probe.modes, probe.xi, grid, params, quadrature);
  std::vector<double> p = pair_determinant(table, grid.n_points());
  const double cell = grid.spacing() * grid.spacing();
  for (double& v : p) v = v * v * cell;
  return finish(grid, 2, std::move(p), cell);
}

FisherResult classical_fisher_information(const DistributionProvider& provider, double Omega,
                                          double dOmega) {
  if (!(Omega > 0.0)) throw InvalidArgument("classical_fisher_information: Omega must be positive");
  const double h = dOmega > 0.0 ? dOmega : 1e-4 * Omega;
  const MeasurementDistribution centre = provider(Omega);
  double excluded = 0.0;
  for (const double p : centre.probabilities)
    if (p < kExcludedProbability) excluded += p;

  auto fisher_at = [&](double step) {
    const MeasurementDistribution plus = provider(Omega + step);
    const MeasurementDistribution minus = provider(Omega - step);
    if (plus.probabilities.size() != centre.probabilities.size() ||
        minus.probabilities.size() != centre.probabilities.size())
      throw InvalidArgument("classical_fisher_information: provider changed the outcome space");
    double f = 0.0;
    for (std::size_t i = 0; i < centre.probabilities.size(); ++i) {
      const double p = centre.probabilities[i];
      if (p < kExcludedProbability) continue;
      const double dp = (plus.probabilities[i] - minus.probabilities[i]) / (2.0 * step);
      f += dp * dp / p;
    }
    return f;
  };
  const double fine = fisher_at(h);
  const double coarse = fisher_at(2.0 * h);

  FisherResult out;
  out.value = fine;
  out.method = FisherMethod::Classical;
  out.metadata["Omega"] = Omega;
  out.metadata["dOmega"] = h;
  out.metadata["richardson_rel_diff"] = relative_gap(fine, coarse);
  out.metadata["excluded_mass"] = excluded;
  out.metadata["n_points"] = static_cast<double>(centre.grid.n_points());
  out.metadata["raw_mass"] = centre.raw_mass;
  if (excluded > 1e-6) out.notes.emplace_back("accuracy warning: excluded mass above 1e-6");
  if (relative_gap(fine, coarse) > 0.01)
    out.notes.emplace_back("step too large: Richardson disagreement > 1%");
  return out;
}

FisherResult grid_qfi_real_wavefunction(const WavefunctionProvider& provider, double Omega,
                                        double dOmega) {
  if (!(Omega > 0.0)) throw InvalidArgument("grid_qfi_real_wavefunction: Omega must be positive");
  const double h = dOmega > 0.0 ? dOmega : 1e-4 * Omega;
  auto real_values = [&](double at) {
    const GridWavefunction wf = provider(at);
    std::vector<double> re(wf.values.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
      if (std::abs(wf.values[i].imag()) > 1e-10)
        throw InvalidArgument("grid_qfi_real_wavefunction: wavefunction is not real");
      re[i] = wf.values[i].real();
    }
    return std::make_pair(std::move(re), wf.cell);
  };
  const auto [centre, cell] = real_values(Omega);
  auto qfi_at = [&](double step) {
    const auto plus = real_values(Omega + step).first;
    const auto minus = real_values(Omega - step).first;
    if (plus.size() != centre.size() || minus.size() != centre.size())
      throw InvalidArgument("grid_qfi_real_wavefunction: provider changed the grid");
    double norm_d = 0.0;
    double proj = 0.0;
    for (std::size_t i = 0; i < centre.size(); ++i) {
      const double d = (plus[i] - minus[i]) / (2.0 * step);
      norm_d += d * d;
      proj += centre[i] * d;
    }
    norm_d *= cell;
    proj *= cell;
    return std::make_pair(4.0 * (norm_d - proj * proj), proj);
  };
  const auto [fine, projection] = qfi_at(h);
  const double coarse = qfi_at(2.0 * h).first;

  FisherResult out;
  out.value = std::max(0.0, fine);
  out.method = FisherMethod::Grid;
  out.metadata["Omega"] = Omega;
  out.metadata["dOmega"] = h;
  out.metadata["normalization_projection"] = projection;
  out.metadata["richardson_rel_diff"] = relative_gap(fine, coarse);
  if (relative_gap(fine, coarse) > 0.01)
    out.notes.emplace_back("step too large: Richardson disagreement > 1%");
  return out;
}

GridWavefunction single_particle_wavefunction(const SqueezedFockState& state,
                                              const Grid1D& grid, const ModelParams& params) {
  grid.check_coverage(quadrature_sigma(state, params.mass, params.omega));
  const Eigen::MatrixXd table = mode_table({state.n}, state.xi, grid, params, Quadrature::Position);
  GridWavefunction wf;
  wf.cell = grid.spacing();
  wf.values.resize(grid.n_points());
  for (std::size_t i = 0; i < grid.n_points(); ++i)
    wf.values[i] = table(static_cast<Eigen::Index>(i), 0);
  return wf;
}

GridWavefunction pair_wavefunction(const ManyBodyProbe& probe, const Grid1D& grid,
                                   const ModelParams& params) {
  require_pair(probe);
  check_probe_coverage(probe, grid, params, Quadrature::Position);
  const Eigen::MatrixXd table = mode_table(probe.modes, probe.xi, grid, params, Quadrature::Position);
  const std::vector<double> psi = pair_determinant(table, grid.n_points());
  const bool modulus = probe.statistics == Statistics::TonksGirardeau;
  GridWavefunction wf;
  wf.cell = grid.spacing() * grid.spacing();
  wf.values.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) wf.values[i] = modulus ? std::abs(psi[i]) : psi[i];
  return wf;
}

DistributionProvider single_particle_density_provider(const ModelParams& base, std::size_t n,
                                                      Grid1D grid, Quadrature quadrature) {
  return [base, n, grid, quadrature](double Omega) {
    return single_particle_density({n, xi_at(base, Omega)}, grid, base.with_Omega(Omega),
                                   quadrature);
  };
}

DistributionProvider pair_density_provider(const ModelParams& base, Statistics statistics,
                                           Grid1D grid, Quadrature quadrature) {
  return [base, statistics, grid, quadrature](double Omega) {
    const ManyBodyProbe probe = ManyBodyProbe::ground(2, statistics, xi_at(base, Omega));
    return pair_correlation_density(probe, grid, base.with_Omega(Omega), quadrature);
  };
}

WavefunctionProvider single_particle_wavefunction_provider(const ModelParams& base,
                                                           std::size_t n, Grid1D grid) {
  return [base, n, grid](double Omega) {
    return single_particle_wavefunction({n, xi_at(base, Omega)}, grid, base.with_Omega(Omega));
  };
}

WavefunctionProvider pair_wavefunction_provider(const ModelParams& base, Statistics statistics,
                                                Grid1D grid) {
  return [base, statistics, grid](double Omega) {
    const ManyBodyProbe probe = ManyBodyProbe::ground(2, statistics, xi_at(base, Omega));
    return pair_wavefunction(probe, grid, base.with_Omega(Omega));
  };
}

EstimationRun mle_monte_carlo(const DistributionProvider& provider, double true_Omega,
                              std::size_t sample_count, std::uint64_t seed,
                              const MleOptions& options) {
  if (sample_count < 100) throw InvalidArgument("mle_monte_carlo: sample_count must be >= 100");
  if (options.repetitions < 2) throw InvalidArgument("mle_monte_carlo: need at least 2 repetitions");

  const MeasurementDistribution truth = provider(true_Omega);
  const double fisher = classical_fisher_information(provider, true_Omega, options.dOmega).value;
  if (!(fisher > 0.0))
    throw EstimationError("mle_monte_carlo: zero Fisher information, Omega is not identifiable");
  const double crb = 1.0 / (static_cast<double>(sample_count) * fisher);

  double lo = true_Omega - 10.0 * std::sqrt(crb);
  double hi = true_Omega + 10.0 * std::sqrt(crb);
  if (options.bracket) {
    std::tie(lo, hi) = *options.bracket;
  } else {
    // Pull each default edge toward true_Omega until the provider accepts it
    // (normal phase, grid coverage).
    auto accepted = [&](double at) {
      if (!(at > 0.0)) return false;
      try {
        provider(at);
        return true;
      } catch (const Error&) {
        return false;
      }
    };
    for (int i = 0; i < 60 && !accepted(lo); ++i) lo = 0.5 * (lo + true_Omega);
    for (int i = 0; i < 60 && !accepted(hi); ++i) hi = 0.5 * (hi + true_Omega);
  }
  if (!(hi > lo) || !(lo > 0.0))
    throw EstimationError("mle_monte_carlo: invalid Omega bracket");

  std::vector<double> cdf(truth.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += truth.probabilities[i]);

  EstimationRun run;
  run.true_Omega = true_Omega;
  run.sample_count = sample_count;
  run.repetitions = options.repetitions;
  run.seed = seed;
  run.fisher_information = fisher;
  run.crb = crb;
  run.estimates.assign(options.repetitions, 0.0);

  parallel_for(options.repetitions, [&](std::size_t rep) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(rep)));
    std::vector<std::size_t> histogram(cdf.size(), 0);
    for (std::size_t s = 0; s < sample_count; ++s) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const auto bin = static_cast<std::size_t>(
          std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
      ++histogram[bin];
    }
    std::vector<std::pair<std::size_t, std::size_t>> counts;
    for (std::size_t b = 0; b < histogram.size(); ++b)
      if (histogram[b] > 0) counts.emplace_back(b, histogram[b]);

    // Golden-section search for the log-likelihood maximum.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = log_likelihood(provider, c, counts);
    double fd = log_likelihood(provider, d, counts);
    const double tol = 1e-10 * (hi - lo);
    while (b - a > tol) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = log_likelihood(provider, c, counts);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = log_likelihood(provider, d, counts);
      }
    }
    const double estimate = 0.5 * (a + b);
    if (estimate - lo < 1e-6 * (hi - lo) || hi - estimate < 1e-6 * (hi - lo))
      throw EstimationError("mle_monte_carlo: likelihood maximum not bracketed");
    run.estimates[rep] = estimate;
  });

  double sum = 0.0;
  for (const double e : run.estimates) sum += e;
  run.mean = sum / static_cast<double>(run.estimates.size());
  double ss = 0.0;
  for (const double e : run.estimates) ss += (e - run.mean) * (e - run.mean);
  run.empirical_variance = ss / static_cast<double>(run.estimates.size() - 1);
  return run;
}

}  // namespace socmetro
