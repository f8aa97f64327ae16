#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "socmetro/error.hpp"
#include "socmetro/measurement.hpp"

using namespace socmetro;

namespace {

double mean_of(const MeasurementDistribution& d, int power) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.grid.n_points(); ++i)
    s += std::pow(d.grid.point(i), power) * d.probabilities[i];
  return s;
}

ModelParams at(double r, double Omega = 100.0) { return ModelParams::from_ratio(r, 1.0, Omega); }

}  // namespace

TEST_CASE("grid contract") {
  CHECK_THROWS_AS(Grid1D(-1.0, 1.0, 63), InvalidArgument);
  CHECK_THROWS_AS(Grid1D(1.0, -1.0, 128), InvalidArgument);
  const Grid1D g = Grid1D::symmetric(5.0, 101);
  CHECK(g.spacing() == doctest::Approx(0.1));
  CHECK(g.point(50) == doctest::Approx(0.0));
  CHECK(g.half_coverage() == 5.0);
  CHECK_NOTHROW(g.check_coverage(5.0 / 6.0));
  CHECK_THROWS_AS(g.check_coverage(1.0), DomainError);

  const Grid1D d = default_grid(0.4, 3, 1.0, 1.0);
  CHECK(d.n_points() == kDefaultGridPoints);
  CHECK(d.half_coverage() == doctest::Approx(6.0 * std::exp(0.4) * std::sqrt(3.5)));
}

TEST_CASE("single-particle densities") {
  const ModelParams p = at(0.0);
  const Grid1D g = default_grid(0.0, 1, 1.0, 1.0);
  const auto ground = single_particle_density({0, 0.0}, g, p);
  CHECK(mean_of(ground, 2) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(mean_of(ground, 1)) < 1e-14);

  const auto first = single_particle_density({1, 0.0}, Grid1D::symmetric(g.half_coverage(), 1025), p);
  CHECK(first.probabilities[512] < 1e-30);
  CHECK(first.raw_mass == doctest::Approx(1.0).epsilon(1e-8));

  const auto sq = single_particle_density({0, 0.4}, default_grid(0.4, 0, 1.0, 1.0), p);
  CHECK(mean_of(sq, 2) == doctest::Approx(std::exp(0.8) / 2.0).epsilon(1e-7));
  CHECK(mean_of(sq, 2) == doctest::Approx(1.1128).epsilon(1e-4));

  double total = 0.0;
  for (double v : sq.probabilities) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(std::abs(total - 1.0) < 1e-8);
  CHECK_THROWS_AS(single_particle_density({0, 1.0}, Grid1D::symmetric(3.0, 128), p), DomainError);
}

TEST_CASE("pair correlation density") {
  const ModelParams p = at(0.6);
  const double xi = squeeze_parameter(p.k, critical_coupling(p));
  const Grid1D g = default_grid(xi, 1, 1.0, 1.0, 128);
  const auto f = pair_correlation_density(ManyBodyProbe::ground(2, Statistics::Fermionic, xi), g, p);
  const auto tg = pair_correlation_density(ManyBodyProbe::ground(2, Statistics::TonksGirardeau, xi), g, p);
  const std::size_t n = g.n_points();
  double max_diag = 0.0, max_asym = 0.0, max_tg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, f.density(i, i));
    for (std::size_t j = 0; j < n; ++j) {
      max_asym = std::max(max_asym, std::abs(f.density(i, j) - f.density(j, i)));
      max_tg = std::max(max_tg, std::abs(f.density(i, j) - tg.density(i, j)));
    }
  }
  CHECK(max_diag < 1e-20);
  CHECK(max_asym == 0.0);
  CHECK(max_tg < 1e-12);
  CHECK(f.raw_mass == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(pair_correlation_density(ManyBodyProbe::ground(3, Statistics::Fermionic, xi), g, p),
                  Unsupported);
  CHECK_THROWS_AS(
      pair_correlation_density(ManyBodyProbe::ground(2, Statistics::SymmetricBosonic, xi), g, p),
      Unsupported);
}

TEST_CASE("classical Fisher information") {
  const ModelParams p0 = at(0.0);
  const Grid1D g0 = default_grid_for_params(p0, 0);
  CHECK(classical_fisher_information(single_particle_density_provider(p0, 0, g0), p0.Omega).value <
        1e-20);

  for (double r : {0.3, 0.7, 0.9}) {
    CAPTURE(r);
    const ModelParams p = at(r);
    const double qfi = qfi_single_particle_analytic(p).value;
    const Grid1D g = default_grid_for_params(p, 0);
    const auto f = classical_fisher_information(single_particle_density_provider(p, 0, g), p.Omega);
    CHECK(f.value <= qfi * 1.01);
    CHECK(oracle::relative_gap(f.value, qfi) < 0.01);
    CHECK(f.method == FisherMethod::Classical);
    CHECK(f.metadata.count("excluded_mass") == 1);

    const Grid1D g2 = default_grid_for_params(p, 0, 2 * kDefaultGridPoints);
    const auto f2 = classical_fisher_information(single_particle_density_provider(p, 0, g2), p.Omega);
    CHECK(oracle::relative_gap(f.value, f2.value) < 1e-3);
  }

  const ModelParams p7 = at(0.7);
  const auto pos = classical_fisher_information(
      single_particle_density_provider(p7, 0, default_grid_for_params(p7, 0)), p7.Omega);
  const auto mom = classical_fisher_information(
      single_particle_density_provider(p7, 0, default_grid_for_params(p7, 0, kDefaultGridPoints, Quadrature::Momentum),
                                       Quadrature::Momentum),
      p7.Omega);
  CHECK(oracle::relative_gap(pos.value, mom.value) < 0.01);

  // Two fermions: position CFI equals the N^2 QFI.
  ModelParams p2 = at(0.5);
  p2.n_atoms = 2;
  const Grid1D gp = default_grid_for_params(p2, 1, 256);
  const auto pair = classical_fisher_information(pair_density_provider(p2, Statistics::Fermionic, gp), p2.Omega);
  CHECK(oracle::relative_gap(pair.value, qfi_fermionic_analytic(p2).value) < 0.01);
}

TEST_CASE("grid QFI of real wavefunctions") {
  const ModelParams p = at(0.5);
  const auto one = grid_qfi_real_wavefunction(
      single_particle_wavefunction_provider(p, 0, default_grid_for_params(p, 0)), p.Omega);
  CHECK(oracle::relative_gap(one.value, qfi_single_particle_analytic(p).value) < 0.01);
  CHECK(std::abs(one.metadata.at("normalization_projection")) < 1e-8);

  ModelParams p2 = p;
  p2.n_atoms = 2;
  const Grid1D g = default_grid_for_params(p2, 1, 256);
  const auto f = grid_qfi_real_wavefunction(pair_wavefunction_provider(p2, Statistics::Fermionic, g), p2.Omega);
  const auto tg = grid_qfi_real_wavefunction(pair_wavefunction_provider(p2, Statistics::TonksGirardeau, g), p2.Omega);
  CHECK(oracle::relative_gap(f.value, tg.value) < 1e-8);
  CHECK(oracle::relative_gap(f.value, qfi_fermionic_analytic(p2).value) < 0.01);
  CHECK(std::abs(f.metadata.at("normalization_projection")) < 1e-8);

  const WavefunctionProvider complex_wf = [](double) {
    GridWavefunction wf;
    wf.values.assign(64, cplx(0.1, 0.01));
    wf.cell = 1.0;
    return wf;
  };
  CHECK_THROWS_AS(grid_qfi_real_wavefunction(complex_wf, 1.0), InvalidArgument);
}

TEST_CASE("maximum-likelihood harness") {
  const ModelParams p = at(0.7);
  const Grid1D g = default_grid_for_params(p, 0, 512, Quadrature::Position, 0.45);
  const auto provider = single_particle_density_provider(p, 0, g);

  MleOptions opts;
  opts.repetitions = 64;
  const EstimationRun a = mle_monte_carlo(provider, p.Omega, 2000, 11, opts);
  const EstimationRun b = mle_monte_carlo(provider, p.Omega, 2000, 11, opts);
  CHECK(a.estimates == b.estimates);
  const EstimationRun c = mle_monte_carlo(provider, p.Omega, 2000, 12, opts);
  CHECK(a.estimates != c.estimates);
  CHECK(a.crb == doctest::Approx(1.0 / (2000 * a.fisher_information)));

  // The bias shrinks with the sample count and stays inside the Monte Carlo error.
  double previous_bound = std::numeric_limits<double>::infinity();
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    const EstimationRun run = mle_monte_carlo(provider, p.Omega, n, 5, opts);
    const double mc_error = std::sqrt(run.crb / static_cast<double>(run.repetitions));
    CHECK(std::abs(run.mean - p.Omega) < 5.0 * mc_error);
    CHECK(5.0 * mc_error < previous_bound);
    previous_bound = 5.0 * mc_error;
  }

  CHECK_THROWS_AS(mle_monte_carlo(provider, p.Omega, 99, 1, opts), InvalidArgument);
  MleOptions off = opts;
  off.bracket = std::make_pair(p.Omega * 1.05, p.Omega * 1.1);
  CHECK_THROWS_AS(mle_monte_carlo(provider, p.Omega, 1000, 1, off), EstimationError);
  const ModelParams p0 = at(0.0);
  CHECK_THROWS_AS(mle_monte_carlo(single_particle_density_provider(p0, 0, default_grid_for_params(p0, 0)),
                                  p0.Omega, 1000, 1, opts),
                  EstimationError);
}
