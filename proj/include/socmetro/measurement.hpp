#pragma once

// Position/momentum measurement statistics, classical Fisher information,
// grid QFI for real wavefunctions and a maximum-likelihood Monte Carlo
// harness.
//
// Distributions are binned on a uniform grid with bin width equal to the grid
// spacing: p_i = density(x_i) dx (dx^2 for pairs), renormalized to sum 1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "socmetro/fockcore.hpp"
#include "socmetro/metrology.hpp"
#include "socmetro/models.hpp"

namespace socmetro {

class Grid1D {
 public:
  // Throws InvalidArgument for n_points < 64 or an empty interval.
  Grid1D(double x_min, double x_max, std::size_t n_points);

  static Grid1D symmetric(double half_width, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n_points() const { return n_points_; }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(n_points_ - 1); }
  double point(std::size_t i) const { return x_min_ + spacing() * static_cast<double>(i); }
  // Distance from the origin to the nearer edge.
  double half_coverage() const;

  // Throws DomainError unless the grid covers 6 sigma on both sides.
  void check_coverage(double sigma) const;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
};

inline constexpr std::size_t kDefaultGridPoints = 1024;
inline constexpr double kCoverageSigmas = 6.0;

enum class Quadrature { Position, Momentum };

// Standard deviation of S(xi)|n> in the chosen quadrature.
double quadrature_sigma(const SqueezedFockState& state, double mass, double omega,
                        Quadrature quadrature = Quadrature::Position);

// [-L, L] with L = 6 e^{xi} sqrt(n_max + 1/2) / sqrt(m omega) (position) or
// the momentum analogue.
Grid1D default_grid(double xi, std::size_t n_max, double mass, double omega,
                    std::size_t n_points = kDefaultGridPoints,
                    Quadrature quadrature = Quadrature::Position);

// Grid wide enough for every Omega >= (1 - omega_margin) Omega at fixed k,
// so finite-difference and likelihood evaluations stay covered.
Grid1D default_grid_for_params(const ModelParams& params, std::size_t n_max,
                               std::size_t n_points = kDefaultGridPoints,
                               Quadrature quadrature = Quadrature::Position,
                               double omega_margin = 0.01);

struct MeasurementDistribution {
  Grid1D grid;
  std::size_t rank = 1;  // 1: p(x_i); 2: p(x_i, x_j) stored row-major
  std::vector<double> probabilities;
  double bin_volume = 0.0;
  double raw_mass = 0.0;  // quadrature mass before renormalization

  // Probability density at a bin (probability / bin volume).
  double density(std::size_t i) const { return probabilities[i] / bin_volume; }
  double density(std::size_t i, std::size_t j) const {
    return probabilities[i * grid.n_points() + j] / bin_volume;
  }
};

MeasurementDistribution single_particle_density(const SqueezedFockState& state,
                                                const Grid1D& grid, const ModelParams& params,
                                                Quadrature quadrature = Quadrature::Position);

// |Psi(x1, x2)|^2 from the 2x2 determinant of squeezed modes. Fermionic and
// Tonks-Girardeau probes give the same density. Throws Unsupported for N != 2
// or bosonic statistics.
MeasurementDistribution pair_correlation_density(const ManyBodyProbe& probe,
                                                 const Grid1D& grid, const ModelParams& params,
                                                 Quadrature quadrature = Quadrature::Position);

using DistributionProvider = std::function<MeasurementDistribution(double Omega)>;

inline constexpr double kExcludedProbability = 1e-14;

// F = sum_i (dp_i/dOmega)^2 / p_i by central differences. Bins with
// p < 1e-14 are skipped and their mass reported; dOmega == 0 selects
// 1e-4 Omega.
FisherResult classical_fisher_information(const DistributionProvider& provider, double Omega,
                                          double dOmega = 0.0);

struct GridWavefunction {
  std::vector<cplx> values;
  double cell = 0.0;  // quadrature weight per grid point
};

using WavefunctionProvider = std::function<GridWavefunction(double Omega)>;

// I = 4 [sum (d psi)^2 w - (sum psi d psi w)^2]. Throws InvalidArgument if
// any imaginary part exceeds 1e-10.
FisherResult grid_qfi_real_wavefunction(const WavefunctionProvider& provider, double Omega,
                                        double dOmega = 0.0);

GridWavefunction single_particle_wavefunction(const SqueezedFockState& state,
                                              const Grid1D& grid, const ModelParams& params);

// Normalized 2x2 Slater determinant on the product grid; Tonks-Girardeau
// returns its modulus.
GridWavefunction pair_wavefunction(const ManyBodyProbe& probe, const Grid1D& grid,
                                   const ModelParams& params);

// Providers at fixed k and varying Omega (xi follows k / k_c(Omega)).
DistributionProvider single_particle_density_provider(const ModelParams& base, std::size_t n,
                                                      Grid1D grid,
                                                      Quadrature quadrature = Quadrature::Position);
DistributionProvider pair_density_provider(const ModelParams& base, Statistics statistics,
                                           Grid1D grid,
                                           Quadrature quadrature = Quadrature::Position);
WavefunctionProvider single_particle_wavefunction_provider(const ModelParams& base,
                                                           std::size_t n, Grid1D grid);
WavefunctionProvider pair_wavefunction_provider(const ModelParams& base, Statistics statistics,
                                                Grid1D grid);

struct EstimationRun {
  double true_Omega = 0.0;
  std::size_t sample_count = 0;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;
  double mean = 0.0;
  double empirical_variance = 0.0;
  double fisher_information = 0.0;  // per sample
  double crb = 0.0;                 // 1 / (sample_count F)
};

struct MleOptions {
  std::size_t repetitions = 2000;
  // Omega search interval; default true_Omega +- 10 sqrt(CRB), each edge pulled
  // toward true_Omega until the provider accepts it.
  std::optional<std::pair<double, double>> bracket;
  double dOmega = 0.0;
};

// Draws sample_count outcomes per repetition from the binned distribution at
// true_Omega (inverse CDF), maximizes the log-likelihood by golden-section
// search and reports the spread of the estimates against the Cramer-Rao
// bound. Throws EstimationError if a maximum sits on the bracket edge.
EstimationRun mle_monte_carlo(const DistributionProvider& provider, double true_Omega,
                              std::size_t sample_count, std::uint64_t seed,
                              const MleOptions& options = {});

}  // namespace socmetro
