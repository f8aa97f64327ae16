#pragma once

// Quantum Fisher information for the frequency Omega.
//
// Convention: I = 4 (<d psi|d psi> - |<psi|d psi>|^2) = 4 Var(sum_j h_j)
// everywhere, so the derivative and generator-variance routes coincide.
// Closed forms are written with
//   c = r^2 / (8 Omega (1 - r^2)),   r = k / k_c,
// the magnitude of the single-particle generator h = -i c (a^+^2 - a^2).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socmetro/fockcore.hpp"
#include "socmetro/models.hpp"

namespace socmetro {

enum class FisherMethod {
  Analytic,
  GeneratorVariance,
  FiniteDifference,
  MixedSpectral,
  Grid,
  Classical,
};

std::string_view to_string(FisherMethod method);

struct FisherResult {
  double value = 0.0;
  FisherMethod method = FisherMethod::Analytic;
  // Parameter echo and numerical settings (cutoff, step, ...).
  std::map<std::string, double> metadata;
  std::vector<std::string> notes;
  // value / T^2 when a sweep time is attached.
  std::optional<double> time_normalized;
};

enum class Statistics { Fermionic, SymmetricBosonic, TonksGirardeau };

std::string_view to_string(Statistics statistics);

struct ManyBodyProbe {
  std::size_t n_atoms = 1;
  Statistics statistics = Statistics::Fermionic;
  std::vector<std::size_t> modes;  // occupied single-particle modes
  double xi = 0.0;

  // Modes 0..N-1.
  static ManyBodyProbe ground(std::size_t n_atoms, Statistics statistics, double xi = 0.0);

  // Throws InvalidArgument on a repeated mode or a size mismatch.
  void validate() const;
  std::size_t max_mode() const;
};

double generator_coefficient(const ModelParams& params);

// r^4 / (Omega^2 (1 - r^2)^2); every analytic QFI is a rational multiple.
double qfi_prefactor(const ModelParams& params);

FockOperator local_generator(const ModelParams& params, std::size_t cutoff);

FisherResult qfi_single_particle_analytic(const ModelParams& params);
FisherResult qfi_fermionic_analytic(const ModelParams& params);

// Diagonal (h_j^2) and exchange (h_j h_k) contributions, also kept as exact
// integer numerators over 24: N(N^2+2) and -(N-2)(N-1)N.
struct FermionicContributions {
  double first = 0.0;
  double second = 0.0;
  std::int64_t first_numerator = 0;
  std::int64_t second_numerator = 0;
};

FermionicContributions qfi_fermionic_contributions(const ModelParams& params);

// Exact polynomial (N^3/2 - 6N^2/8 + N) / 6 times the prefactor.
FisherResult qfi_bosonic_excited_analytic(const ModelParams& params);

// Large-N form gamma^2 omega^2 r^4 N^3 T^2 / (6 Omega^2 (1 - r^2)) with T the
// sweep time to k_f. Tends to half the exact polynomial value.
FisherResult qfi_bosonic_excited_asymptotic(const ModelParams& params, double k_f);

// <n|h^2|n> from the generator matrix elements, next to the per-mode value
// as printed in the closed-form derivation (smaller by a factor 2).
struct PerModeMoment {
  double derived = 0.0;
  double printed = 0.0;
};

PerModeMoment per_mode_second_moment(const ModelParams& params, std::size_t n);

enum class VarianceRoute { Combinatorial, TensorProduct };

inline constexpr std::size_t kMaxCombinatorialAtoms = 12;
inline constexpr std::size_t kMaxTensorAtoms = 4;

// 4 Var(sum_j h_j) on the probe. The combinatorial route uses one-body
// matrix elements over occupied mode pairs; the tensor route builds the
// (anti)symmetrized N-particle vector explicitly. Tonks-Girardeau probes use
// the fermionic determinant. cutoff == 0 picks max_mode + 3.
FisherResult qfi_collective_variance(const ManyBodyProbe& probe, const ModelParams& params,
                                     std::size_t cutoff = 0,
                                     VarianceRoute route = VarianceRoute::Combinatorial);

using StateProvider = std::function<StateVector(const ModelParams&)>;

// Central differences in Omega at fixed k. dOmega == 0 selects 1e-4 Omega.
// Also evaluates at twice the step; a disagreement above 1% is noted as an
// advisory. Throws NumericalError if neighbouring states are not
// phase-aligned.
FisherResult qfi_finite_difference(const StateProvider& provider, const ModelParams& params,
                                   double dOmega = 0.0);

// Mixed-state QFI 2 sum (p_n - p_m)^2/(p_n + p_m) |<n|h|m>|^2 with `h`
// expressed in the eigenbasis of rho. Throws InvalidArgument if sum p != 1.
FisherResult qfi_mixed_spectral(const Eigen::VectorXd& populations, const FockOperator& h);

// General density matrix: diagonalizes rho and rotates h into its eigenbasis.
FisherResult qfi_mixed_spectral(const CMatrix& rho, const FockOperator& h);

// Thermal squeezed mixture with the local generator built at its cutoff.
FisherResult qfi_mixed_spectral(const ThermalState& state, const ModelParams& params);

// (tanh(beta omega) + 1) / tanh^2(beta omega / 2), as printed.
double thermal_factor_printed(double beta_omega);
// sum_n (p_{n+2}-p_n)^2/(p_{n+2}+p_n)(n+1)(n+2) = 2(1+q)^2/(1+q^2), q = e^{-beta omega}.
double thermal_factor_exact(double beta_omega);

// prefactor / 16 times the printed thermal factor; metadata carries the
// value from the exact factor and their relative difference.
FisherResult qfi_thermal_closed_form(const ModelParams& params);

// gamma^2 omega^2 r_f^4 N^2 T^2 / (2 Omega^2 (1 - r_f^2)) with T the sweep time.
FisherResult time_normalized_qfi(const ModelParams& params, double k_f);

struct ThresholdReport {
  // I / (N T^2) with the k-ratio approximated by 1, and kept.
  double sql_margin = 0.0;
  double sql_margin_with_ratio = 0.0;
  bool sql_beaten = false;
  // Excitation ceiling (Omega/omega)^{1/3} and the k_f/k_c it allows.
  double excitations_at_kf = 0.0;
  double excitation_ceiling = 0.0;
  double max_k_over_kc = 0.0;
  bool squeezing_within_ceiling = false;
  // Minimal N for beating the SQL, up to numerical factors.
  double n_min = 0.0;
  bool n_atoms_above_threshold = false;
  // Bosonic excited state versus the Heisenberg limit, I / (N^2 T^2).
  double hl_margin_bosonic = 0.0;
  bool hl_beaten_bosonic = false;
  double sweep_time = 0.0;
};

ThresholdReport sql_hl_thresholds(const ModelParams& params, double k_f);

}  // namespace socmetro
