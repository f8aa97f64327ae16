#pragma once

// Spin-orbit coupled single-particle models in natural units (hbar = k_B = 1).
//
// Frame: the rotated (quantum Rabi) frame, with Omega on sigma_z and the
// spin-orbit coupling on sigma_x. Couplings are parameterized through the
// ratio r = k / k_c with k_c = sqrt(Omega * omega), so that the Rabi coupling
// is g = r sqrt(omega Omega) / 2 and the effective squeezing term carries
// omega r^2 / 4. At fixed k this gives g = k / 2 independent of Omega.

#include <cstddef>
#include <limits>
#include <vector>

#include "socmetro/fockcore.hpp"

namespace socmetro {

struct ModelParams {
  double omega = 1.0;    // trap frequency
  double Omega = 100.0;  // atomic transition frequency
  double mass = 1.0;
  double k = 0.0;        // spin-orbit coupling strength
  double gamma = 0.1;    // adiabaticity parameter
  std::size_t n_atoms = 1;
  double beta = std::numeric_limits<double>::infinity();

  // Sets k from the ratio k / k_c at the current omega, Omega.
  static ModelParams from_ratio(double k_over_kc, double omega = 1.0, double Omega = 100.0,
                                std::size_t n_atoms = 1);

  // Throws InvalidArgument when any field leaves its domain.
  void validate() const;

  double k_over_kc() const;
  ModelParams with_Omega(double new_Omega) const;

  // N omega << Omega; false flags the polarized-gas advisory.
  bool polarized_regime() const { return static_cast<double>(n_atoms) * omega < Omega; }
};

double critical_coupling(const ModelParams& params);

// xi = -ln(1 - (k/k_c)^2) / 4. Throws OutOfPhase for k >= k_c.
double squeeze_parameter(double k, double k_c);

struct MeanExcitations {
  double exact = 0.0;        // sinh^2 xi
  double approximate = 0.0;  // (4 sqrt(1 - k^2/k_c^2))^{-1}, valid near k_c
};

MeanExcitations mean_excitations(double k, double k_c);

// T = (2 gamma omega sqrt(1 - k_f^2/k_c^2))^{-1}.
double adiabatic_sweep_time(const ModelParams& params, double k_f);

// gamma above this is outside the gamma << 1 regime the sweep formula assumes.
inline constexpr double kAdiabaticityWarningGamma = 0.2;
inline bool adiabaticity_warning(const ModelParams& params) {
  return params.gamma > kAdiabaticityWarningGamma;
}

FockOperator build_rabi_hamiltonian(const ModelParams& params, std::size_t cutoff);
FockOperator build_effective_hamiltonian(const ModelParams& params, std::size_t cutoff);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<StateVector> eigenvectors;
  std::size_t cutoff = 0;
  double max_residual = 0.0;
};

inline constexpr std::size_t kMaxDenseDimension = 4000;

// Dense Hermitian diagonalization. Each eigenvector is rotated so its
// largest-magnitude component is real and positive. Throws Unsupported above
// kMaxDenseDimension and NumericalError if a residual exceeds 1e-8.
SpectrumResult diagonalize(const FockOperator& hamiltonian, std::size_t n_states = 0);

StateVector ground_state(const FockOperator& hamiltonian);

// Phase-fixed ground states at an explicit cutoff.
StateVector effective_ground_state(const ModelParams& params, std::size_t cutoff);
StateVector rabi_ground_state(const ModelParams& params, std::size_t cutoff);

// Cutoff used by the model helpers when none is given.
std::size_t default_model_cutoff(const ModelParams& params);

// Thermal mixture of squeezed Fock states S(xi)|n>, populations
// p_n = e^{-beta omega n} / Z over bare oscillator energies. The density
// matrix is diagonal in the squeezed Fock basis.
struct ThermalState {
  Eigen::VectorXd populations;
  CMatrix density;  // diag(populations)
  double xi = 0.0;
  std::size_t cutoff = 0;
  double tail_probability = 0.0;  // weight beyond the cutoff
};

// Smallest cutoff whose geometric tail is below `tail`.
std::size_t thermal_cutoff(double beta_omega, double tail = 1e-12);

// cutoff == 0 selects thermal_cutoff(beta * omega). Throws ConvergenceError
// when the supplied cutoff leaves a tail probability >= 1e-12.
ThermalState thermal_state(const ModelParams& params, std::size_t cutoff = 0);

}  // namespace socmetro
