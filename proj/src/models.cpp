#include "socmetro/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "socmetro/error.hpp"

namespace socmetro {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// r = k / k_c with the phase check applied.
double checked_ratio(const ModelParams& params) {
  params.validate();
  const double r = params.k_over_kc();
  if (r >= 1.0) throw OutOfPhase("k >= k_c: stripe phase is not modeled");
  return r;
}

}  // namespace

ModelParams ModelParams::from_ratio(double k_over_kc, double omega, double Omega,
                                    std::size_t n_atoms) {
  ModelParams p;
  p.omega = omega;
  p.Omega = Omega;
  p.n_atoms = n_atoms;
  p.k = k_over_kc * std::sqrt(Omega * omega);
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be positive");
  if (!(Omega > 0.0) || !std::isfinite(Omega)) throw InvalidArgument("Omega must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
  if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("k must be non-negative");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (n_atoms < 1) throw InvalidArgument("n_atoms must be at least 1");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive (or infinite)");
}

double ModelParams::k_over_kc() const { return k / critical_coupling(*this); }

ModelParams ModelParams::with_Omega(double new_Omega) const {
  ModelParams p = *this;
  p.Omega = new_Omega;
  return p;
}

double critical_coupling(const ModelParams& params) {
  if (!(params.omega > 0.0) || !(params.Omega > 0.0))
    throw InvalidArgument("critical_coupling: omega and Omega must be positive");
  return std::sqrt(params.Omega * params.omega);
}

double squeeze_parameter(double k, double k_c) {
  if (!(k_c > 0.0)) throw InvalidArgument("squeeze_parameter: k_c must be positive");
  if (!(k >= 0.0)) throw InvalidArgument("squeeze_parameter: k must be non-negative");
  if (k >= k_c) throw OutOfPhase("squeeze_parameter: k >= k_c");
  const double r = k / k_c;
  return -0.25 * std::log1p(-r * r);
}

MeanExcitations mean_excitations(double k, double k_c) {
  const double xi = squeeze_parameter(k, k_c);
  const double r = k / k_c;
  const double s = std::sinh(xi);
  return {s * s, 1.0 / (4.0 * std::sqrt(1.0 - r * r))};
}

double adiabatic_sweep_time(const ModelParams& params, double k_f) {
  params.validate();
  const double k_c = critical_coupling(params);
  if (!(k_f >= 0.0)) throw InvalidArgument("adiabatic_sweep_time: k_f must be non-negative");
  if (k_f >= k_c) throw OutOfPhase("adiabatic_sweep_time: k_f >= k_c");
  const double r = k_f / k_c;
  return 1.0 / (2.0 * params.gamma * params.omega * std::sqrt(1.0 - r * r));
}

FockOperator build_rabi_hamiltonian(const ModelParams& params, std::size_t cutoff) {
  const double r = checked_ratio(params);
  const auto [a, ad] = ladder_operators(cutoff);
  const double g = 0.5 * r * std::sqrt(params.omega * params.Omega);
  const FockOperator oscillator = with_spin(number_operator(cutoff), Eigen::Matrix2cd::Identity());
  const FockOperator coupling = with_spin(a + ad, pauli_x());
  const FockOperator spin = with_spin(FockOperator::identity(cutoff), pauli_z());
  CMatrix h = params.omega * oscillator.data() + g * coupling.data() +
              0.5 * params.Omega * spin.data();
  return {cutoff, 2, std::move(h), true};
}

FockOperator build_effective_hamiltonian(const ModelParams& params, std::size_t cutoff) {
  const double r = checked_ratio(params);
  const auto [a, ad] = ladder_operators(cutoff);
  const FockOperator x_like = a + ad;
  const FockOperator quad = x_like * x_like;
  const FockOperator oscillator = with_spin(number_operator(cutoff), Eigen::Matrix2cd::Identity());
  const FockOperator spin = with_spin(FockOperator::identity(cutoff), pauli_z());
  const FockOperator squeeze = with_spin(quad, pauli_z());
  CMatrix h = params.omega * oscillator.data() + 0.5 * params.Omega * spin.data() +
              0.25 * params.omega * r * r * squeeze.data();
  // Symmetrize away rounding from the matrix product.
  h = 0.5 * (h + h.adjoint()).eval();
  return {cutoff, 2, std::move(h), true};
}

SpectrumResult diagonalize(const FockOperator& hamiltonian, std::size_t n_states) {
  const std::size_t side = hamiltonian.side();
  if (side > kMaxDenseDimension)
    throw Unsupported("diagonalize: dimension " + std::to_string(side) +
                      " exceeds the dense limit " + std::to_string(kMaxDenseDimension));
  if (hamiltonian.hermiticity_error() > 1e-10)
    throw InvalidArgument("diagonalize: operator is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian.data());
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");

  const std::size_t count = n_states == 0 ? side : std::min(n_states, side);
  SpectrumResult out;
  out.cutoff = hamiltonian.dim();
  out.eigenvalues.reserve(count);
  out.eigenvectors.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    CVector v = solver.eigenvectors().col(idx(j));
    Eigen::Index top = 0;
    v.cwiseAbs().maxCoeff(&top);
    v *= std::conj(v(top)) / std::abs(v(top));
    const double lambda = solver.eigenvalues()(idx(j));
    const double residual = (hamiltonian.data() * v - lambda * v).norm();
    // Residuals scale with the operator norm.
    const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
    if (residual > 1e-8 * scale)
      throw NumericalError("diagonalize: eigenpair residual " + std::to_string(residual));
    out.max_residual = std::max(out.max_residual, residual);
    out.eigenvalues.push_back(lambda);
    out.eigenvectors.emplace_back(hamiltonian.dim(), hamiltonian.spin_dim(), std::move(v));
  }
  return out;
}

StateVector ground_state(const FockOperator& hamiltonian) {
  return diagonalize(hamiltonian, 1).eigenvectors.front();
}

StateVector effective_ground_state(const ModelParams& params, std::size_t cutoff) {
  return ground_state(build_effective_hamiltonian(params, cutoff));
}

StateVector rabi_ground_state(const ModelParams& params, std::size_t cutoff) {
  return ground_state(build_rabi_hamiltonian(params, cutoff));
}

std::size_t default_model_cutoff(const ModelParams& params) {
  const double xi = squeeze_parameter(params.k, critical_coupling(params));
  return recommended_cutoff(xi, 2) + 10;
}

std::size_t thermal_cutoff(double beta_omega, double tail) {
  if (!(beta_omega > 0.0)) throw InvalidArgument("thermal_cutoff: beta*omega must be positive");
  if (std::isinf(beta_omega)) return 1;
  // Tail beyond D is q^D with q = e^{-beta omega}.
  const double d = std::ceil(-std::log(tail) / beta_omega);
  return std::max<std::size_t>(1, static_cast<std::size_t>(d) + 1);
}

ThermalState thermal_state(const ModelParams& params, std::size_t cutoff) {
  params.validate();
  const double xi = squeeze_parameter(params.k, critical_coupling(params));
  const double bw = params.beta * params.omega;
  if (cutoff == 0) cutoff = thermal_cutoff(bw);
  if (cutoff > kMaxDenseDimension)
    throw ConvergenceError("thermal_state: required cutoff exceeds " +
                           std::to_string(kMaxDenseDimension));
  const double tail = std::isinf(bw) ? 0.0 : std::exp(-bw * static_cast<double>(cutoff));
  if (tail >= 1e-12)
    throw ConvergenceError("thermal_state: cutoff tail probability " + std::to_string(tail) +
                           " is not below 1e-12");

  Eigen::VectorXd p = Eigen::VectorXd::Zero(idx(cutoff));
  if (std::isinf(bw)) {
    p(0) = 1.0;
  } else {
    const double one_minus_q = -std::expm1(-bw);
    for (std::size_t n = 0; n < cutoff; ++n)
      p(idx(n)) = one_minus_q * std::exp(-bw * static_cast<double>(n));
    p /= p.sum();
  }
  ThermalState out;
  out.density = p.cast<cplx>().asDiagonal();
  out.populations = std::move(p);
  out.xi = xi;
  out.cutoff = cutoff;
  out.tail_probability = tail;
  return out;
}

}  // namespace socmetro
