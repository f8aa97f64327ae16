#pragma once

// Truncated Fock-space and spin-1/2 operator algebra.
//
// Basis ordering for composite operators is Fock (x) spin: the flat index of
// |n, s> is n * spin_dim + s, with s = 0 the spin-up (sigma_z = +1) state and
// s = 1 spin-down.
//
// Squeeze convention: S(xi) = exp((xi/2) a^+^2 - (xi/2) a^2) with real
// xi > 0 stretches the position quadrature, <x^2> -> e^{2 xi} <x^2>, and acts
// in position space as <x|S(xi)|n> = e^{-xi/2} phi_n(e^{-xi} x).

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>

#include <Eigen/Dense>

namespace socmetro {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class FockOperator {
 public:
  // Throws InvalidArgument if `data` is not (dim*spin_dim)^2, or if
  // `hermitian` is set and max|A - A^+| >= 1e-12.
  FockOperator(std::size_t dim, std::size_t spin_dim, CMatrix data,
               bool hermitian = false);

  static FockOperator zero(std::size_t dim, std::size_t spin_dim = 1);
  static FockOperator identity(std::size_t dim, std::size_t spin_dim = 1);

  std::size_t dim() const { return dim_; }
  std::size_t spin_dim() const { return spin_dim_; }
  std::size_t side() const { return dim_ * spin_dim_; }
  const CMatrix& data() const { return data_; }
  bool is_hermitian() const { return hermitian_; }

  cplx operator()(std::size_t row, std::size_t col) const {
    return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  FockOperator adjoint() const;

  // max |A - A^+| over all elements.
  double hermiticity_error() const;

  FockOperator operator+(const FockOperator& rhs) const;
  FockOperator operator-(const FockOperator& rhs) const;
  FockOperator operator*(const FockOperator& rhs) const;
  FockOperator operator*(cplx scale) const;
  FockOperator operator*(double scale) const;

 private:
  void check_compatible(const FockOperator& rhs) const;

  std::size_t dim_;
  std::size_t spin_dim_;
  CMatrix data_;
  bool hermitian_;
};

inline FockOperator operator*(double scale, const FockOperator& op) { return op * scale; }
inline FockOperator operator*(cplx scale, const FockOperator& op) { return op * scale; }

class StateVector {
 public:
  // Normalizes the amplitudes; throws InvalidArgument on size mismatch or
  // zero norm.
  StateVector(std::size_t dim, std::size_t spin_dim, CVector amplitudes);

  static StateVector fock(std::size_t dim, std::size_t n);

  std::size_t dim() const { return dim_; }
  std::size_t spin_dim() const { return spin_dim_; }
  const CVector& amplitudes() const { return amplitudes_; }

  cplx overlap(const StateVector& other) const;  // <this|other>
  cplx expectation(const FockOperator& op) const;
  // <A^2> - <A>^2 for Hermitian A.
  double variance(const FockOperator& op) const;

  StateVector with_spin_down() const;  // |psi> (x) |down>, requires spin_dim == 1

 private:
  std::size_t dim_;
  std::size_t spin_dim_;
  CVector amplitudes_;
};

struct SqueezedFockState {
  std::size_t n = 0;
  double xi = 0.0;

  // Throws InvalidArgument for non-finite or negative xi.
  void validate() const;

  // S(xi)|n> in the Fock basis from the Bogoliubov ladder recurrence at an
  // internally padded cutoff, cropped to `cutoff` and renormalized.
  // Requires n < cutoff.
  StateVector materialize(std::size_t cutoff) const;
};

// Pauli matrices on the 2-dim spin space, ordered (up, down).
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

// Kronecker product fock (x) spin. `fock` must have spin_dim == 1.
FockOperator with_spin(const FockOperator& fock, const Eigen::Matrix2cd& spin);

// (a, a^+) with a|n> = sqrt(n)|n-1>.
std::pair<FockOperator, FockOperator> ladder_operators(std::size_t cutoff);

FockOperator number_operator(std::size_t cutoff);

// (x, p) with x = (a + a^+)/sqrt(2 m omega), p = i sqrt(m omega / 2)(a^+ - a).
std::pair<FockOperator, FockOperator> quadratures(std::size_t cutoff, double mass,
                                                  double omega);

// Generic dense matrix exponential.
CMatrix matrix_exponential(const CMatrix& a);

FockOperator squeeze_operator(double xi, std::size_t cutoff);

// Fock-space cutoff such that S(xi)|n> for n <= n_max has negligible weight
// (< 1e-14 amplitude) above it.
std::size_t recommended_cutoff(double xi, std::size_t n_max);

// max |A - B| over the leading `interior` x `interior` block.
double interior_block_error(const CMatrix& a, const CMatrix& b, std::size_t interior);

// Normalized Hermite function phi_n(x) for mass m and frequency omega.
// Throws Unsupported for n > 500.
double oscillator_wavefunction(std::size_t n, double x, double mass, double omega);

// phi_0(x) .. phi_{n_max}(x) in one recurrence pass.
Eigen::VectorXd oscillator_wavefunctions(std::size_t n_max, double x, double mass,
                                         double omega);

double squeezed_mode_wavefunction(const SqueezedFockState& state, double x, double mass,
                                  double omega);

inline constexpr std::size_t kMaxHermiteOrder = 500;

// Adaptive cutoff policy: evaluate at D and ceil(1.5 D) until the relative
// change drops below `rtol`.
struct CutoffConvergence {
  double value = 0.0;
  std::size_t cutoff = 0;
  double relative_change = 0.0;
};

CutoffConvergence converge_in_cutoff(const std::function<double(std::size_t)>& evaluate,
                                     std::size_t initial_cutoff, double rtol = 1e-6,
                                     std::size_t max_cutoff = 2000);

}  // namespace socmetro
