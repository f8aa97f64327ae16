#include "socmetro/fockcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "socmetro/error.hpp"

namespace socmetro {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Real generator (xi/2)(a^+^2 - a^2) on the truncated space.
Eigen::MatrixXd squeeze_generator(double xi, std::size_t cutoff) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(idx(cutoff), idx(cutoff));
  for (std::size_t n = 0; n + 2 < cutoff; ++n) {
    const double elem = 0.5 * xi * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    g(idx(n + 2), idx(n)) = elem;
    g(idx(n), idx(n + 2)) = -elem;
  }
  return g;
}

}  // namespace

FockOperator::FockOperator(std::size_t dim, std::size_t spin_dim, CMatrix data,
                           bool hermitian)
    : dim_(dim), spin_dim_(spin_dim), data_(std::move(data)), hermitian_(hermitian) {
  if (dim_ == 0) throw InvalidArgument("FockOperator: dim must be positive");
  if (spin_dim_ != 1 && spin_dim_ != 2)
    throw InvalidArgument("FockOperator: spin_dim must be 1 or 2");
  const auto side = idx(dim_ * spin_dim_);
  if (data_.rows() != side || data_.cols() != side)
    throw InvalidArgument("FockOperator: data must be square with side dim*spin_dim");
  if (hermitian_ && hermiticity_error() >= 1e-12)
    throw InvalidArgument("FockOperator: hermitian flag set on a non-Hermitian matrix");
}

FockOperator FockOperator::zero(std::size_t dim, std::size_t spin_dim) {
  const auto side = idx(dim * spin_dim);
  return {dim, spin_dim, CMatrix::Zero(side, side), true};
}

FockOperator FockOperator::identity(std::size_t dim, std::size_t spin_dim) {
  const auto side = idx(dim * spin_dim);
  return {dim, spin_dim, CMatrix::Identity(side, side), true};
}

FockOperator FockOperator::adjoint() const {
  return {dim_, spin_dim_, data_.adjoint(), hermitian_};
}

double FockOperator::hermiticity_error() const {
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

void FockOperator::check_compatible(const FockOperator& rhs) const {
  if (dim_ != rhs.dim_ || spin_dim_ != rhs.spin_dim_)
    throw InvalidArgument("FockOperator: incompatible operand dimensions");
}

FockOperator FockOperator::operator+(const FockOperator& rhs) const {
  check_compatible(rhs);
  return {dim_, spin_dim_, data_ + rhs.data_, false};
}

FockOperator FockOperator::operator-(const FockOperator& rhs) const {
  check_compatible(rhs);
  return {dim_, spin_dim_, data_ - rhs.data_, false};
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
  check_compatible(rhs);
  return {dim_, spin_dim_, data_ * rhs.data_, false};
}

FockOperator FockOperator::operator*(cplx scale) const {
  return {dim_, spin_dim_, data_ * scale, false};
}

FockOperator FockOperator::operator*(double scale) const {
  return {dim_, spin_dim_, data_ * scale, hermitian_};
}

StateVector::StateVector(std::size_t dim, std::size_t spin_dim, CVector amplitudes)
    : dim_(dim), spin_dim_(spin_dim), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != idx(dim_ * spin_dim_))
    throw InvalidArgument("StateVector: amplitude count must equal dim*spin_dim");
  const double norm = amplitudes_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw InvalidArgument("StateVector: zero or non-finite norm");
  amplitudes_ /= norm;
}

StateVector StateVector::fock(std::size_t dim, std::size_t n) {
  if (n >= dim) throw InvalidArgument("StateVector::fock: n must be below the cutoff");
  CVector amps = CVector::Zero(idx(dim));
  amps(idx(n)) = 1.0;
  return {dim, 1, std::move(amps)};
}

cplx StateVector::overlap(const StateVector& other) const {
  if (other.amplitudes_.size() != amplitudes_.size())
    throw InvalidArgument("StateVector::overlap: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

cplx StateVector::expectation(const FockOperator& op) const {
  if (op.side() != static_cast<std::size_t>(amplitudes_.size()))
    throw InvalidArgument("StateVector::expectation: dimension mismatch");
  return amplitudes_.dot(op.data() * amplitudes_);
}

double StateVector::variance(const FockOperator& op) const {
  if (op.side() != static_cast<std::size_t>(amplitudes_.size()))
    throw InvalidArgument("StateVector::variance: dimension mismatch");
  const CVector applied = op.data() * amplitudes_;
  const double second = applied.squaredNorm();
  const double first = std::real(amplitudes_.dot(applied));
  return second - first * first;
}

StateVector StateVector::with_spin_down() const {
  if (spin_dim_ != 1) throw InvalidArgument("with_spin_down: state already carries spin");
  CVector amps = CVector::Zero(idx(2 * dim_));
  for (std::size_t n = 0; n < dim_; ++n) amps(idx(2 * n + 1)) = amplitudes_(idx(n));
  return {dim_, 2, std::move(amps)};
}

void SqueezedFockState::validate() const {
  if (!std::isfinite(xi) || xi < 0.0)
    throw InvalidArgument("SqueezedFockState: xi must be finite and non-negative");
}

StateVector SqueezedFockState::materialize(std::size_t cutoff) const {
  validate();
  if (n >= cutoff) throw InvalidArgument("SqueezedFockState: n must be below the cutoff");
  const std::size_t work = std::max(cutoff, recommended_cutoff(xi, n)) + n + 8;
  const double ch = std::cosh(xi);
  const double sh = std::sinh(xi);
  const double t = std::tanh(xi);

  // S|0>: (a cosh - a^+ sinh) S|0> = 0 gives c_{k+1} = t sqrt(k/(k+1)) c_{k-1}.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(idx(work));
  v(0) = 1.0 / std::sqrt(ch);
  for (std::size_t k = 1; k + 1 < work; k += 2)
    v(idx(k + 1)) = t * std::sqrt(static_cast<double>(k) / static_cast<double>(k + 1)) * v(idx(k - 1));

  // S|j> = (a^+ cosh - a sinh) S|j-1> / sqrt(j).
  for (std::size_t j = 1; j <= n; ++j) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(idx(work));
    for (std::size_t k = 0; k < work; ++k) {
      double acc = 0.0;
      if (k > 0) acc += ch * std::sqrt(static_cast<double>(k)) * v(idx(k - 1));
      if (k + 1 < work) acc -= sh * std::sqrt(static_cast<double>(k + 1)) * v(idx(k + 1));
      next(idx(k)) = acc;
    }
    v = next / std::sqrt(static_cast<double>(j));
  }
  CVector amps = v.head(idx(cutoff)).cast<cplx>();
  return {cutoff, 1, std::move(amps)};
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd m;
  m << 0.0, -i, i, 0.0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

FockOperator with_spin(const FockOperator& fock, const Eigen::Matrix2cd& spin) {
  if (fock.spin_dim() != 1) throw InvalidArgument("with_spin: operand already carries spin");
  const auto d = idx(fock.dim());
  CMatrix out = CMatrix::Zero(2 * d, 2 * d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const cplx f = fock.data()(r, c);
      if (f == cplx{}) continue;
      out.block<2, 2>(2 * r, 2 * c) = f * spin;
    }
  const bool herm = fock.is_hermitian() && (spin - spin.adjoint()).cwiseAbs().maxCoeff() < 1e-15;
  return {fock.dim(), 2, std::move(out), herm};
}

std::pair<FockOperator, FockOperator> ladder_operators(std::size_t cutoff) {
  if (cutoff < 2) throw InvalidArgument("ladder_operators: cutoff must be at least 2");
  CMatrix a = CMatrix::Zero(idx(cutoff), idx(cutoff));
  for (std::size_t n = 1; n < cutoff; ++n) a(idx(n - 1), idx(n)) = std::sqrt(static_cast<double>(n));
  CMatrix ad = a.adjoint();
  return {FockOperator{cutoff, 1, std::move(a)}, FockOperator{cutoff, 1, std::move(ad)}};
}

FockOperator number_operator(std::size_t cutoff) {
  if (cutoff < 1) throw InvalidArgument("number_operator: cutoff must be positive");
  CMatrix n = CMatrix::Zero(idx(cutoff), idx(cutoff));
  for (std::size_t i = 0; i < cutoff; ++i) n(idx(i), idx(i)) = static_cast<double>(i);
  return {cutoff, 1, std::move(n), true};
}

std::pair<FockOperator, FockOperator> quadratures(std::size_t cutoff, double mass,
                                                  double omega) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw InvalidArgument("quadratures: mass and omega must be positive");
  const auto [a, ad] = ladder_operators(cutoff);
  const cplx i{0.0, 1.0};
  CMatrix x = (a.data() + ad.data()) / std::sqrt(2.0 * mass * omega);
  CMatrix p = i * std::sqrt(mass * omega / 2.0) * (ad.data() - a.data());
  return {FockOperator{cutoff, 1, std::move(x), true}, FockOperator{cutoff, 1, std::move(p), true}};
}

CMatrix matrix_exponential(const CMatrix& a) { return a.exp(); }

FockOperator squeeze_operator(double xi, std::size_t cutoff) {
  if (!std::isfinite(xi)) throw InvalidArgument("squeeze_operator: xi must be finite");
  if (cutoff < 1) throw InvalidArgument("squeeze_operator: cutoff must be positive");
  CMatrix s = squeeze_generator(xi, cutoff).exp().cast<cplx>();
  return {cutoff, 1, std::move(s)};
}

std::size_t recommended_cutoff(double xi, std::size_t n_max) {
  const double t = std::tanh(std::abs(xi));
  // Amplitudes of S(xi)|n> decay like t^{m/2} at large m.
  double tail = 0.0;
  if (t > 1e-300) tail = 1.25 * 2.0 * std::log(1e-14) / std::log(t);
  return std::max<std::size_t>(16, 2 * n_max + 20 + static_cast<std::size_t>(std::ceil(tail)));
}

double interior_block_error(const CMatrix& a, const CMatrix& b, std::size_t interior) {
  const auto k = idx(interior);
  if (a.rows() < k || b.rows() < k || a.cols() < k || b.cols() < k)
    throw InvalidArgument("interior_block_error: block larger than operands");
  return (a.topLeftCorner(k, k) - b.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd oscillator_wavefunctions(std::size_t n_max, double x, double mass,
                                         double omega) {
  if (n_max > kMaxHermiteOrder)
    throw Unsupported("oscillator_wavefunction: mode index beyond " +
                      std::to_string(kMaxHermiteOrder));
  if (!(mass > 0.0) || !(omega > 0.0))
    throw InvalidArgument("oscillator_wavefunction: mass and omega must be positive");
  const double scale = std::sqrt(mass * omega);
  const double y = scale * x;
  Eigen::VectorXd phi(idx(n_max + 1));
  phi(0) = std::pow(mass * omega / std::numbers::pi, 0.25) * std::exp(-0.5 * y * y);
  if (n_max >= 1) phi(1) = std::sqrt(2.0) * y * phi(0);
  for (std::size_t n = 1; n < n_max; ++n) {
    const double nd = static_cast<double>(n);
    phi(idx(n + 1)) = std::sqrt(2.0 / (nd + 1.0)) * y * phi(idx(n)) -
                      std::sqrt(nd / (nd + 1.0)) * phi(idx(n - 1));
  }
  return phi;
}

double oscillator_wavefunction(std::size_t n, double x, double mass, double omega) {
  return oscillator_wavefunctions(n, x, mass, omega)(idx(n));
}

double squeezed_mode_wavefunction(const SqueezedFockState& state, double x, double mass,
                                  double omega) {
  state.validate();
  const double stretch = std::exp(-state.xi);
  return std::sqrt(stretch) * oscillator_wavefunction(state.n, stretch * x, mass, omega);
}

CutoffConvergence converge_in_cutoff(const std::function<double(std::size_t)>& evaluate,
                                     std::size_t initial_cutoff, double rtol,
                                     std::size_t max_cutoff) {
  if (initial_cutoff < 2) throw InvalidArgument("converge_in_cutoff: initial cutoff below 2");
  std::size_t d = initial_cutoff;
  double prev = evaluate(d);
  while (true) {
    const std::size_t next = (3 * d + 1) / 2;
    if (next > max_cutoff)
      throw ConvergenceError("cutoff policy did not converge below cutoff " +
                             std::to_string(max_cutoff));
    const double cur = evaluate(next);
    const double scale = std::max(std::abs(prev), std::abs(cur));
    const double change = scale > 0.0 ? std::abs(cur - prev) / scale : 0.0;
    if (change < rtol) return {cur, next, change};
    d = next;
    prev = cur;
  }
}

}  // namespace socmetro
