#include "socmetro/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "socmetro/error.hpp"

namespace socmetro {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double checked_ratio(const ModelParams& params) {
  params.validate();
  const double r = params.k_over_kc();
  if (r >= 1.0) throw OutOfPhase("k >= k_c: stripe phase is not modeled");
  return r;
}

void echo(FisherResult& out, const ModelParams& p) {
  out.metadata["omega"] = p.omega;
  out.metadata["Omega"] = p.Omega;
  out.metadata["k"] = p.k;
  out.metadata["k_over_kc"] = p.k_over_kc();
  out.metadata["n_atoms"] = static_cast<double>(p.n_atoms);
}

FisherResult analytic(const ModelParams& params, double value) {
  FisherResult out;
  out.value = value;
  out.method = FisherMethod::Analytic;
  echo(out, params);
  return out;
}

double n_of(const ModelParams& params) { return static_cast<double>(params.n_atoms); }

// Applies the single-particle operator `h` (D x D) to tensor factor `site`
// of an N-particle vector in C^{D^N}.
CVector apply_on_factor(const CMatrix& h, const CVector& psi, std::size_t n_sites,
                        std::size_t site, std::size_t d) {
  CVector out = CVector::Zero(psi.size());
  std::size_t stride = 1;
  for (std::size_t s = site + 1; s < n_sites; ++s) stride *= d;
  const auto total = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < total; ++i) {
    const cplx amp = psi(idx(i));
    if (amp == cplx{}) continue;
    const std::size_t digit = (i / stride) % d;
    const std::size_t base = i - digit * stride;
    for (std::size_t row = 0; row < d; ++row) {
      const cplx elem = h(idx(row), idx(digit));
      if (elem != cplx{}) out(idx(base + row * stride)) += elem * amp;
    }
  }
  return out;
}

double tensor_product_variance(const ManyBodyProbe& probe, const CMatrix& h, std::size_t d) {
  const std::size_t n = probe.n_atoms;
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= d;
  const bool antisymmetric = probe.statistics != Statistics::SymmetricBosonic;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CVector psi = CVector::Zero(idx(total));
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    const double sign = (antisymmetric && (inversions % 2 == 1)) ? -1.0 : 1.0;
    std::size_t index = 0;
    for (std::size_t j = 0; j < n; ++j) index = index * d + probe.modes[perm[j]];
    psi(idx(index)) += sign;
  } while (std::next_permutation(perm.begin(), perm.end()));
  psi.normalize();

  CVector h_psi = CVector::Zero(psi.size());
  for (std::size_t site = 0; site < n; ++site) h_psi += apply_on_factor(h, psi, n, site, d);
  const double mean = std::real(psi.dot(h_psi));
  return h_psi.squaredNorm() - mean * mean;
}

}  // namespace

std::string_view to_string(FisherMethod method) {
  switch (method) {
    case FisherMethod::Analytic: return "analytic";
    case FisherMethod::GeneratorVariance: return "generator-variance";
    case FisherMethod::FiniteDifference: return "finite-difference";
    case FisherMethod::MixedSpectral: return "mixed-spectral";
    case FisherMethod::Grid: return "grid";
    case FisherMethod::Classical: return "classical";
  }
  return "unknown";
}

std::string_view to_string(Statistics statistics) {
  switch (statistics) {
    case Statistics::Fermionic: return "fermionic";
    case Statistics::SymmetricBosonic: return "symmetric-bosonic";
    case Statistics::TonksGirardeau: return "tonks-girardeau";
  }
  return "unknown";
}

ManyBodyProbe ManyBodyProbe::ground(std::size_t n_atoms, Statistics statistics, double xi) {
  ManyBodyProbe probe;
  probe.n_atoms = n_atoms;
  probe.statistics = statistics;
  probe.modes.resize(n_atoms);
  std::iota(probe.modes.begin(), probe.modes.end(), std::size_t{0});
  probe.xi = xi;
  probe.validate();
  return probe;
}

void ManyBodyProbe::validate() const {
  if (n_atoms < 1) throw InvalidArgument("ManyBodyProbe: n_atoms must be at least 1");
  if (modes.size() != n_atoms)
    throw InvalidArgument("ManyBodyProbe: mode_set size must equal n_atoms");
  if (std::set<std::size_t>(modes.begin(), modes.end()).size() != modes.size())
    throw InvalidArgument("ManyBodyProbe: repeated modes are not supported");
  if (!std::isfinite(xi) || xi < 0.0)
    throw InvalidArgument("ManyBodyProbe: xi must be finite and non-negative");
}

std::size_t ManyBodyProbe::max_mode() const {
  return modes.empty() ? 0 : *std::max_element(modes.begin(), modes.end());
}

double generator_coefficient(const ModelParams& params) {
  const double r = checked_ratio(params);
  const double r2 = r * r;
  return r2 / (8.0 * params.Omega * (1.0 - r2));
}

double qfi_prefactor(const ModelParams& params) {
  const double r = checked_ratio(params);
  const double r2 = r * r;
  const double denom = params.Omega * (1.0 - r2);
  return r2 * r2 / (denom * denom);
}

FockOperator local_generator(const ModelParams& params, std::size_t cutoff) {
  const double r = checked_ratio(params);
  const double r2 = r * r;
  const auto [a, ad] = ladder_operators(cutoff);
  const cplx i{0.0, 1.0};
  // r^2 * i / (r^2 - 1) * 1 / (8 Omega) * (a^+ a^+ - a a)
  const cplx scale = r2 * i / (r2 - 1.0) / (8.0 * params.Omega);
  CMatrix h = scale * ((ad * ad).data() - (a * a).data());
  return {cutoff, 1, std::move(h), true};
}

FisherResult qfi_single_particle_analytic(const ModelParams& params) {
  return analytic(params, qfi_prefactor(params) / 8.0);
}

FisherResult qfi_fermionic_analytic(const ModelParams& params) {
  const double n = n_of(params);
  return analytic(params, qfi_prefactor(params) * n * n / 8.0);
}

FermionicContributions qfi_fermionic_contributions(const ModelParams& params) {
  const double prefactor = qfi_prefactor(params);
  const auto n = static_cast<std::int64_t>(params.n_atoms);
  FermionicContributions out;
  out.first_numerator = n * (n * n + 2);
  out.second_numerator = -(n - 2) * (n - 1) * n;
  out.first = prefactor * static_cast<double>(out.first_numerator) / 24.0;
  out.second = prefactor * static_cast<double>(out.second_numerator) / 24.0;
  return out;
}

FisherResult qfi_bosonic_excited_analytic(const ModelParams& params) {
  const double n = n_of(params);
  const double poly = 0.5 * n * n * n - 6.0 / 8.0 * n * n + n;
  return analytic(params, qfi_prefactor(params) * poly / 6.0);
}

FisherResult qfi_bosonic_excited_asymptotic(const ModelParams& params, double k_f) {
  ModelParams at_kf = params;
  at_kf.k = k_f;
  const double r = checked_ratio(at_kf);
  const double t = adiabatic_sweep_time(params, k_f);
  const double n = n_of(params);
  const double gw = params.gamma * params.omega;
  const double value = gw * gw * std::pow(r, 4) * n * n * n * t * t /
                       (6.0 * params.Omega * params.Omega * (1.0 - r * r));
  FisherResult out = analytic(at_kf, value);
  out.time_normalized = value / (t * t);
  out.metadata["sweep_time"] = t;
  return out;
}

PerModeMoment per_mode_second_moment(const ModelParams& params, std::size_t n) {
  const double c = generator_coefficient(params);
  const double nd = static_cast<double>(n);
  const double poly = 1.0 + nd + nd * nd;
  return {2.0 * poly * c * c, poly * c * c};
}

FisherResult qfi_collective_variance(const ManyBodyProbe& probe, const ModelParams& params,
                                     std::size_t cutoff, VarianceRoute route) {
  probe.validate();
  const std::size_t limit =
      route == VarianceRoute::Combinatorial ? kMaxCombinatorialAtoms : kMaxTensorAtoms;
  if (probe.n_atoms > limit)
    throw Unsupported("qfi_collective_variance: N = " + std::to_string(probe.n_atoms) +
                      " exceeds the route limit " + std::to_string(limit));
  const std::size_t needed = probe.max_mode() + 3;
  if (cutoff == 0) cutoff = needed;
  if (cutoff < needed)
    throw ConvergenceError("qfi_collective_variance: cutoff must exceed the highest mode by 2");

  const FockOperator gen = local_generator(params, cutoff);
  const CMatrix& h = gen.data();
  FisherResult out;
  out.method = FisherMethod::GeneratorVariance;
  echo(out, params);
  out.metadata["n_atoms"] = static_cast<double>(probe.n_atoms);
  out.metadata["cutoff"] = static_cast<double>(cutoff);

  if (route == VarianceRoute::TensorProduct) {
    out.value = 4.0 * tensor_product_variance(probe, h, cutoff);
    out.metadata["route_tensor_product"] = 1.0;
    return out;
  }

  const CMatrix h2 = h * h;
  double per_mode = 0.0;
  double per_mode_printed = 0.0;
  double diagonal_sq = 0.0;
  for (const std::size_t n : probe.modes) {
    per_mode += std::real(h2(idx(n), idx(n)));
    per_mode_printed += per_mode_second_moment(params, n).printed;
    diagonal_sq += std::norm(h(idx(n), idx(n)));
  }
  double exchange = 0.0;
  for (const std::size_t n : probe.modes)
    for (const std::size_t m : probe.modes)
      if (n != m) exchange += std::norm(h(idx(n), idx(m)));
  const double sign = probe.statistics == Statistics::SymmetricBosonic ? 1.0 : -1.0;
  out.value = 4.0 * (per_mode - diagonal_sq + sign * exchange);
  out.metadata["per_mode_sum"] = per_mode;
  out.metadata["per_mode_sum_printed_coefficient"] = per_mode_printed;
  out.metadata["exchange_sum"] = exchange;
  if (per_mode > 0.0 && std::abs(per_mode / per_mode_printed - 2.0) < 1e-10)
    out.notes.emplace_back(
        "per-mode <h^2> from matrix elements is twice the printed (1+n+n^2) coefficient; "
        "matrix-element value used");
  if (probe.statistics == Statistics::TonksGirardeau)
    out.notes.emplace_back("tonks-girardeau evaluated through the fermionic determinant");
  return out;
}

FisherResult qfi_finite_difference(const StateProvider& provider, const ModelParams& params,
                                   double dOmega) {
  params.validate();
  const double h = dOmega > 0.0 ? dOmega : 1e-4 * params.Omega;
  if (h >= params.Omega) throw InvalidArgument("qfi_finite_difference: step exceeds Omega");

  const StateVector centre = provider(params);
  auto aligned = [&](double offset) {
    const StateVector s = provider(params.with_Omega(params.Omega + offset));
    const cplx ov = centre.overlap(s);
    if (std::real(ov) < 0.9)
      throw NumericalError("qfi_finite_difference: phase fixing failed (overlap " +
                           std::to_string(std::real(ov)) + ")");
    return s.amplitudes();
  };
  auto qfi_at = [&](double step) {
    const CVector d = (aligned(step) - aligned(-step)) / (2.0 * step);
    const cplx proj = centre.amplitudes().dot(d);
    return 4.0 * (d.squaredNorm() - std::norm(proj));
  };
  const double fine = qfi_at(h);
  const double coarse = qfi_at(2.0 * h);
  const double disagreement =
      std::max(std::abs(fine), std::abs(coarse)) > 0.0
          ? std::abs(fine - coarse) / std::max(std::abs(fine), std::abs(coarse))
          : 0.0;

  FisherResult out;
  out.value = std::max(0.0, fine);
  out.method = FisherMethod::FiniteDifference;
  echo(out, params);
  out.metadata["dOmega"] = h;
  out.metadata["richardson_rel_diff"] = disagreement;
  out.metadata["cutoff"] = static_cast<double>(centre.dim());
  if (disagreement > 0.01) out.notes.emplace_back("step too large: Richardson disagreement > 1%");
  return out;
}

FisherResult qfi_mixed_spectral(const Eigen::VectorXd& populations, const FockOperator& h) {
  if (static_cast<std::size_t>(populations.size()) != h.side())
    throw InvalidArgument("qfi_mixed_spectral: population count must match the operator");
  if ((populations.array() < -1e-15).any())
    throw InvalidArgument("qfi_mixed_spectral: negative population");
  if (std::abs(populations.sum() - 1.0) > 1e-10)
    throw InvalidArgument("qfi_mixed_spectral: density matrix is not normalized");

  const auto d = populations.size();
  double sum = 0.0;
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) {
      const double pn = populations(n);
      const double pm = populations(m);
      if (pn + pm < 1e-15) continue;
      const double elem = std::norm(h.data()(n, m));
      if (elem == 0.0) continue;
      sum += (pn - pm) * (pn - pm) / (pn + pm) * elem;
    }
  FisherResult out;
  out.value = 2.0 * sum;
  out.method = FisherMethod::MixedSpectral;
  out.metadata["cutoff"] = static_cast<double>(h.dim());
  return out;
}

FisherResult qfi_mixed_spectral(const CMatrix& rho, const FockOperator& h) {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != h.side())
    throw InvalidArgument("qfi_mixed_spectral: rho and h dimensions differ");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("qfi_mixed_spectral: rho is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10)
    throw InvalidArgument("qfi_mixed_spectral: density matrix is not normalized");
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho);
  const CMatrix& v = solver.eigenvectors();
  CMatrix rotated = v.adjoint() * h.data() * v;
  rotated = 0.5 * (rotated + rotated.adjoint()).eval();
  Eigen::VectorXd p = solver.eigenvalues().cwiseMax(0.0);
  p /= p.sum();
  return qfi_mixed_spectral(p, FockOperator{h.dim(), h.spin_dim(), std::move(rotated), true});
}

FisherResult qfi_mixed_spectral(const ThermalState& state, const ModelParams& params) {
  const std::size_t cutoff = std::max<std::size_t>(state.cutoff, 3);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(idx(cutoff));
  p.head(state.populations.size()) = state.populations;
  FisherResult out = qfi_mixed_spectral(p, local_generator(params, cutoff));
  echo(out, params);
  out.metadata["beta_omega"] = params.beta * params.omega;
  out.metadata["tail_probability"] = state.tail_probability;
  return out;
}

double thermal_factor_printed(double beta_omega) {
  if (!(beta_omega > 0.0)) throw InvalidArgument("thermal factor: beta*omega must be positive");
  if (std::isinf(beta_omega)) return 2.0;
  const double t = std::tanh(0.5 * beta_omega);
  return (std::tanh(beta_omega) + 1.0) / (t * t);
}

double thermal_factor_exact(double beta_omega) {
  if (!(beta_omega > 0.0)) throw InvalidArgument("thermal factor: beta*omega must be positive");
  const double q = std::exp(-beta_omega);
  return 2.0 * (1.0 + q) * (1.0 + q) / (1.0 + q * q);
}

FisherResult qfi_thermal_closed_form(const ModelParams& params) {
  const double bw = params.beta * params.omega;
  const double base = qfi_prefactor(params) / 16.0;
  FisherResult out = analytic(params, base * thermal_factor_printed(bw));
  const double exact = base * thermal_factor_exact(bw);
  out.metadata["beta_omega"] = bw;
  out.metadata["value_exact_sum_factor"] = exact;
  out.metadata["printed_vs_exact_rel_diff"] =
      exact > 0.0 ? std::abs(out.value - exact) / exact : 0.0;
  if (exact > 0.0 && std::abs(out.value - exact) > 1e-10 * exact)
    out.notes.emplace_back(
        "printed thermal factor differs from the normalized spectral sum 2(1+q)^2/(1+q^2)");
  return out;
}

FisherResult time_normalized_qfi(const ModelParams& params, double k_f) {
  ModelParams at_kf = params;
  at_kf.k = k_f;
  const double r = checked_ratio(at_kf);
  const double t = adiabatic_sweep_time(params, k_f);
  const double n = n_of(params);
  const double gw = params.gamma * params.omega;
  const double value = gw * gw * std::pow(r, 4) * n * n * t * t /
                       (2.0 * params.Omega * params.Omega * (1.0 - r * r));
  FisherResult out = analytic(at_kf, value);
  out.time_normalized = value / (t * t);
  out.metadata["sweep_time"] = t;
  out.metadata["gamma"] = params.gamma;
  return out;
}

ThresholdReport sql_hl_thresholds(const ModelParams& params, double k_f) {
  params.validate();
  const double k_c = critical_coupling(params);
  if (!(k_f >= 0.0)) throw InvalidArgument("sql_hl_thresholds: k_f must be non-negative");
  if (k_f >= k_c) throw OutOfPhase("sql_hl_thresholds: k_f >= k_c");
  const double r = k_f / k_c;
  const double s = 1.0 - r * r;
  const double n = n_of(params);
  const double gw = params.gamma * params.omega;
  const double w2 = params.Omega * params.Omega;

  ThresholdReport out;
  out.sweep_time = adiabatic_sweep_time(params, k_f);
  out.sql_margin = gw * gw * n / (2.0 * w2 * s);
  out.sql_margin_with_ratio = out.sql_margin * std::pow(r, 4);
  out.sql_beaten = out.sql_margin > 1.0;
  out.excitations_at_kf = 1.0 / (4.0 * std::sqrt(s));
  out.excitation_ceiling = std::cbrt(params.Omega / params.omega);
  const double c = out.excitation_ceiling;
  out.max_k_over_kc = std::sqrt(std::max(0.0, 1.0 - 1.0 / (16.0 * c * c)));
  out.squeezing_within_ceiling = out.excitations_at_kf < c;
  out.n_min = std::pow(params.Omega, 4.0 / 3.0) /
              (params.gamma * params.gamma * std::pow(params.omega, 4.0 / 3.0));
  out.n_atoms_above_threshold = n > out.n_min;
  out.hl_margin_bosonic = gw * gw * std::pow(r, 4) * n / (6.0 * w2 * s);
  out.hl_beaten_bosonic = out.hl_margin_bosonic > 1.0;
  return out;
}

}  // namespace socmetro
