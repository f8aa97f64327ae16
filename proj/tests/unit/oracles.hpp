#pragma once

// Independent numerical oracles shared by the unit tests.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Golub-Welsch nodes/weights for the weight e^{-x^2}.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = std::sqrt(M_PI) * v * v;
  }
  return {x, w};
}

// Integral of f over the real line as sum w_i e^{x_i^2} f(x_i).
inline double hermite_integral(const std::function<double(double)>& f, int n = 80) {
  const auto [x, w] = gauss_hermite(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * std::exp(x[i] * x[i]) * f(x[i]);
  return s;
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

// Hermite function by explicit physicists' Hermite polynomial (small n only).
inline double hermite_function(int n, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  double hn = n == 0 ? h0 : h1;
  for (int k = 1; k < n; ++k) {
    hn = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = hn;
  }
  return hn * std::exp(-x * x / 2) / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(M_PI));
}

inline double relative_gap(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
