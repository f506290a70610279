#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sdrkdg/errors.hpp"

namespace sdrkdg {

/// Points and weights on the reference interval [-1, 1].
template <typename Scalar = double>
struct QuadratureRule {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector points;
  Vector weights;
  /// Highest polynomial degree integrated exactly.
  int exact_degree = 0;

  Eigen::Index size() const { return points.size(); }
};

/// Legendre polynomial P_n and its derivative at r, by the three-term recurrence.
template <typename Scalar>
void legendre_with_derivative(int n, Scalar r, Scalar& value, Scalar& derivative) {
  Scalar p0 = Scalar(1);
  Scalar d0 = Scalar(0);
  if (n == 0) {
    value = p0;
    derivative = d0;
    return;
  }
  Scalar p1 = r;
  Scalar d1 = Scalar(1);
  for (int m = 2; m <= n; ++m) {
    const Scalar p2 = (Scalar(2 * m - 1) * r * p1 - Scalar(m - 1) * p0) / Scalar(m);
    const Scalar d2 = d0 + Scalar(2 * m - 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  value = p1;
  derivative = d1;
}

template <typename Scalar>
Scalar legendre(int n, Scalar r) {
  Scalar v, d;
  legendre_with_derivative(n, r, v, d);
  return v;
}

template <typename Scalar>
Scalar legendre_derivative(int n, Scalar r) {
  Scalar v, d;
  legendre_with_derivative(n, r, v, d);
  return d;
}

/// Gauss-Legendre rule with n points (Golub-Welsch, then Newton-polished).
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one point");
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix jacobi = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const Scalar b = Scalar(i) / std::sqrt(Scalar(4 * i * i - 1));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  QuadratureRule<Scalar> rule;
  rule.points = eig.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    Scalar r = rule.points(i);
    Scalar p, dp;
    for (int it = 0; it < 3; ++it) {
      legendre_with_derivative(n, r, p, dp);
      r -= p / dp;
    }
    legendre_with_derivative(n, r, p, dp);
    rule.points(i) = r;
    rule.weights(i) = Scalar(2) / ((Scalar(1) - r * r) * dp * dp);
  }
  rule.exact_degree = 2 * n - 1;
  return rule;
}

/// Gauss-Lobatto rule with n >= 2 points, endpoints included.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_lobatto(int n) {
  if (n < 2) throw InvalidArgument("gauss_lobatto: need at least two points");
  QuadratureRule<Scalar> rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const int m = n - 1;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i < n; ++i) {
    // interior nodes are roots of P'_m; start from Chebyshev-Gauss-Lobatto nodes
    Scalar r = -std::cos(pi * Scalar(i) / Scalar(m));
    if (i > 0 && i < m) {
      for (int it = 0; it < 100; ++it) {
        Scalar p, dp;
        legendre_with_derivative(m, r, p, dp);
        // P_m'' from the Legendre ODE
        const Scalar ddp = (Scalar(2) * r * dp - Scalar(m * (m + 1)) * p) / (Scalar(1) - r * r);
        const Scalar step = dp / ddp;
        r -= step;
        if (std::abs(step) < Scalar(1e-16)) break;
      }
    }
    const Scalar pm = legendre(m, r);
    rule.points(i) = r;
    rule.weights(i) = Scalar(2) / (Scalar(m * (m + 1)) * pm * pm);
  }
  rule.exact_degree = 2 * n - 3;
  return rule;
}

}  // namespace sdrkdg
