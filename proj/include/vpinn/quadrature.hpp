#pragma once

// Jacobi/Legendre polynomial evaluation, the 1D test-function family, and
// Gauss quadrature rules on [-1, 1] plus their 2D tensor products.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vpinn/core.hpp"

namespace vpinn {

struct PolyEval {
  double value = 0.0;
  double derivative = 0.0;
};

// Jacobi polynomial P_n^{(alpha,beta)} evaluated with the standard
// three-term recurrence.  The derivative uses
//   d/dx P_n^{(a,b)} = (n + a + b + 1)/2 * P_{n-1}^{(a+1,b+1)}.
namespace detail {

inline double jacobi_value(int n, double a, double b, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0;
  double p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
  for (int m = 2; m <= n; ++m) {
    const double ab = a + b;
    const double c1 = 2.0 * m * (m + ab) * (2.0 * m + ab - 2.0);
    const double c2 = (2.0 * m + ab - 1.0) * (a * a - b * b);
    const double c3 =
        (2.0 * m + ab - 2.0) * (2.0 * m + ab - 1.0) * (2.0 * m + ab);
    const double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + ab);
    const double next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
    pm1 = p;
    p = next;
  }
  return p;
}

}  // namespace detail

inline PolyEval jacobi_polynomial(int n, double alpha, double beta, double x) {
  if (n < 0) throw InvalidArgumentError("jacobi_polynomial: order must be >= 0");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw InvalidArgumentError("jacobi_polynomial: alpha, beta must be > -1");
  PolyEval out;
  out.value = detail::jacobi_value(n, alpha, beta, x);
  out.derivative =
      (n == 0) ? 0.0
               : 0.5 * (n + alpha + beta + 1.0) *
                     detail::jacobi_value(n - 1, alpha + 1.0, beta + 1.0, x);
  return out;
}

// k-th member of the 1D test family, k >= 1:
//   v_k(x) = P_{k+1}(x) - P_{k-1}(x)      (Legendre)
// Every member vanishes at x = +-1, so tensor products of these satisfy the
// homogeneous boundary condition on the reference square exactly.
inline PolyEval test_function_1d(int k, double x) {
  if (k < 1) throw InvalidArgumentError("test_function_1d: index must be >= 1");
  const PolyEval hi = jacobi_polynomial(k + 1, 0.0, 0.0, x);
  const PolyEval lo = jacobi_polynomial(k - 1, 0.0, 0.0, x);
  return {hi.value - lo.value, hi.derivative - lo.derivative};
}

enum class QuadratureKind { gauss_legendre, gauss_lobatto };

struct QuadratureRule1D {
  std::vector<double> points;   // ascending in (-1,1) resp. [-1,1]
  std::vector<double> weights;  // positive, sum to 2
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

// Legendre value and derivative in one pass (cheaper than the generic Jacobi
// recurrence and needed inside the Newton iterations below).
inline void legendre_pair(int n, double x, double& p, double& dp) {
  double pm1 = 0.0;
  p = 1.0;
  for (int m = 1; m <= n; ++m) {
    const double next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * pm1) / m;
    pm1 = p;
    p = next;
  }
  // P'_n from the standard identity; endpoints never occur for interior roots.
  dp = (n == 0) ? 0.0 : n * (x * p - pm1) / (x * x - 1.0);
}

}  // namespace detail

// Gauss-Legendre (exact through degree 2n-1) or Gauss-Lobatto (2n-3) rule on
// [-1,1].  Nodes are polished with Newton iterations from Chebyshev-type
// starting guesses; tolerance 1e-15 on the update, at most 100 iterations.
inline QuadratureRule1D gauss_rule_1d(int n, QuadratureKind kind) {
  constexpr double tol = 1e-15;
  constexpr int max_iter = 100;
  QuadratureRule1D rule;
  rule.kind = kind;
  rule.points.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  if (kind == QuadratureKind::gauss_legendre) {
    if (n < 1)
      throw InvalidArgumentError("gauss_rule_1d: legendre needs n >= 1");
    // Compute the upper half; mirror for the lower half.
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p = 0.0, dp = 0.0;
      for (int it = 0; it < max_iter; ++it) {
        detail::legendre_pair(n, x, p, dp);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) <= tol) break;
      }
      detail::legendre_pair(n, x, p, dp);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.points[n - 1 - i] = x;
      rule.points[i] = -x;
      rule.weights[n - 1 - i] = w;
      rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;  // exact centre for odd n
  } else {
    if (n < 2)
      throw InvalidArgumentError("gauss_rule_1d: lobatto needs n >= 2");
    rule.points.front() = -1.0;
    rule.points.back() = 1.0;
    const double wend = 2.0 / (static_cast<double>(n) * (n - 1.0));
    rule.weights.front() = wend;
    rule.weights.back() = wend;
    // Interior nodes are the roots of P'_{n-1}; compute the lower half and
    // mirror so symmetry is exact.
    const int m = n - 1;
    for (int i = 1; i <= (n - 1) / 2; ++i) {
      double x = -std::cos(M_PI * i / static_cast<double>(m));
      for (int it = 0; it < max_iter; ++it) {
        double p = 0.0, dp = 0.0;
        detail::legendre_pair(m, x, p, dp);
        // second derivative of P_m via the Legendre ODE
        const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
        const double dx = dp / d2p;
        x -= dx;
        if (std::abs(dx) <= tol) break;
      }
      double p = 0.0, dp = 0.0;
      detail::legendre_pair(m, x, p, dp);
      const double w = 2.0 / (static_cast<double>(n) * (n - 1.0) * p * p);
      rule.points[i] = x;
      rule.weights[i] = w;
      rule.points[n - 1 - i] = -x;
      rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
      rule.points[n / 2] = 0.0;
      double p = 0.0, dp = 0.0;
      detail::legendre_pair(m, 0.0, p, dp);
      rule.weights[n / 2] = 2.0 / (static_cast<double>(n) * (n - 1.0) * p * p);
    }
  }
  return rule;
}

// 2D tensor-product rule.  Point ordering contract used by every consumer:
// row-major with eta outer, xi inner, i.e. q = iy * n_xi + ix.
struct QuadratureRule2D {
  std::vector<double> xi, eta, weights;  // flattened, length n_xi*n_eta
  int n_xi = 0, n_eta = 0;
  int size() const { return n_xi * n_eta; }
};

inline QuadratureRule2D tensor_product_rule(const QuadratureRule1D& rx,
                                            const QuadratureRule1D& ry) {
  QuadratureRule2D out;
  out.n_xi = rx.size();
  out.n_eta = ry.size();
  out.xi.reserve(out.size());
  out.eta.reserve(out.size());
  out.weights.reserve(out.size());
  for (int iy = 0; iy < out.n_eta; ++iy) {
    for (int ix = 0; ix < out.n_xi; ++ix) {
      out.xi.push_back(rx.points[ix]);
      out.eta.push_back(ry.points[iy]);
      out.weights.push_back(rx.weights[ix] * ry.weights[iy]);
    }
  }
  return out;
}

inline QuadratureRule2D tensor_product_rule(const QuadratureRule1D& r) {
  return tensor_product_rule(r, r);
}

}  // namespace vpinn
