#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <functional>

#include "vpinn/quadrature.hpp"

using namespace vpinn;

namespace {

// Independent Jacobi oracle via the terminating hypergeometric series
//   P_n^{(a,b)}(x) = ((a+1)_n / n!) * 2F1(-n, n+a+b+1; a+1; (1-x)/2),
// evaluated term by term.  Deliberately a different derivation from the
// three-term recurrence used by the library.
double pochhammer(double v, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= v + i;
  return r;
}

double jacobi_hypergeometric(int n, double a, double b, double x) {
  const double z = 0.5 * (1.0 - x);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += pochhammer(-n, k) * pochhammer(n + a + b + 1.0, k) /
           (pochhammer(a + 1.0, k) * std::tgamma(k + 1.0)) * std::pow(z, k);
  }
  return pochhammer(a + 1.0, n) / std::tgamma(n + 1.0) * sum;
}

double fd_derivative(const std::function<double(double)>& f, double x) {
  const double h = 1e-6;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("jacobi polynomial values") {
  // Degree 0 is identically 1 for any admissible (alpha, beta).
  CHECK(jacobi_polynomial(0, 0.0, 0.0, 0.37).value == 1.0);
  CHECK(jacobi_polynomial(0, 1.5, -0.5, -0.9).value == 1.0);

  // Legendre P2(0.5) = (3x^2-1)/2 = -0.125.
  CHECK_THAT(jacobi_polynomial(2, 0.0, 0.0, 0.5).value,
             Catch::Matchers::WithinAbs(-0.125, 1e-15));

  // Cross-check the recurrence against the hypergeometric series for
  // nontrivial weights.
  for (const auto& [a, b] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0},
                             std::pair{1.2, 0.4}, std::pair{-0.5, 0.7}}) {
    for (int n : {1, 2, 3, 4, 5}) {
      for (double x : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
        CHECK_THAT(jacobi_polynomial(n, a, b, x).value,
                   Catch::Matchers::WithinAbs(jacobi_hypergeometric(n, a, b, x),
                                              1e-12));
      }
    }
  }
}

TEST_CASE("jacobi polynomial derivatives") {
  // P2' = 3x for Legendre.
  CHECK_THAT(jacobi_polynomial(2, 0.0, 0.0, 0.5).derivative,
             Catch::Matchers::WithinAbs(1.5, 1e-14));
  CHECK(jacobi_polynomial(0, 0.3, 0.3, 0.2).derivative == 0.0);

  // Finite-difference oracle on general (alpha, beta).
  for (const auto& [a, b] : {std::pair{0.0, 0.0}, std::pair{1.2, 0.4}}) {
    for (int n : {1, 3, 4, 6}) {
      for (double x : {-0.6, 0.1, 0.7}) {
        const double fd = fd_derivative(
            [&](double t) { return jacobi_polynomial(n, a, b, t).value; }, x);
        CHECK_THAT(jacobi_polynomial(n, a, b, x).derivative,
                   Catch::Matchers::WithinAbs(fd, 5e-6));
      }
    }
  }
}

TEST_CASE("jacobi polynomial argument validation") {
  CHECK_THROWS_AS(jacobi_polynomial(-1, 0.0, 0.0, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(jacobi_polynomial(2, -1.0, 0.0, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(jacobi_polynomial(2, 0.0, -1.5, 0.0), InvalidArgumentError);
}

TEST_CASE("1d test functions vanish at the endpoints") {
  for (int k = 1; k <= 8; ++k) {
    CHECK_THAT(test_function_1d(k, -1.0).value,
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(test_function_1d(k, 1.0).value,
               Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("1d test function values and derivatives") {
  // k=1: P2 - P0 at 0 is -0.5 - 1 = -1.5.
  CHECK_THAT(test_function_1d(1, 0.0).value,
             Catch::Matchers::WithinAbs(-1.5, 1e-15));
  CHECK_THROWS_AS(test_function_1d(0, 0.0), InvalidArgumentError);

  for (int k : {1, 2, 5}) {
    for (double x : {-0.75, -0.2, 0.3, 0.85}) {
      const double fd = fd_derivative(
          [&](double t) { return test_function_1d(k, t).value; }, x);
      CHECK_THAT(test_function_1d(k, x).derivative,
                 Catch::Matchers::WithinAbs(fd, 5e-6));
    }
  }
}

TEST_CASE("gauss-legendre nodes and weights") {
  SECTION("n=1 is the midpoint rule") {
    const auto r = gauss_rule_1d(1, QuadratureKind::gauss_legendre);
    REQUIRE(r.size() == 1);
    CHECK(r.points[0] == 0.0);
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(2.0, 1e-15));
  }
  SECTION("n=2 matches +-1/sqrt(3)") {
    const auto r = gauss_rule_1d(2, QuadratureKind::gauss_legendre);
    CHECK_THAT(r.points[0],
               Catch::Matchers::WithinAbs(-1.0 / std::sqrt(3.0), 1e-15));
    CHECK_THAT(r.points[1],
               Catch::Matchers::WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(r.weights[1], Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
  SECTION("n=5 against tabulated values") {
    // Reference values from the standard Gauss-Legendre tables.
    const auto r = gauss_rule_1d(5, QuadratureKind::gauss_legendre);
    const double xs[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                         0.5384693101056831, 0.9061798459386640};
    const double ws[] = {0.2369268850561891, 0.4786286704993665,
                         0.5688888888888889, 0.4786286704993665,
                         0.2369268850561891};
    for (int i = 0; i < 5; ++i) {
      CHECK_THAT(r.points[i], Catch::Matchers::WithinAbs(xs[i], 1e-14));
      CHECK_THAT(r.weights[i], Catch::Matchers::WithinAbs(ws[i], 1e-14));
    }
  }
  SECTION("integrates x^2 exactly") {
    for (int n : {2, 3, 7, 20}) {
      const auto r = gauss_rule_1d(n, QuadratureKind::gauss_legendre);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * r.points[i] * r.points[i];
      CHECK_THAT(s, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-14));
    }
  }
  SECTION("exact through degree 2n-1, not 2n") {
    for (int n : {2, 4, 8}) {
      const auto r = gauss_rule_1d(n, QuadratureKind::gauss_legendre);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.points[i], d);
        const double exact = (d % 2 == 0) ? 2.0 / (d + 1.0) : 0.0;
        CHECK_THAT(s, Catch::Matchers::WithinAbs(exact, 1e-13));
      }
      // Degree 2n must miss: confirms the rule is not over-reported.
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += r.weights[i] * std::pow(r.points[i], 2 * n);
      CHECK(std::abs(s - 2.0 / (2.0 * n + 1.0)) > 1e-8);
    }
  }
}

TEST_CASE("gauss-lobatto nodes and weights") {
  SECTION("n=2 endpoints only") {
    const auto r = gauss_rule_1d(2, QuadratureKind::gauss_lobatto);
    CHECK(r.points[0] == -1.0);
    CHECK(r.points[1] == 1.0);
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(r.weights[1], Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
  SECTION("n=4 against closed form") {
    const auto r = gauss_rule_1d(4, QuadratureKind::gauss_lobatto);
    const double x1 = 1.0 / std::sqrt(5.0);
    CHECK_THAT(r.points[1], Catch::Matchers::WithinAbs(-x1, 1e-14));
    CHECK_THAT(r.points[2], Catch::Matchers::WithinAbs(x1, 1e-14));
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-14));
    CHECK_THAT(r.weights[1], Catch::Matchers::WithinAbs(5.0 / 6.0, 1e-14));
  }
  SECTION("n=5 against closed form") {
    const auto r = gauss_rule_1d(5, QuadratureKind::gauss_lobatto);
    const double x1 = std::sqrt(3.0 / 7.0);
    CHECK_THAT(r.points[1], Catch::Matchers::WithinAbs(-x1, 1e-14));
    CHECK(r.points[2] == 0.0);
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(0.1, 1e-14));
    CHECK_THAT(r.weights[1], Catch::Matchers::WithinAbs(49.0 / 90.0, 1e-14));
    CHECK_THAT(r.weights[2], Catch::Matchers::WithinAbs(32.0 / 45.0, 1e-14));
  }
  SECTION("exact through degree 2n-3") {
    for (int n : {3, 5, 9}) {
      const auto r = gauss_rule_1d(n, QuadratureKind::gauss_lobatto);
      for (int d = 0; d <= 2 * n - 3; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.points[i], d);
        const double exact = (d % 2 == 0) ? 2.0 / (d + 1.0) : 0.0;
        CHECK_THAT(s, Catch::Matchers::WithinAbs(exact, 1e-13));
      }
    }
  }
}

TEST_CASE("quadrature rule structural invariants") {
  for (const auto kind :
       {QuadratureKind::gauss_legendre, QuadratureKind::gauss_lobatto}) {
    for (int n : {2, 3, 5, 17, 40, 100}) {
      const auto r = gauss_rule_1d(n, kind);
      REQUIRE(r.size() == n);
      double wsum = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i > 0) CHECK(r.points[i] > r.points[i - 1]);
        CHECK(r.weights[i] > 0.0);
        CHECK(r.points[i] >= -1.0);
        CHECK(r.points[i] <= 1.0);
        wsum += r.weights[i];
      }
      CHECK_THAT(wsum, Catch::Matchers::WithinAbs(2.0, 1e-13));
      // Symmetry is exact by construction.
      for (int i = 0; i < n; ++i) {
        CHECK(r.points[i] == -r.points[n - 1 - i]);
        CHECK(r.weights[i] == r.weights[n - 1 - i]);
      }
    }
  }
  CHECK_THROWS_AS(gauss_rule_1d(0, QuadratureKind::gauss_legendre),
                  InvalidArgumentError);
  CHECK_THROWS_AS(gauss_rule_1d(1, QuadratureKind::gauss_lobatto),
                  InvalidArgumentError);
}

TEST_CASE("2d tensor product ordering and exactness") {
  const auto rx = gauss_rule_1d(3, QuadratureKind::gauss_legendre);
  const auto ry = gauss_rule_1d(2, QuadratureKind::gauss_legendre);
  const auto r2 = tensor_product_rule(rx, ry);
  REQUIRE(r2.n_xi == 3);
  REQUIRE(r2.n_eta == 2);
  REQUIRE(r2.size() == 6);
  // q = iy * n_xi + ix: eta varies on the outer index.
  for (int iy = 0; iy < 2; ++iy) {
    for (int ix = 0; ix < 3; ++ix) {
      const int q = iy * 3 + ix;
      CHECK(r2.xi[q] == rx.points[ix]);
      CHECK(r2.eta[q] == ry.points[iy]);
      CHECK(r2.weights[q] == rx.weights[ix] * ry.weights[iy]);
    }
  }

  double wsum = 0.0, sxy2 = 0.0;
  for (int q = 0; q < r2.size(); ++q) {
    wsum += r2.weights[q];
    sxy2 += r2.weights[q] * r2.xi[q] * r2.xi[q] * r2.eta[q] * r2.eta[q];
  }
  CHECK_THAT(wsum, Catch::Matchers::WithinAbs(4.0, 1e-14));
  // int x^2 y^2 over the reference square = (2/3)^2.
  CHECK_THAT(sxy2, Catch::Matchers::WithinAbs(4.0 / 9.0, 1e-14));
}
