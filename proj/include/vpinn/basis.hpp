#pragma once

// Reference-square test space: tensor products of the 1D test family
// evaluated at the points of a 2D quadrature rule.

#include <Eigen/Dense>

#include "vpinn/core.hpp"
#include "vpinn/quadrature.hpp"

namespace vpinn {

// Rows are test functions, columns quadrature points (in the rule's q
// ordering).  Test index contract: j = j_y * n_test_per_dim + j_x, where j_x
// selects v_{j_x+1}(xi) and j_y selects v_{j_y+1}(eta).
struct ReferenceBasis {
  Eigen::MatrixXd values;    // v_jx(xi_q)   * v_jy(eta_q)
  Eigen::MatrixXd grad_xi;   // v'_jx(xi_q)  * v_jy(eta_q)
  Eigen::MatrixXd grad_eta;  // v_jx(xi_q)   * v'_jy(eta_q)
  int n_test_per_dim = 0;
  int n_test() const { return n_test_per_dim * n_test_per_dim; }
};

inline ReferenceBasis reference_basis(int n_test_per_dim,
                                      const QuadratureRule2D& rule) {
  if (n_test_per_dim < 1)
    throw InvalidArgumentError("reference_basis: n_test_per_dim must be >= 1");
  const int nq = rule.size();
  if (nq == 0) throw InvalidArgumentError("reference_basis: empty rule");

  ReferenceBasis basis;
  basis.n_test_per_dim = n_test_per_dim;
  const int nt = n_test_per_dim * n_test_per_dim;
  basis.values.resize(nt, nq);
  basis.grad_xi.resize(nt, nq);
  basis.grad_eta.resize(nt, nq);

  // 1D evaluations per point, reused across the tensor products.
  Eigen::MatrixXd vx(n_test_per_dim, nq), dvx(n_test_per_dim, nq);
  Eigen::MatrixXd vy(n_test_per_dim, nq), dvy(n_test_per_dim, nq);
  for (int q = 0; q < nq; ++q) {
    for (int k = 0; k < n_test_per_dim; ++k) {
      const PolyEval ex = test_function_1d(k + 1, rule.xi[q]);
      const PolyEval ey = test_function_1d(k + 1, rule.eta[q]);
      vx(k, q) = ex.value;
      dvx(k, q) = ex.derivative;
      vy(k, q) = ey.value;
      dvy(k, q) = ey.derivative;
    }
  }
  for (int jy = 0; jy < n_test_per_dim; ++jy) {
    for (int jx = 0; jx < n_test_per_dim; ++jx) {
      const int j = jy * n_test_per_dim + jx;
      basis.values.row(j) = vx.row(jx).cwiseProduct(vy.row(jy));
      basis.grad_xi.row(j) = dvx.row(jx).cwiseProduct(vy.row(jy));
      basis.grad_eta.row(j) = vx.row(jx).cwiseProduct(dvy.row(jy));
    }
  }
  return basis;
}

}  // namespace vpinn
