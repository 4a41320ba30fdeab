#pragma once

// Weak-form residual kernels (tensorised, regular-grid matrix, and reference
// per-element loop), penalty losses for boundary and sensor data, and the
// strong-form collocation residual.
//
// Interior convention: the first n_elem * n_quad entries of a
// NetworkEvaluation correspond to the assembled quadrature points in
// element-major order.  Every kernel returns its UNWEIGHTED loss; the
// `weight` argument scales only the adjoint contributions, so callers pass
// d(total)/d(term) — 1 for the variational term, tau/gamma for penalties.

#include <Eigen/Dense>

#include "vpinn/assembly.hpp"
#include "vpinn/core.hpp"
#include "vpinn/network.hpp"

namespace vpinn {

// How the diffusion coefficient enters the residual.
enum class EpsSource {
  fixed,      // compile-time constant from `eps`
  scalar,     // trainable scalar (inverse problems, constant coefficient)
  spatial,    // network's positive second output channel (variable coefficient)
};

template <typename Real>
struct PdeCoefficients {
  Real eps = Real(1);  // used when source == fixed
  Real bx = Real(0), by = Real(0);
  EpsSource source = EpsSource::fixed;
  int eps_scalar_index = 0;  // used when source == scalar

  bool has_convection() const { return bx != Real(0) || by != Real(0); }
  Real eps_value(const NetworkEvaluation<Real>& eval) const {
    return source == EpsSource::scalar
               ? eval.scalar_values.at(eps_scalar_index)
               : eps;
  }
};

template <typename Real>
struct VariationalResult {
  Real loss = Real(0);
  MatX<Real> residuals;  // n_test x n_elem
};

namespace detail {

// Adjoint arrays start empty (meaning zero); size the ones this kernel will
// accumulate into, preserving anything another loss term already wrote.
template <typename Real>
void ensure_adjoint(VecX<Real>& v, Eigen::Index n) {
  if (v.size() == 0) v = VecX<Real>::Zero(n);
}

template <typename Real>
void ensure_variational_adjoints(const NetworkEvaluation<Real>& eval,
                                 const PdeCoefficients<Real>& c,
                                 EvaluationAdjoints<Real>& adj) {
  ensure_adjoint(adj.du_dx_bar, eval.n_points());
  ensure_adjoint(adj.du_dy_bar, eval.n_points());
  if (c.source == EpsSource::spatial)
    ensure_adjoint(adj.eps_bar, eval.n_points());
  if (c.source == EpsSource::scalar && adj.scalar_bar.empty())
    adj.scalar_bar.assign(eval.scalar_values.size(), Real(0));
}

template <typename Real>
void check_interior(const NetworkEvaluation<Real>& eval, Eigen::Index need,
                    const PdeCoefficients<Real>& c) {
  if (eval.order < 1)
    throw ContractViolationError("variational loss needs first derivatives");
  if (eval.du_dx.size() < need || eval.du_dy.size() < need)
    throw ContractViolationError(
        "evaluation does not cover the interior quadrature points");
  if (c.source == EpsSource::spatial && eval.eps.size() < need)
    throw ContractViolationError(
        "spatial coefficient requested but the network has no positive head");
  if (c.source == EpsSource::scalar &&
      c.eps_scalar_index >= static_cast<int>(eval.scalar_values.size()))
    throw ContractViolationError("coefficient scalar index out of range");
}

}  // namespace detail

// Tensorised kernel: per element one (n_test x n_quad) x (n_quad) product
// per term.  Loss is the squared residual averaged over the test axis and
// summed over elements.
template <typename Real>
VariationalResult<Real> variational_loss_tensor(
    const ElementTensors<Real>& T, const NetworkEvaluation<Real>& eval,
    const PdeCoefficients<Real>& c, Real weight = Real(1),
    EvaluationAdjoints<Real>* adj = nullptr) {
  if (!T.has_forcing())
    throw ContractViolationError("tensor kernel: forcing not assembled");
  const Eigen::Index interior =
      static_cast<Eigen::Index>(T.n_elem) * T.n_quad;
  detail::check_interior(eval, interior, c);

  if (adj) detail::ensure_variational_adjoints(eval, c, *adj);

  VariationalResult<Real> out;
  out.residuals.resize(T.n_test, T.n_elem);
  const Real inv_nt = Real(1) / static_cast<Real>(T.n_test);

  VecX<Real> sx(T.n_quad), sy(T.n_quad), conv(T.n_quad);
  VecX<Real> gx(T.n_test), gy(T.n_test), tv(T.n_test), rbar(T.n_test);
  VecX<Real> tmpq(T.n_quad), tyq(T.n_quad);
  for (int k = 0; k < T.n_elem; ++k) {
    const Eigen::Index o = static_cast<Eigen::Index>(k) * T.n_quad;
    const auto uxk = eval.du_dx.segment(o, T.n_quad);
    const auto uyk = eval.du_dy.segment(o, T.n_quad);
    const auto Gx = T.grad_x_slice(k);
    const auto Gy = T.grad_y_slice(k);

    if (c.source == EpsSource::spatial) {
      const auto ek = eval.eps.segment(o, T.n_quad);
      sx = ek.cwiseProduct(uxk);
      sy = ek.cwiseProduct(uyk);
      gx.noalias() = Gx * sx;
      gy.noalias() = Gy * sy;
      out.residuals.col(k) = gx + gy;
    } else {
      gx.noalias() = Gx * uxk;
      gy.noalias() = Gy * uyk;
      out.residuals.col(k) = c.eps_value(eval) * (gx + gy);
    }
    if (c.has_convection()) {
      conv = c.bx * uxk + c.by * uyk;
      tv.noalias() = T.test_slice(k) * conv;
      out.residuals.col(k) += tv;
    }
    out.residuals.col(k) -= T.forcing.col(k);
    out.loss += out.residuals.col(k).squaredNorm() * inv_nt;

    if (adj) {
      rbar = (Real(2) * weight * inv_nt) * out.residuals.col(k);
      auto uxbar = adj->du_dx_bar.segment(o, T.n_quad);
      auto uybar = adj->du_dy_bar.segment(o, T.n_quad);
      if (c.source == EpsSource::spatial) {
        const auto ek = eval.eps.segment(o, T.n_quad);
        auto ebar = adj->eps_bar.segment(o, T.n_quad);
        tmpq.noalias() = Gx.transpose() * rbar;
        uxbar += ek.cwiseProduct(tmpq);
        ebar += uxk.cwiseProduct(tmpq);
        tyq.noalias() = Gy.transpose() * rbar;
        uybar += ek.cwiseProduct(tyq);
        ebar += uyk.cwiseProduct(tyq);
      } else {
        const Real e = c.eps_value(eval);
        tmpq.noalias() = Gx.transpose() * rbar;
        uxbar += e * tmpq;
        tyq.noalias() = Gy.transpose() * rbar;
        uybar += e * tyq;
        if (c.source == EpsSource::scalar)
          adj->scalar_bar.at(c.eps_scalar_index) += rbar.dot(gx + gy);
      }
      if (c.has_convection()) {
        tmpq.noalias() = T.test_slice(k).transpose() * rbar;
        uxbar += c.bx * tmpq;
        uybar += c.by * tmpq;
      }
    }
  }
  return out;
}

// Regular-grid kernel: whole-mesh dense products against the shared
// reference premultipliers.  Valid only for the premultipliers produced by
// assemble_regular_premultipliers (axis-aligned rectangles).
template <typename Real>
VariationalResult<Real> variational_loss_matrix(
    const RegularPremultipliers<Real>& P, const NetworkEvaluation<Real>& eval,
    const PdeCoefficients<Real>& c, Real weight = Real(1),
    EvaluationAdjoints<Real>* adj = nullptr) {
  const Eigen::Index interior =
      static_cast<Eigen::Index>(P.n_elem) * P.n_quad;
  detail::check_interior(eval, interior, c);

  if (adj) detail::ensure_variational_adjoints(eval, c, *adj);

  using Map = Eigen::Map<const MatX<Real>>;
  Map Ux(eval.du_dx.data(), P.n_quad, P.n_elem);
  Map Uy(eval.du_dy.data(), P.n_quad, P.n_elem);

  VariationalResult<Real> out;
  MatX<Real> Mx, My;
  if (c.source == EpsSource::spatial) {
    Map E(eval.eps.data(), P.n_quad, P.n_elem);
    Mx = Ux.cwiseProduct(P.Jx).cwiseProduct(E);
    My = Uy.cwiseProduct(P.Jy).cwiseProduct(E);
    out.residuals.noalias() = P.Vx * Mx;
    out.residuals.noalias() += P.Vy * My;
  } else {
    Mx = Ux.cwiseProduct(P.Jx);
    My = Uy.cwiseProduct(P.Jy);
    out.residuals.noalias() = P.Vx * Mx;
    out.residuals.noalias() += P.Vy * My;
    out.residuals *= c.eps_value(eval);
  }
  if (c.has_convection())
    out.residuals.noalias() +=
        P.V * (c.bx * Ux + c.by * Uy).cwiseProduct(P.Jdet);
  out.residuals -= P.forcing;

  const Real inv_nt = Real(1) / static_cast<Real>(P.n_test);
  out.loss = out.residuals.squaredNorm() * inv_nt;

  if (adj) {
    const MatX<Real> Rbar = (Real(2) * weight * inv_nt) * out.residuals;
    using MutMap = Eigen::Map<MatX<Real>>;
    MutMap Uxbar(adj->du_dx_bar.data(), P.n_quad, P.n_elem);
    MutMap Uybar(adj->du_dy_bar.data(), P.n_quad, P.n_elem);
    MatX<Real> tx = P.Vx.transpose() * Rbar;
    MatX<Real> ty = P.Vy.transpose() * Rbar;
    if (c.source == EpsSource::spatial) {
      Map E(eval.eps.data(), P.n_quad, P.n_elem);
      MutMap Ebar(adj->eps_bar.data(), P.n_quad, P.n_elem);
      Uxbar += tx.cwiseProduct(P.Jx).cwiseProduct(E);
      Uybar += ty.cwiseProduct(P.Jy).cwiseProduct(E);
      Ebar += tx.cwiseProduct(P.Jx).cwiseProduct(Ux) +
              ty.cwiseProduct(P.Jy).cwiseProduct(Uy);
    } else {
      const Real e = c.eps_value(eval);
      Uxbar += e * tx.cwiseProduct(P.Jx);
      Uybar += e * ty.cwiseProduct(P.Jy);
      if (c.source == EpsSource::scalar) {
        // d loss / d eps = Rbar : (Vx Mx + Vy My)
        adj->scalar_bar.at(c.eps_scalar_index) +=
            (Rbar.cwiseProduct(P.Vx * Mx + P.Vy * My)).sum();
      }
    }
    if (c.has_convection()) {
      const MatX<Real> tv = (P.V.transpose() * Rbar).cwiseProduct(P.Jdet);
      Uxbar += c.bx * tv;
      Uybar += c.by * tv;
    }
  }
  return out;
}

enum class LoopMode { axis_aligned, general };

// Which residual-assembly implementation drives a weak-form run.
enum class KernelKind { tensor, loop, matrix };

// Reference per-element loop kernel, kept deliberately un-fused: scalar
// loops over (element, test function, quadrature point) with the geometry
// factors applied term by term, and the forcing integrated in place from f.
// Serves as the correctness oracle for the other kernels and as the slow
// baseline in benchmarks.
template <typename Real>
VariationalResult<Real> variational_loss_loop(
    const Mesh& mesh, const ReferenceBasis& basis, const QuadratureRule2D& rule,
    const ScalarField2D& f, const NetworkEvaluation<Real>& eval,
    const PdeCoefficients<Real>& c, LoopMode mode, Real weight = Real(1),
    EvaluationAdjoints<Real>* adj = nullptr) {
  const int n_elem = mesh.n_elements();
  const int n_test = basis.n_test();
  const int n_quad = rule.size();
  detail::check_interior(
      eval, static_cast<Eigen::Index>(n_elem) * n_quad, c);
  if (adj) detail::ensure_variational_adjoints(eval, c, *adj);

  VariationalResult<Real> out;
  out.residuals.resize(n_test, n_elem);
  const Real inv_nt = Real(1) / static_cast<Real>(n_test);
  for (int k = 0; k < n_elem; ++k) {
    const auto nodes = element_nodes(mesh, k);
    const BilinearCoeffs bc = bilinear_coeffs(nodes);

    if (mode == LoopMode::axis_aligned) {
      const double tol =
          1e-12 * std::max({1.0, std::abs(bc.xc1), std::abs(bc.yc2)});
      if (std::abs(bc.xc3) > tol || std::abs(bc.yc3) > tol ||
          std::abs(bc.xc2) > tol || std::abs(bc.yc1) > tol)
        throw InvalidModeError(
            "loop kernel (axis_aligned): element " + std::to_string(k) +
            " is not an axis-aligned rectangle");
    }

    for (int j = 0; j < n_test; ++j) {
      double r = 0.0;
      for (int q = 0; q < n_quad; ++q) {
        const Eigen::Index p = static_cast<Eigen::Index>(k) * n_quad + q;
        const double ux = static_cast<double>(eval.du_dx[p]);
        const double uy = static_cast<double>(eval.du_dy[p]);
        const double e =
            c.source == EpsSource::spatial
                ? static_cast<double>(eval.eps[p])
                : static_cast<double>(c.eps_value(eval));
        const Point2 xy = bilinear_map(nodes, rule.xi[q], rule.eta[q]);
        double term;
        double wdet;
        if (mode == LoopMode::axis_aligned) {
          // diagonal jacobian: the determinant splits as j_x * j_y and the
          // gradient terms carry det/j_x, det/j_y factors
          const double jx = bc.xc1, jy = bc.yc2, jdet = jx * jy;
          wdet = rule.weights[q] * jdet;
          term = e * rule.weights[q] *
                 ((jdet / jx) * basis.grad_xi(j, q) * ux +
                  (jdet / jy) * basis.grad_eta(j, q) * uy);
        } else {
          const JacobianData jd =
              detail::jacobian_at(bc, rule.xi[q], rule.eta[q]);
          if (!(jd.det > 0.0))
            throw DegenerateElementError(
                k, "loop kernel: non-positive determinant in element " +
                       std::to_string(k));
          const double dvdx = (jd.j22 * basis.grad_xi(j, q) -
                               jd.j12 * basis.grad_eta(j, q)) /
                              jd.det;
          const double dvdy = (-jd.j21 * basis.grad_xi(j, q) +
                               jd.j11 * basis.grad_eta(j, q)) /
                              jd.det;
          wdet = rule.weights[q] * jd.det;
          term = e * wdet * (dvdx * ux + dvdy * uy);
        }
        if (c.has_convection())
          term += wdet * basis.values(j, q) *
                  (static_cast<double>(c.bx) * ux +
                   static_cast<double>(c.by) * uy);
        term -= wdet * basis.values(j, q) * f(xy.x, xy.y);
        r += term;
      }
      out.residuals(j, k) = static_cast<Real>(r);
    }
    out.loss += out.residuals.col(k).squaredNorm() * inv_nt;

    if (adj) {
      for (int j = 0; j < n_test; ++j) {
        const double rbar = 2.0 * static_cast<double>(weight) *
                            static_cast<double>(inv_nt) *
                            static_cast<double>(out.residuals(j, k));
        for (int q = 0; q < n_quad; ++q) {
          const Eigen::Index p = static_cast<Eigen::Index>(k) * n_quad + q;
          double jdet, dvdx, dvdy;
          if (mode == LoopMode::axis_aligned) {
            jdet = bc.xc1 * bc.yc2;
            dvdx = basis.grad_xi(j, q) / bc.xc1;
            dvdy = basis.grad_eta(j, q) / bc.yc2;
          } else {
            const JacobianData jd =
                detail::jacobian_at(bc, rule.xi[q], rule.eta[q]);
            jdet = jd.det;
            dvdx = (jd.j22 * basis.grad_xi(j, q) -
                    jd.j12 * basis.grad_eta(j, q)) /
                   jdet;
            dvdy = (-jd.j21 * basis.grad_xi(j, q) +
                    jd.j11 * basis.grad_eta(j, q)) /
                   jdet;
          }
          const double w = rule.weights[q] * jdet;
          const double e =
              c.source == EpsSource::spatial
                  ? static_cast<double>(eval.eps[p])
                  : static_cast<double>(c.eps_value(eval));
          double uxb = e * w * dvdx;
          double uyb = e * w * dvdy;
          if (c.has_convection()) {
            uxb += w * basis.values(j, q) * static_cast<double>(c.bx);
            uyb += w * basis.values(j, q) * static_cast<double>(c.by);
          }
          adj->du_dx_bar[p] += static_cast<Real>(rbar * uxb);
          adj->du_dy_bar[p] += static_cast<Real>(rbar * uyb);
          if (c.source == EpsSource::spatial) {
            adj->eps_bar[p] += static_cast<Real>(
                rbar * w *
                (dvdx * static_cast<double>(eval.du_dx[p]) +
                 dvdy * static_cast<double>(eval.du_dy[p])));
          } else if (c.source == EpsSource::scalar) {
            adj->scalar_bar.at(c.eps_scalar_index) += static_cast<Real>(
                rbar * w *
                (dvdx * static_cast<double>(eval.du_dx[p]) +
                 dvdy * static_cast<double>(eval.du_dy[p])));
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Penalty losses: mean squared mismatch against prescribed values.

template <typename Real>
Real mean_squared_mismatch(Eigen::Ref<const VecX<Real>> pred,
                           const Eigen::VectorXd& target) {
  if (pred.size() != target.size())
    throw ContractViolationError(
        "penalty loss: prediction/target length mismatch");
  if (pred.size() == 0) return Real(0);
  Real s = Real(0);
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const Real d = pred[i] - static_cast<Real>(target[i]);
    s += d * d;
  }
  return s / static_cast<Real>(pred.size());
}

// Accumulates d(weight * loss)/d pred into pred_bar and returns the
// unweighted loss.
template <typename Real>
Real mean_squared_mismatch_adjoint(Eigen::Ref<const VecX<Real>> pred,
                                   const Eigen::VectorXd& target, Real weight,
                                   Eigen::Ref<VecX<Real>> pred_bar) {
  const Real loss = mean_squared_mismatch<Real>(pred, target);
  const Real scale = Real(2) * weight / static_cast<Real>(pred.size());
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    pred_bar[i] += scale * (pred[i] - static_cast<Real>(target[i]));
  return loss;
}

// ---------------------------------------------------------------------------
// Strong-form collocation residual over an evaluation segment:
//   P = -eps (u_xx + u_yy) + b . grad u - f,  loss = mean P^2.
// Spatial coefficients are not supported here (the strong form would need
// grad eps, which the positive head does not expose).
template <typename Real>
Real strong_residual_loss(const NetworkEvaluation<Real>& eval,
                          Eigen::Index begin, Eigen::Index count,
                          const PdeCoefficients<Real>& c,
                          const Eigen::VectorXd& f_samples,
                          Real weight = Real(1),
                          EvaluationAdjoints<Real>* adj = nullptr) {
  if (eval.order < 2)
    throw ContractViolationError("strong residual needs second derivatives");
  if (c.source == EpsSource::spatial)
    throw ContractViolationError(
        "strong residual does not support a spatial coefficient");
  if (f_samples.size() != count)
    throw ContractViolationError("strong residual: forcing length mismatch");
  if (adj) {
    detail::ensure_adjoint(adj->d2u_dx2_bar, eval.n_points());
    detail::ensure_adjoint(adj->d2u_dy2_bar, eval.n_points());
    detail::ensure_adjoint(adj->du_dx_bar, eval.n_points());
    detail::ensure_adjoint(adj->du_dy_bar, eval.n_points());
    if (c.source == EpsSource::scalar && adj->scalar_bar.empty())
      adj->scalar_bar.assign(eval.scalar_values.size(), Real(0));
  }

  const Real e = c.eps_value(eval);
  Real loss = Real(0);
  const Real inv_n = Real(1) / static_cast<Real>(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::Index p = begin + i;
    const Real lap = eval.d2u_dx2[p] + eval.d2u_dy2[p];
    const Real P = -e * lap + c.bx * eval.du_dx[p] + c.by * eval.du_dy[p] -
                   static_cast<Real>(f_samples[i]);
    loss += P * P * inv_n;
    if (adj) {
      const Real pbar = Real(2) * weight * inv_n * P;
      adj->d2u_dx2_bar[p] += -e * pbar;
      adj->d2u_dy2_bar[p] += -e * pbar;
      if (c.has_convection()) {
        adj->du_dx_bar[p] += c.bx * pbar;
        adj->du_dy_bar[p] += c.by * pbar;
      }
      if (c.source == EpsSource::scalar)
        adj->scalar_bar.at(c.eps_scalar_index) += -lap * pbar;
    }
  }
  return loss;
}

// Composite objective weights: total = variational + tau * boundary +
// gamma * sensor.
struct LossWeights {
  double tau = 10.0;
  double gamma = 10.0;
};

template <typename Real>
struct LossBreakdown {
  Real variational = Real(0);
  Real boundary = Real(0);
  Real sensor = Real(0);
  Real total(const LossWeights& w) const {
    return variational + static_cast<Real>(w.tau) * boundary +
           static_cast<Real>(w.gamma) * sensor;
  }
};

}  // namespace vpinn
