#pragma once

// Adam, learning-rate schedules, the forward/inverse training loops, error
// metrics, and wall-clock step timing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vpinn/assembly.hpp"
#include "vpinn/losses.hpp"
#include "vpinn/network.hpp"

namespace vpinn {

// ---------------------------------------------------------------------------
// Adam with the standard defaults and bias correction.

template <typename Real>
struct AdamState {
  VecX<Real> m, v;
  std::int64_t step = 0;  // completed updates

  explicit AdamState(Eigen::Index n)
      : m(VecX<Real>::Zero(n)), v(VecX<Real>::Zero(n)) {}
};

template <typename Real>
void adam_step(VecX<Real>& params, const VecX<Real>& grad,
               AdamState<Real>& state, Real lr) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw ContractViolationError("adam_step: shape mismatch");
  if (!grad.allFinite())
    throw TrainingAbortError(state.step + 1,
                             "non-finite gradient at step " +
                                 std::to_string(state.step + 1));
  constexpr double beta1 = 0.9, beta2 = 0.999, eps_adam = 1e-8;
  state.step += 1;
  const Real b1 = static_cast<Real>(beta1);
  const Real b2 = static_cast<Real>(beta2);
  state.m = b1 * state.m + (Real(1) - b1) * grad;
  state.v = b2 * state.v + (Real(1) - b2) * grad.cwiseProduct(grad);
  const Real c1 =
      Real(1) - static_cast<Real>(std::pow(beta1, double(state.step)));
  const Real c2 =
      Real(1) - static_cast<Real>(std::pow(beta2, double(state.step)));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const Real mhat = state.m[i] / c1;
    const Real vhat = state.v[i] / c2;
    params[i] -= lr * mhat /
                 (std::sqrt(vhat) + static_cast<Real>(eps_adam));
  }
}

// ---------------------------------------------------------------------------
// Learning-rate schedule.

enum class LrMode { constant, exponential };

struct LrSchedule {
  LrMode mode = LrMode::constant;
  double lr0 = 1e-3;
  double decay = 0.99;  // exponential mode: lr0 * decay^(step / every)
  int every = 1000;
};

inline double lr_at(const LrSchedule& s, std::int64_t step) {
  if (step < 0) throw InvalidArgumentError("lr_at: negative step");
  if (s.mode == LrMode::constant) return s.lr0;
  if (s.every < 1) throw InvalidArgumentError("lr_at: every must be >= 1");
  return s.lr0 * std::pow(s.decay, double(step / s.every));
}

// ---------------------------------------------------------------------------
// Training configuration and the run report.

struct ConvergenceSpec {
  std::optional<double> eps_abs_tol;  // validation stop: |eps - eps_actual|
  std::optional<double> eps_actual;
  std::optional<double> loss_tol;  // plateau stop: relative improvement
  int plateau_window = 2000;
};

struct TrainConfig {
  std::int64_t iterations = 1000;
  LrSchedule lr;
  LossWeights weights;
  int log_every = 100;
  int timing_window = 0;  // cap on retained per-step samples; 0 = no cap
  ConvergenceSpec convergence;
};

struct Metrics {
  double mae = 0.0;
  double rel_l2 = 0.0;
  double max_err = 0.0;
};

struct TimingSummary {
  std::vector<double> samples;  // per-step seconds, warmup excluded
  double median_s = 0.0;
  double p10_s = 0.0;
  double p90_s = 0.0;
};

// One row of loss history; eps is NaN for runs without a constant trainable
// coefficient.
struct HistoryRow {
  std::int64_t step = 0;
  double total = 0.0, variational = 0.0, boundary = 0.0, sensor = 0.0;
  double lr = 0.0;
  double eps = std::numeric_limits<double>::quiet_NaN();
};

struct RunReport {
  std::vector<HistoryRow> history;
  TimingSummary timing;
  Metrics metrics;
  bool converged = false;
  std::string stop_reason = "iteration budget";
  std::int64_t steps_run = 0;
  double final_eps = std::numeric_limits<double>::quiet_NaN();
  double eps_abs_error = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * double(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

inline void summarize_timing(TimingSummary& t) {
  t.median_s = percentile(t.samples, 0.5);
  t.p10_s = percentile(t.samples, 0.1);
  t.p90_s = percentile(t.samples, 0.9);
}

}  // namespace detail

// Number of initial steps excluded from every timing statistic.
constexpr int kTimingWarmup = 10;

// Wall-clock timing of an arbitrary step callable: kTimingWarmup untimed
// warmup calls, then `repetitions` timed ones.
inline TimingSummary time_epochs(const std::function<void()>& step,
                                 int repetitions) {
  if (repetitions < 10)
    throw InvalidArgumentError("time_epochs: need at least 10 repetitions");
  for (int i = 0; i < kTimingWarmup; ++i) step();
  TimingSummary t;
  t.samples.reserve(static_cast<std::size_t>(repetitions));
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    step();
    const auto t1 = std::chrono::steady_clock::now();
    t.samples.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  detail::summarize_timing(t);
  return t;
}

// ---------------------------------------------------------------------------
// Problem assembly: everything a training step needs, with the evaluation
// batch laid out as [interior quadrature | boundary | sensors].

enum class LossForm { weak, strong };

template <typename Real>
struct ProblemAssembly {
  ElementTensors<Real> tensors;  // forcing assembled
  PdeCoefficients<Real> coeffs;
  LossForm form = LossForm::weak;
  KernelKind kernel = KernelKind::tensor;  // weak form only
  BoundarySet boundary;
  SensorSet sensors;  // empty for forward runs
  Eigen::VectorXd strong_forcing;  // f at quad points (strong form only)

  // loop kernel inputs; filled only when kernel == loop
  Mesh mesh;
  ReferenceBasis basis;
  QuadratureRule2D rule;
  ScalarField2D forcing_field;
  LoopMode loop_mode = LoopMode::general;
  // matrix kernel premultipliers; filled only when kernel == matrix
  std::optional<RegularPremultipliers<Real>> premult;

  std::vector<Point2> batch;  // interior ++ boundary ++ sensor points
  Eigen::Index n_interior = 0, n_boundary = 0, n_sensors = 0;

  void build_batch() {
    n_interior = static_cast<Eigen::Index>(tensors.quad_points.size());
    n_boundary = static_cast<Eigen::Index>(boundary.points.size());
    n_sensors = static_cast<Eigen::Index>(sensors.points.size());
    batch = tensors.quad_points;
    batch.insert(batch.end(), boundary.points.begin(), boundary.points.end());
    batch.insert(batch.end(), sensors.points.begin(), sensors.points.end());
  }
};

// The per-step objective: weak or strong interior residual plus the penalty
// terms, with adjoints for everything.  Components of the last call are left
// in `last` for history recording.
template <typename Real>
struct CompositeObjective {
  const ProblemAssembly<Real>* pa = nullptr;
  LossWeights weights;
  LossBreakdown<Real> last;

  Real operator()(const NetworkEvaluation<Real>& ev,
                  EvaluationAdjoints<Real>& adj) {
    const auto& a = *pa;
    if (a.form == LossForm::weak) {
      switch (a.kernel) {
        case KernelKind::loop:
          last.variational =
              variational_loss_loop(a.mesh, a.basis, a.rule,
                                    a.forcing_field, ev, a.coeffs,
                                    a.loop_mode, Real(1), &adj)
                  .loss;
          break;
        case KernelKind::matrix:
          last.variational =
              variational_loss_matrix(*a.premult, ev, a.coeffs, Real(1),
                                      &adj)
                  .loss;
          break;
        case KernelKind::tensor:
          last.variational =
              variational_loss_tensor(a.tensors, ev, a.coeffs, Real(1),
                                      &adj)
                  .loss;
          break;
      }
    } else {
      last.variational = strong_residual_loss(
          ev, 0, a.n_interior, a.coeffs, a.strong_forcing, Real(1), &adj);
    }
    detail::ensure_adjoint(adj.u_bar, ev.n_points());
    last.boundary = a.n_boundary == 0
                        ? Real(0)
                        : mean_squared_mismatch_adjoint<Real>(
                              ev.u.segment(a.n_interior, a.n_boundary),
                              a.boundary.values,
                              static_cast<Real>(weights.tau),
                              adj.u_bar.segment(a.n_interior, a.n_boundary));
    last.sensor =
        a.n_sensors == 0
            ? Real(0)
            : mean_squared_mismatch_adjoint<Real>(
                  ev.u.segment(a.n_interior + a.n_boundary, a.n_sensors),
                  a.sensors.values, static_cast<Real>(weights.gamma),
                  adj.u_bar.segment(a.n_interior + a.n_boundary,
                                    a.n_sensors));
    return last.total(weights);
  }
};

// ---------------------------------------------------------------------------
// The training loop.  Forward and inverse runs share it; inverse behaviour
// is driven by the presence of a trainable coefficient (scalar source) or
// the spatial head, plus the convergence spec.

template <typename Real>
RunReport train(DenseNetwork<Real>& net, ProblemAssembly<Real>& pa,
                const TrainConfig& cfg) {
  if (cfg.iterations < 1)
    throw InvalidArgumentError("train: iterations must be >= 1");
  if (pa.batch.empty()) pa.build_batch();
  const int order = pa.form == LossForm::weak ? 1 : 2;

  CompositeObjective<Real> objective;
  objective.pa = &pa;
  objective.weights = cfg.weights;
  LossEvaluator<Real> evaluator = [&objective](
                                      const NetworkEvaluation<Real>& ev,
                                      EvaluationAdjoints<Real>& adj) -> Real {
    return objective(ev, adj);
  };

  const bool tracks_eps = pa.coeffs.source == EpsSource::scalar;
  VecX<Real> params = to_parameters(net);
  AdamState<Real> state(params.size());
  RunReport report;

  // loss plateau bookkeeping
  double best_loss = std::numeric_limits<double>::infinity();
  std::int64_t best_step = 0;

  const auto record = [&](std::int64_t step, double total, double lr) {
    HistoryRow row;
    row.step = step;
    row.total = total;
    row.variational = static_cast<double>(objective.last.variational);
    row.boundary = static_cast<double>(objective.last.boundary);
    row.sensor = static_cast<double>(objective.last.sensor);
    row.lr = lr;
    if (tracks_eps)
      row.eps = static_cast<double>(
          net.scalars[static_cast<std::size_t>(pa.coeffs.eps_scalar_index)]
              .second);
    report.history.push_back(row);
  };

  for (std::int64_t step = 1; step <= cfg.iterations; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lr = lr_at(cfg.lr, step - 1);
    LossAndGradient<Real> lg;
    try {
      lg = loss_and_parameter_gradient(net, pa.batch, order, evaluator);
      adam_step(params, lg.gradient, state, static_cast<Real>(lr));
    } catch (const NumericOverflowError& e) {
      throw TrainingAbortError(step, std::string("step ") +
                                         std::to_string(step) + ": " +
                                         e.what());
    }
    from_parameters(net, params);
    const auto t1 = std::chrono::steady_clock::now();

    if (step > kTimingWarmup &&
        (cfg.timing_window == 0 ||
         static_cast<int>(report.timing.samples.size()) < cfg.timing_window))
      report.timing.samples.push_back(
          std::chrono::duration<double>(t1 - t0).count());

    const double total = static_cast<double>(lg.loss);
    report.steps_run = step;
    if (step == 1 || step == cfg.iterations ||
        (cfg.log_every > 0 && step % cfg.log_every == 0))
      record(step, total, lr);

    // convergence checks (after the update, so the recorded eps is current)
    if (tracks_eps && cfg.convergence.eps_abs_tol && cfg.convergence.eps_actual) {
      const double eps_now = static_cast<double>(
          net.scalars[static_cast<std::size_t>(pa.coeffs.eps_scalar_index)]
              .second);
      if (std::abs(eps_now - *cfg.convergence.eps_actual) <
          *cfg.convergence.eps_abs_tol) {
        report.converged = true;
        report.stop_reason = "coefficient within tolerance";
        if (report.history.empty() || report.history.back().step != step)
          record(step, total, lr);
        break;
      }
    }
    if (cfg.convergence.loss_tol) {
      if (total < best_loss * (1.0 - *cfg.convergence.loss_tol)) {
        best_loss = total;
        best_step = step;
      } else if (step - best_step >= cfg.convergence.plateau_window) {
        report.converged = true;
        report.stop_reason = "loss plateau";
        if (report.history.empty() || report.history.back().step != step)
          record(step, total, lr);
        break;
      }
      if (total < best_loss) best_loss = total;
    }
  }

  detail::summarize_timing(report.timing);
  if (tracks_eps) {
    report.final_eps = static_cast<double>(
        net.scalars[static_cast<std::size_t>(pa.coeffs.eps_scalar_index)]
            .second);
    if (cfg.convergence.eps_actual)
      report.eps_abs_error =
          std::abs(report.final_eps - *cfg.convergence.eps_actual);
  }
  return report;
}

// Explicit names for the two directions; inverse additionally insists on
// sensors being present.
template <typename Real>
RunReport train_forward(DenseNetwork<Real>& net, ProblemAssembly<Real>& pa,
                        const TrainConfig& cfg) {
  return train(net, pa, cfg);
}

template <typename Real>
RunReport train_inverse(DenseNetwork<Real>& net, ProblemAssembly<Real>& pa,
                        const TrainConfig& cfg) {
  if (pa.sensors.points.empty())
    throw InvalidArgumentError("train_inverse: sensors are required");
  if (cfg.weights.gamma <= 0.0)
    throw InvalidArgumentError("train_inverse: gamma must be positive");
  return train(net, pa, cfg);
}

// ---------------------------------------------------------------------------
// Error metrics on a uniform evaluation grid (inclusive endpoints).

struct GridSpec {
  int nx = 100, ny = 100;
  std::pair<double, double> x_range{0.0, 1.0};
  std::pair<double, double> y_range{0.0, 1.0};
};

inline std::vector<Point2> grid_points(const GridSpec& g) {
  if (g.nx < 2 || g.ny < 2)
    throw InvalidArgumentError("grid_points: need at least 2 per axis");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x_range.first +
                       (g.x_range.second - g.x_range.first) * i / (g.nx - 1);
      const double y = g.y_range.first +
                       (g.y_range.second - g.y_range.first) * j / (g.ny - 1);
      pts.push_back({x, y});
    }
  return pts;
}

template <typename Real>
Metrics evaluate_metrics(const DenseNetwork<Real>& net,
                         const ScalarField2D& exact, const GridSpec& g) {
  const auto pts = grid_points(g);
  const auto ev = evaluate(net, pts, 0);
  Metrics m;
  double sum_abs = 0.0, sum_sq = 0.0, sum_exact_sq = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double ue = exact(pts[i].x, pts[i].y);
    const double d = static_cast<double>(ev.u[static_cast<Eigen::Index>(i)]) - ue;
    sum_abs += std::abs(d);
    sum_sq += d * d;
    sum_exact_sq += ue * ue;
    m.max_err = std::max(m.max_err, std::abs(d));
  }
  m.mae = sum_abs / double(pts.size());
  m.rel_l2 = sum_exact_sq > 0.0 ? std::sqrt(sum_sq / sum_exact_sq)
                                : std::sqrt(sum_sq);
  return m;
}

}  // namespace vpinn
