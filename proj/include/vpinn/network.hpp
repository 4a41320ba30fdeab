#pragma once

// Dense fully-connected network with analytic space derivatives.
//
// First and second derivatives of the network output with respect to its two
// inputs are obtained by forward-mode tangent streams fused with the forward
// pass: each hidden layer propagates, besides its value, the directional
// tangents for the x and y unit directions (and second-order tangents when
// requested).  Parameter gradients of any scalar loss over the produced
// values and derivatives are computed by a single reverse sweep over that
// fused graph, so mixed derivatives like d2 loss / (dx dW) come out exactly.
//
// All loss-gradient evaluation is chunked over points with serial
// accumulation in a fixed order: results are bitwise reproducible for a
// given build, seed and thread-independent by construction.

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vpinn/core.hpp"
#include "vpinn/geometry.hpp"

namespace vpinn {

enum class Activation { tanh, sigmoid };

inline const char* activation_name(Activation a) {
  return a == Activation::tanh ? "tanh" : "sigmoid";
}

template <typename Real>
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VecX = Eigen::Vector<Real, Eigen::Dynamic>;

template <typename Real>
struct DenseNetwork {
  std::vector<int> layer_sizes;  // input width first, output channels last
  Activation activation = Activation::tanh;
  std::vector<MatX<Real>> weights;  // weights[l] is (sizes[l+1] x sizes[l])
  std::vector<VecX<Real>> biases;
  // Extra trainable scalars (e.g. an unknown PDE coefficient), appended to
  // the parameter vector after all layer parameters.
  std::vector<std::pair<std::string, Real>> scalars;

  int n_layers() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return layer_sizes.front(); }
  int output_channels() const { return layer_sizes.back(); }

  int parameter_count() const {
    int n = 0;
    for (int l = 0; l < n_layers(); ++l)
      n += static_cast<int>(weights[l].size() + biases[l].size());
    return n + static_cast<int>(scalars.size());
  }
};

// Glorot-uniform initialisation, bound sqrt(6 / (fan_in + fan_out)), weights
// drawn row-major layer by layer from a single seeded stream, biases zero.
template <typename Real = double>
DenseNetwork<Real> init_network(
    const std::vector<int>& layer_sizes, std::uint64_t seed,
    Activation activation = Activation::tanh,
    const std::vector<std::pair<std::string, double>>& scalars = {}) {
  if (layer_sizes.size() < 2)
    throw InvalidArgumentError("init_network: need at least input and output");
  for (const int s : layer_sizes)
    if (s < 1) throw InvalidArgumentError("init_network: layer sizes must be >= 1");
  if (layer_sizes.front() != 2)
    throw InvalidArgumentError("init_network: input dimension must be 2");

  DenseNetwork<Real> net;
  net.layer_sizes = layer_sizes;
  net.activation = activation;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    MatX<Real> w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c)
        w(r, c) = static_cast<Real>(rng.uniform(-bound, bound));
    net.weights.push_back(std::move(w));
    net.biases.push_back(VecX<Real>::Zero(fan_out));
  }
  for (const auto& [name, value] : scalars)
    net.scalars.emplace_back(name, static_cast<Real>(value));
  return net;
}

// Flat parameter order: per layer the weight matrix row-major, then its
// bias; trainable scalars last.
template <typename Real>
VecX<Real> to_parameters(const DenseNetwork<Real>& net) {
  VecX<Real> p(net.parameter_count());
  Eigen::Index at = 0;
  for (int l = 0; l < net.n_layers(); ++l) {
    const auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) p[at++] = w(r, c);
    p.segment(at, net.biases[l].size()) = net.biases[l];
    at += net.biases[l].size();
  }
  for (const auto& [name, value] : net.scalars) p[at++] = value;
  return p;
}

template <typename Real>
void from_parameters(DenseNetwork<Real>& net, const VecX<Real>& p) {
  if (p.size() != net.parameter_count())
    throw ContractViolationError("from_parameters: size mismatch");
  Eigen::Index at = 0;
  for (int l = 0; l < net.n_layers(); ++l) {
    auto& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = p[at++];
    net.biases[l] = p.segment(at, net.biases[l].size());
    at += net.biases[l].size();
  }
  for (auto& [name, value] : net.scalars) value = p[at++];
}

template <typename Real>
Real softplus(Real x) {
  return std::log1p(std::exp(-std::abs(x))) + std::max<Real>(x, Real(0));
}

template <typename Real>
Real sigmoid(Real x) {
  return Real(1) / (Real(1) + std::exp(-x));
}

// Values and space derivatives of the network over a batch of points.
// u and its derivatives refer to output channel 0; when the network has a
// second output channel, eps holds softplus(channel 1) — the positive
// spatial-coefficient head.
template <typename Real>
struct NetworkEvaluation {
  VecX<Real> u;
  VecX<Real> du_dx, du_dy;      // order >= 1
  VecX<Real> d2u_dx2, d2u_dy2;  // order == 2
  VecX<Real> eps;               // output_channels >= 2
  std::vector<Real> scalar_values;
  int order = 1;
  Eigen::Index n_points() const { return u.size(); }
};

// Adjoint seeds for every exposed quantity.  Evaluators resize only the
// arrays they use; empty means zero.
template <typename Real>
struct EvaluationAdjoints {
  VecX<Real> u_bar;
  VecX<Real> du_dx_bar, du_dy_bar;
  VecX<Real> d2u_dx2_bar, d2u_dy2_bar;
  VecX<Real> eps_bar;
  std::vector<Real> scalar_bar;  // one slot per trainable scalar
};

namespace detail {

constexpr int kChunk = 512;

// Element-wise derivative helpers, computed from the activation OUTPUT z.
template <typename Real>
struct ActDerivs {
  // s1 = act', s2 = act'', s3 = act''' as functions of z = act(a)
  static void fill(Activation act, const MatX<Real>& z, MatX<Real>& s1,
                   MatX<Real>* s2, MatX<Real>* s3) {
    if (act == Activation::tanh) {
      s1 = (Real(1) - z.array().square()).matrix();
      if (s2) *s2 = (Real(-2) * z.array() * s1.array()).matrix();
      if (s3)
        *s3 = (s1.array() *
               (Real(4) * z.array().square() - Real(2) * s1.array()))
                  .matrix();
    } else {
      s1 = (z.array() * (Real(1) - z.array())).matrix();
      if (s2) *s2 = (s1.array() * (Real(1) - Real(2) * z.array())).matrix();
      if (s3)
        *s3 = (s1.array() * (Real(1) - Real(6) * z.array() +
                             Real(6) * z.array().square()))
                  .matrix();
    }
  }
};

// Per-chunk forward state kept for the reverse sweep.  X[l] is the input of
// layer l (X[0] is the point batch); TAx/TAy and T2Ax/T2Ay are the
// pre-activation tangents of each layer.  The output layer is linear, so its
// pre-activation IS the output.
template <typename Real>
struct Workspace {
  std::vector<MatX<Real>> X, TXx, TXy, T2Xx, T2Xy;  // inputs per layer, + final output at back
  std::vector<MatX<Real>> TAx, TAy, T2Ax, T2Ay;     // pre-activation tangents
  std::vector<MatX<Real>> s1, s2, s3;               // activation derivatives per hidden layer

  void run_forward(const DenseNetwork<Real>& net, const MatX<Real>& input,
                   int order) {
    const int L = net.n_layers();
    const bool tang = order >= 1;
    const bool second = order >= 2;
    X.assign(L + 1, {});
    if (tang) {
      TXx.assign(L + 1, {});
      TXy.assign(L + 1, {});
      TAx.assign(L, {});
      TAy.assign(L, {});
    }
    if (second) {
      T2Xx.assign(L + 1, {});
      T2Xy.assign(L + 1, {});
      T2Ax.assign(L, {});
      T2Ay.assign(L, {});
    }
    s1.assign(L, {});
    s2.assign(L, {});
    s3.assign(L, {});

    const Eigen::Index m = input.cols();
    X[0] = input;
    if (tang) {
      TXx[0] = MatX<Real>::Zero(2, m);
      TXx[0].row(0).setOnes();
      TXy[0] = MatX<Real>::Zero(2, m);
      TXy[0].row(1).setOnes();
    }
    if (second) {
      T2Xx[0] = MatX<Real>::Zero(2, m);
      T2Xy[0] = MatX<Real>::Zero(2, m);
    }

    for (int l = 0; l < L; ++l) {
      const auto& W = net.weights[l];
      MatX<Real> A = (W * X[l]).colwise() + net.biases[l];
      if (tang) {
        TAx[l] = W * TXx[l];
        TAy[l] = W * TXy[l];
      }
      if (second) {
        T2Ax[l] = W * T2Xx[l];
        T2Ay[l] = W * T2Xy[l];
      }
      if (l == L - 1) {
        // linear output layer
        X[L] = std::move(A);
        if (tang) {
          TXx[L] = TAx[l];
          TXy[L] = TAy[l];
        }
        if (second) {
          T2Xx[L] = T2Ax[l];
          T2Xy[L] = T2Ay[l];
        }
      } else {
        MatX<Real>& z = X[l + 1];
        if (net.activation == Activation::tanh)
          z = A.array().tanh().matrix();
        else
          z = (Real(1) / (Real(1) + (-A.array()).exp())).matrix();
        ActDerivs<Real>::fill(net.activation, z, s1[l],
                              (tang || second) ? &s2[l] : nullptr,
                              second ? &s3[l] : nullptr);
        if (tang) {
          TXx[l + 1] = s1[l].cwiseProduct(TAx[l]);
          TXy[l + 1] = s1[l].cwiseProduct(TAy[l]);
        }
        if (second) {
          T2Xx[l + 1] = s2[l].cwiseProduct(TAx[l].cwiseProduct(TAx[l])) +
                        s1[l].cwiseProduct(T2Ax[l]);
          T2Xy[l + 1] = s2[l].cwiseProduct(TAy[l].cwiseProduct(TAy[l])) +
                        s1[l].cwiseProduct(T2Ay[l]);
        }
      }
    }
  }

  // Reverse sweep.  Ybar/TYxbar/... are adjoints of the network outputs
  // (channels x m); gradient contributions are accumulated into grad using
  // the flat parameter layout.
  void run_reverse(const DenseNetwork<Real>& net, int order,
                   const MatX<Real>& Ybar, const MatX<Real>& TYxbar,
                   const MatX<Real>& TYybar, const MatX<Real>& T2Yxbar,
                   const MatX<Real>& T2Yybar, VecX<Real>& grad) const {
    const int L = net.n_layers();
    const bool tang = order >= 1;
    const bool second = order >= 2;

    MatX<Real> Xbar, TZxbar, TZybar, T2Zxbar, T2Zybar;
    // Adjoints of the output-layer pre-activations are the output adjoints.
    MatX<Real> Abar = Ybar;
    MatX<Real> TAxbar, TAybar, T2Axbar, T2Aybar;
    if (tang) {
      TAxbar = TYxbar;
      TAybar = TYybar;
    }
    if (second) {
      T2Axbar = T2Yxbar;
      T2Aybar = T2Yybar;
    }

    // Flat-parameter offsets of each layer's weight and bias blocks.
    std::vector<Eigen::Index> w_off(L), b_off(L);
    {
      Eigen::Index o = 0;
      for (int l = 0; l < L; ++l) {
        w_off[l] = o;
        o += net.weights[l].size();
        b_off[l] = o;
        o += net.biases[l].size();
      }
    }

    for (int l = L - 1; l >= 0; --l) {
      const auto& W = net.weights[l];
      // Parameter gradients: value path plus every active tangent path.
      using RowMajorMap = Eigen::Map<
          Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
      RowMajorMap Wbar(grad.data() + w_off[l], W.rows(), W.cols());
      Wbar.noalias() += Abar * X[l].transpose();
      if (tang) {
        Wbar.noalias() += TAxbar * TXx[l].transpose();
        Wbar.noalias() += TAybar * TXy[l].transpose();
      }
      if (second) {
        Wbar.noalias() += T2Axbar * T2Xx[l].transpose();
        Wbar.noalias() += T2Aybar * T2Xy[l].transpose();
      }
      grad.segment(b_off[l], W.rows()) += Abar.rowwise().sum();

      if (l == 0) break;

      // Propagate to the layer input...
      Xbar.noalias() = W.transpose() * Abar;
      if (tang) {
        TZxbar.noalias() = W.transpose() * TAxbar;
        TZybar.noalias() = W.transpose() * TAybar;
      }
      if (second) {
        T2Zxbar.noalias() = W.transpose() * T2Axbar;
        T2Zybar.noalias() = W.transpose() * T2Aybar;
      }

      // ...and through the activation of layer l-1.
      const int h = l - 1;
      Abar = s1[h].cwiseProduct(Xbar);
      if (tang) {
        Abar += s2[h].cwiseProduct(TAx[h].cwiseProduct(TZxbar)) +
                s2[h].cwiseProduct(TAy[h].cwiseProduct(TZybar));
        TAxbar = s1[h].cwiseProduct(TZxbar);
        TAybar = s1[h].cwiseProduct(TZybar);
      }
      if (second) {
        Abar += s3[h].cwiseProduct(
                    TAx[h].cwiseProduct(TAx[h]).cwiseProduct(T2Zxbar)) +
                s2[h].cwiseProduct(T2Ax[h].cwiseProduct(T2Zxbar)) +
                s3[h].cwiseProduct(
                    TAy[h].cwiseProduct(TAy[h]).cwiseProduct(T2Zybar)) +
                s2[h].cwiseProduct(T2Ay[h].cwiseProduct(T2Zybar));
        TAxbar += Real(2) * s2[h].cwiseProduct(TAx[h].cwiseProduct(T2Zxbar));
        TAybar += Real(2) * s2[h].cwiseProduct(TAy[h].cwiseProduct(T2Zybar));
        T2Axbar = s1[h].cwiseProduct(T2Zxbar);
        T2Aybar = s1[h].cwiseProduct(T2Zybar);
      }
    }
  }
};

template <typename Real>
MatX<Real> points_to_matrix(const std::vector<Point2>& pts, Eigen::Index begin,
                            Eigen::Index count) {
  MatX<Real> m(2, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    m(0, i) = static_cast<Real>(pts[begin + i].x);
    m(1, i) = static_cast<Real>(pts[begin + i].y);
  }
  return m;
}

// Copies the outputs of a forward-run workspace into the evaluation arrays
// at the given offset.
template <typename Real>
void harvest_outputs(const Workspace<Real>& ws, const DenseNetwork<Real>& net,
                     int order, Eigen::Index offset,
                     NetworkEvaluation<Real>& eval) {
  const int L = net.n_layers();
  const auto& Y = ws.X[L];
  const Eigen::Index m = Y.cols();
  eval.u.segment(offset, m) = Y.row(0);
  if (order >= 1) {
    eval.du_dx.segment(offset, m) = ws.TXx[L].row(0);
    eval.du_dy.segment(offset, m) = ws.TXy[L].row(0);
  }
  if (order >= 2) {
    eval.d2u_dx2.segment(offset, m) = ws.T2Xx[L].row(0);
    eval.d2u_dy2.segment(offset, m) = ws.T2Xy[L].row(0);
  }
  if (net.output_channels() >= 2) {
    for (Eigen::Index i = 0; i < m; ++i)
      eval.eps[offset + i] = softplus(Y(1, i));
  }
}

}  // namespace detail

// Network values and space derivatives at a point batch.
// order 0: u (and eps) only; 1: plus du/dx, du/dy; 2: plus d2u/dx2, d2u/dy2.
template <typename Real>
NetworkEvaluation<Real> evaluate(const DenseNetwork<Real>& net,
                                 const std::vector<Point2>& points,
                                 int order = 1) {
  if (order < 0 || order > 2)
    throw InvalidArgumentError("evaluate: order must be 0, 1 or 2");
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  NetworkEvaluation<Real> eval;
  eval.order = order;
  eval.u.resize(n);
  if (order >= 1) {
    eval.du_dx.resize(n);
    eval.du_dy.resize(n);
  }
  if (order >= 2) {
    eval.d2u_dx2.resize(n);
    eval.d2u_dy2.resize(n);
  }
  if (net.output_channels() >= 2) eval.eps.resize(n);
  for (const auto& [name, value] : net.scalars)
    eval.scalar_values.push_back(value);

  detail::Workspace<Real> ws;
  for (Eigen::Index begin = 0; begin < n; begin += detail::kChunk) {
    const Eigen::Index m = std::min<Eigen::Index>(detail::kChunk, n - begin);
    ws.run_forward(net, detail::points_to_matrix<Real>(points, begin, m),
                   order);
    detail::harvest_outputs(ws, net, order, begin, eval);
  }
  if (!eval.u.allFinite() || (order >= 1 && !(eval.du_dx.allFinite() &&
                                              eval.du_dy.allFinite())) ||
      (order >= 2 &&
       !(eval.d2u_dx2.allFinite() && eval.d2u_dy2.allFinite())))
    throw NumericOverflowError("evaluate: non-finite network output");
  return eval;
}

template <typename Real>
using LossEvaluator = std::function<Real(const NetworkEvaluation<Real>&,
                                         EvaluationAdjoints<Real>&)>;

template <typename Real>
struct LossAndGradient {
  Real loss = Real(0);
  VecX<Real> gradient;
};

namespace detail {

// Reverse pass over one chunk: recomputes the forward state and runs the
// reverse sweep with output adjoints sliced from the full-batch arrays.
template <typename Real>
void reverse_chunk(const DenseNetwork<Real>& net,
                   const std::vector<Point2>& points, int order,
                   Eigen::Index begin, Eigen::Index m,
                   const NetworkEvaluation<Real>& eval,
                   const EvaluationAdjoints<Real>& adj, Workspace<Real>& ws,
                   VecX<Real>& grad) {
  ws.run_forward(net, points_to_matrix<Real>(points, begin, m), order);
  const int C = net.output_channels();
  MatX<Real> Ybar = MatX<Real>::Zero(C, m);
  MatX<Real> TYx, TYy, T2Yx, T2Yy;
  if (adj.u_bar.size() > 0) Ybar.row(0) = adj.u_bar.segment(begin, m);
  if (C >= 2 && adj.eps_bar.size() > 0) {
    // eps = softplus(y1): d eps/d y1 = sigmoid(y1), taken from the
    // recomputed raw output.
    const int L = net.n_layers();
    for (Eigen::Index i = 0; i < m; ++i)
      Ybar(1, i) = adj.eps_bar[begin + i] * sigmoid(ws.X[L](1, i));
  }
  if (order >= 1) {
    TYx = MatX<Real>::Zero(C, m);
    TYy = MatX<Real>::Zero(C, m);
    if (adj.du_dx_bar.size() > 0) TYx.row(0) = adj.du_dx_bar.segment(begin, m);
    if (adj.du_dy_bar.size() > 0) TYy.row(0) = adj.du_dy_bar.segment(begin, m);
  }
  if (order >= 2) {
    T2Yx = MatX<Real>::Zero(C, m);
    T2Yy = MatX<Real>::Zero(C, m);
    if (adj.d2u_dx2_bar.size() > 0)
      T2Yx.row(0) = adj.d2u_dx2_bar.segment(begin, m);
    if (adj.d2u_dy2_bar.size() > 0)
      T2Yy.row(0) = adj.d2u_dy2_bar.segment(begin, m);
  }
  ws.run_reverse(net, order, Ybar, TYx, TYy, T2Yx, T2Yy, grad);
  (void)eval;
}

}  // namespace detail

// Loss and full parameter gradient in two passes: a chunked forward pass
// storing only network outputs, one evaluator call producing the loss and
// the output adjoints, then a chunked recompute-and-reverse pass.  Memory
// stays bounded by the chunk size regardless of batch size.
template <typename Real>
LossAndGradient<Real> loss_and_parameter_gradient(
    const DenseNetwork<Real>& net, const std::vector<Point2>& points,
    int order, const LossEvaluator<Real>& evaluator) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  NetworkEvaluation<Real> eval = evaluate(net, points, order);

  EvaluationAdjoints<Real> adj;
  adj.scalar_bar.assign(net.scalars.size(), Real(0));
  LossAndGradient<Real> out;
  out.loss = evaluator(eval, adj);
  out.gradient = VecX<Real>::Zero(net.parameter_count());

  detail::Workspace<Real> ws;
  for (Eigen::Index begin = 0; begin < n; begin += detail::kChunk) {
    const Eigen::Index m = std::min<Eigen::Index>(detail::kChunk, n - begin);
    detail::reverse_chunk(net, points, order, begin, m, eval, adj, ws,
                          out.gradient);
  }
  for (std::size_t s = 0; s < net.scalars.size(); ++s)
    out.gradient[out.gradient.size() - net.scalars.size() + s] +=
        adj.scalar_bar[s];
  return out;
}

// Reverse-only entry point for callers that build adjoints themselves for a
// small batch (the per-element training path): recomputes the forward state
// for `points` and accumulates the parameter gradient into grad.
template <typename Real>
void accumulate_parameter_gradient(const DenseNetwork<Real>& net,
                                   const std::vector<Point2>& points,
                                   int order,
                                   const EvaluationAdjoints<Real>& adj,
                                   VecX<Real>& grad) {
  if (grad.size() != net.parameter_count())
    throw ContractViolationError("accumulate_parameter_gradient: bad size");
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  NetworkEvaluation<Real> unused;
  detail::Workspace<Real> ws;
  for (Eigen::Index begin = 0; begin < n; begin += detail::kChunk) {
    const Eigen::Index m = std::min<Eigen::Index>(detail::kChunk, n - begin);
    detail::reverse_chunk(net, points, order, begin, m, unused, adj, ws, grad);
  }
  for (std::size_t s = 0; s < net.scalars.size(); ++s)
    if (!adj.scalar_bar.empty())
      grad[grad.size() - net.scalars.size() + s] += adj.scalar_bar[s];
}

// ---------------------------------------------------------------------------
// Checkpointing: magic, activation, layer sizes, scalar names, then the
// parameter vector as little-endian f64.

inline constexpr char kCheckpointMagic[8] = {'V', 'P', 'N', 'N',
                                             'E', 'T', '0', '1'};

template <typename Real>
void save_checkpoint(const DenseNetwork<Real>& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const auto put_u64 = [&](std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
  };
  out.write(kCheckpointMagic, 8);
  put_u64(net.activation == Activation::tanh ? 0 : 1);
  put_u64(net.layer_sizes.size());
  for (const int s : net.layer_sizes) put_u64(static_cast<std::uint64_t>(s));
  put_u64(net.scalars.size());
  for (const auto& [name, value] : net.scalars) {
    put_u64(name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  const VecX<Real> p = to_parameters(net);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = static_cast<double>(p[i]);
    out.write(reinterpret_cast<const char*>(&v), 8);
  }
  if (!out) throw IoError("write failed: " + path);
}

template <typename Real = double>
DenseNetwork<Real> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  const auto get_u64 = [&]() {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw IoError("truncated checkpoint: " + path);
    return v;
  };
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw IoError("not a checkpoint file: " + path);
  const std::uint64_t act = get_u64();
  const std::uint64_t n_sizes = get_u64();
  if (n_sizes < 2 || n_sizes > 64) throw IoError("corrupt checkpoint: " + path);
  std::vector<int> sizes(n_sizes);
  for (auto& s : sizes) s = static_cast<int>(get_u64());
  const std::uint64_t n_scalars = get_u64();
  if (n_scalars > 64) throw IoError("corrupt checkpoint: " + path);
  std::vector<std::pair<std::string, double>> scalars;
  for (std::uint64_t i = 0; i < n_scalars; ++i) {
    const std::uint64_t len = get_u64();
    if (len > 256) throw IoError("corrupt checkpoint: " + path);
    std::string name(len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(len));
    if (!in) throw IoError("truncated checkpoint: " + path);
    scalars.emplace_back(name, 0.0);
  }
  DenseNetwork<Real> net = init_network<Real>(
      sizes, 0, act == 0 ? Activation::tanh : Activation::sigmoid, scalars);
  VecX<Real> p(net.parameter_count());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw IoError("truncated checkpoint: " + path);
    p[i] = static_cast<Real>(v);
  }
  from_parameters(net, p);
  return net;
}

}  // namespace vpinn
