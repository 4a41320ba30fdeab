#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>

#include "vpinn/network.hpp"

using namespace vpinn;

namespace {

// One hidden unit, hand-set weights: everything below has a closed form.
//   u(x,y) = w2 * tanh(w11 x + w12 y + b1) + b2
DenseNetwork<double> one_unit_net(double w11, double w12, double b1, double w2,
                                  double b2) {
  auto net = init_network<double>({2, 1, 1}, 0);
  net.weights[0](0, 0) = w11;
  net.weights[0](0, 1) = w12;
  net.biases[0][0] = b1;
  net.weights[1](0, 0) = w2;
  net.biases[1][0] = b2;
  return net;
}

double loss_only(const DenseNetwork<double>& net,
                 const std::vector<Point2>& pts, int order,
                 const LossEvaluator<double>& ev) {
  auto eval = evaluate(net, pts, order);
  EvaluationAdjoints<double> adj;
  adj.scalar_bar.assign(net.scalars.size(), 0.0);
  return ev(eval, adj);
}

}  // namespace

TEST_CASE("initialisation is deterministic and respects the glorot bound") {
  const auto a = init_network<double>({2, 30, 30, 1}, 42);
  const auto b = init_network<double>({2, 30, 30, 1}, 42);
  const auto c = init_network<double>({2, 30, 30, 1}, 43);
  CHECK(to_parameters(a) == to_parameters(b));
  CHECK(to_parameters(a) != to_parameters(c));

  const double bound0 = std::sqrt(6.0 / (2 + 30));
  CHECK(a.weights[0].maxCoeff() <= bound0);
  CHECK(a.weights[0].minCoeff() >= -bound0);
  CHECK(a.weights[0].cwiseAbs().maxCoeff() > 0.0);
  for (const auto& bias : a.biases) CHECK(bias.isZero());

  CHECK(a.parameter_count() == 2 * 30 + 30 + 30 * 30 + 30 + 30 + 1);
  // The four-layer tanh network used throughout the experiments.
  CHECK(init_network<double>({2, 30, 30, 30, 1}, 0).parameter_count() == 1981);

  CHECK_THROWS_AS(init_network<double>({2}, 0), InvalidArgumentError);
  CHECK_THROWS_AS(init_network<double>({3, 4, 1}, 0), InvalidArgumentError);
  CHECK_THROWS_AS(init_network<double>({2, 0, 1}, 0), InvalidArgumentError);
}

TEST_CASE("parameter vector round-trips bitwise") {
  auto net = init_network<double>({2, 7, 5, 1}, 9,
                                  Activation::tanh, {{"eps", 2.0}});
  const auto p = to_parameters(net);
  REQUIRE(p.size() == net.parameter_count());
  CHECK(p[p.size() - 1] == 2.0);

  auto net2 = init_network<double>({2, 7, 5, 1}, 1234, Activation::tanh,
                                   {{"eps", 0.0}});
  from_parameters(net2, p);
  CHECK(to_parameters(net2) == p);
  CHECK(net2.scalars[0].second == 2.0);

  VecX<double> wrong = VecX<double>::Zero(p.size() + 1);
  CHECK_THROWS_AS(from_parameters(net2, wrong), ContractViolationError);
}

TEST_CASE("values and derivatives match the one-unit closed form") {
  const double w11 = 0.7, w12 = -0.4, b1 = 0.2, w2 = 1.3, b2 = -0.5;
  const auto net = one_unit_net(w11, w12, b1, w2, b2);
  const std::vector<Point2> pts{{0.3, -0.8}, {-1.1, 0.45}, {2.0, 1.0}};
  const auto eval = evaluate(net, pts, 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double a = w11 * pts[i].x + w12 * pts[i].y + b1;
    const double z = std::tanh(a);
    const double s1 = 1.0 - z * z;
    const double s2 = -2.0 * z * s1;
    CHECK_THAT(eval.u[i], Catch::Matchers::WithinAbs(w2 * z + b2, 1e-14));
    CHECK_THAT(eval.du_dx[i], Catch::Matchers::WithinAbs(w2 * s1 * w11, 1e-14));
    CHECK_THAT(eval.du_dy[i], Catch::Matchers::WithinAbs(w2 * s1 * w12, 1e-14));
    CHECK_THAT(eval.d2u_dx2[i],
               Catch::Matchers::WithinAbs(w2 * s2 * w11 * w11, 1e-14));
    CHECK_THAT(eval.d2u_dy2[i],
               Catch::Matchers::WithinAbs(w2 * s2 * w12 * w12, 1e-14));
  }
}

TEST_CASE("parameter gradients match the one-unit closed form") {
  const double w11 = 0.7, w12 = -0.4, b1 = 0.2, w2 = 1.3, b2 = -0.5;
  const auto net = one_unit_net(w11, w12, b1, w2, b2);
  const Point2 p{0.3, -0.8};
  const double a = w11 * p.x + w12 * p.y + b1;
  const double z = std::tanh(a);
  const double s1 = 1.0 - z * z;
  const double s2 = -2.0 * z * s1;

  SECTION("loss = u") {
    const auto r = loss_and_parameter_gradient<double>(
        net, {p}, 1, [](const NetworkEvaluation<double>& e,
                        EvaluationAdjoints<double>& adj) {
          adj.u_bar = VecX<double>::Ones(1);
          return e.u[0];
        });
    CHECK_THAT(r.loss, Catch::Matchers::WithinAbs(w2 * z + b2, 1e-14));
    // layout: w11 w12 b1 w2 b2
    CHECK_THAT(r.gradient[0], Catch::Matchers::WithinAbs(w2 * s1 * p.x, 1e-14));
    CHECK_THAT(r.gradient[1], Catch::Matchers::WithinAbs(w2 * s1 * p.y, 1e-14));
    CHECK_THAT(r.gradient[2], Catch::Matchers::WithinAbs(w2 * s1, 1e-14));
    CHECK_THAT(r.gradient[3], Catch::Matchers::WithinAbs(z, 1e-14));
    CHECK_THAT(r.gradient[4], Catch::Matchers::WithinAbs(1.0, 1e-14));
  }

  SECTION("loss = du/dx exercises the mixed second derivative") {
    const auto r = loss_and_parameter_gradient<double>(
        net, {p}, 1, [](const NetworkEvaluation<double>& e,
                        EvaluationAdjoints<double>& adj) {
          adj.du_dx_bar = VecX<double>::Ones(1);
          return e.du_dx[0];
        });
    CHECK_THAT(r.loss, Catch::Matchers::WithinAbs(w2 * s1 * w11, 1e-14));
    CHECK_THAT(r.gradient[0], Catch::Matchers::WithinAbs(
                                  w2 * (s2 * w11 * p.x + s1), 1e-14));
    CHECK_THAT(r.gradient[1],
               Catch::Matchers::WithinAbs(w2 * s2 * w11 * p.y, 1e-14));
    CHECK_THAT(r.gradient[2], Catch::Matchers::WithinAbs(w2 * s2 * w11, 1e-14));
    CHECK_THAT(r.gradient[3], Catch::Matchers::WithinAbs(s1 * w11, 1e-14));
    CHECK_THAT(r.gradient[4], Catch::Matchers::WithinAbs(0.0, 1e-16));
  }
}

TEST_CASE("first derivatives agree with finite differences of u") {
  const auto net = init_network<double>({2, 10, 8, 1}, 5);
  const double h = 1e-6;
  for (const Point2 p : {Point2{0.2, 0.7}, Point2{-0.5, 0.1}}) {
    const auto e = evaluate(net, {p}, 2);
    const auto up = evaluate(net, {Point2{p.x + h, p.y}}, 0);
    const auto um = evaluate(net, {Point2{p.x - h, p.y}}, 0);
    CHECK_THAT(e.du_dx[0], Catch::Matchers::WithinAbs(
                               (up.u[0] - um.u[0]) / (2 * h), 1e-7));
    CHECK_THAT(e.d2u_dx2[0],
               Catch::Matchers::WithinAbs(
                   (up.u[0] - 2 * e.u[0] + um.u[0]) / (h * h), 1e-3));
    const auto vp = evaluate(net, {Point2{p.x, p.y + h}}, 0);
    const auto vm = evaluate(net, {Point2{p.x, p.y - h}}, 0);
    CHECK_THAT(e.du_dy[0], Catch::Matchers::WithinAbs(
                               (vp.u[0] - vm.u[0]) / (2 * h), 1e-7));
    CHECK_THAT(e.d2u_dy2[0],
               Catch::Matchers::WithinAbs(
                   (vp.u[0] - 2 * e.u[0] + vm.u[0]) / (h * h), 1e-3));
  }
}

TEST_CASE("full parameter gradient agrees with finite differences") {
  // Mixes every exposed quantity, spans multiple chunks, both activations,
  // two output channels and a trainable scalar.
  for (const auto act : {Activation::tanh, Activation::sigmoid}) {
    auto net = init_network<double>({2, 6, 5, 2}, 17, act, {{"c", 0.8}});
    std::vector<Point2> pts;
    Rng rng(99);
    for (int i = 0; i < 40; ++i)
      pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});

    const LossEvaluator<double> ev = [](const NetworkEvaluation<double>& e,
                                        EvaluationAdjoints<double>& adj) {
      const auto n = e.n_points();
      double loss = 0.0;
      adj.u_bar = VecX<double>::Zero(n);
      adj.du_dx_bar = VecX<double>::Zero(n);
      adj.du_dy_bar = VecX<double>::Zero(n);
      adj.d2u_dx2_bar = VecX<double>::Zero(n);
      adj.d2u_dy2_bar = VecX<double>::Zero(n);
      adj.eps_bar = VecX<double>::Zero(n);
      const double c = e.scalar_values[0];
      for (Eigen::Index i = 0; i < n; ++i) {
        loss += 0.5 * e.u[i] * e.u[i] + c * e.du_dx[i] * e.du_dy[i] +
                0.1 * e.d2u_dx2[i] + 0.2 * e.d2u_dy2[i] * e.d2u_dy2[i] +
                0.3 * e.eps[i] * e.u[i];
        adj.u_bar[i] = e.u[i] + 0.3 * e.eps[i];
        adj.du_dx_bar[i] = c * e.du_dy[i];
        adj.du_dy_bar[i] = c * e.du_dx[i];
        adj.d2u_dx2_bar[i] = 0.1;
        adj.d2u_dy2_bar[i] = 0.4 * e.d2u_dy2[i];
        adj.eps_bar[i] = 0.3 * e.u[i];
        adj.scalar_bar[0] += e.du_dx[i] * e.du_dy[i];
      }
      return loss;
    };

    const auto r = loss_and_parameter_gradient(net, pts, 2, ev);
    const auto p0 = to_parameters(net);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < p0.size(); ++i) {
      auto pp = p0;
      pp[i] = p0[i] + h;
      from_parameters(net, pp);
      const double lp = loss_only(net, pts, 2, ev);
      pp[i] = p0[i] - h;
      from_parameters(net, pp);
      const double lm = loss_only(net, pts, 2, ev);
      const double fd = (lp - lm) / (2 * h);
      const double tol = 1e-5 * std::max(1.0, std::abs(fd)) + 1e-9;
      REQUIRE_THAT(r.gradient[i], Catch::Matchers::WithinAbs(fd, tol));
    }
    from_parameters(net, p0);
  }
}

TEST_CASE("accumulate_parameter_gradient matches the fused path") {
  auto net = init_network<double>({2, 8, 1}, 23);
  std::vector<Point2> pts;
  Rng rng(5);
  for (int i = 0; i < 12; ++i)
    pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});

  const LossEvaluator<double> ev = [](const NetworkEvaluation<double>& e,
                                      EvaluationAdjoints<double>& adj) {
    adj.u_bar = e.u;
    adj.du_dx_bar = 0.5 * e.du_dx;
    return 0.5 * e.u.squaredNorm() + 0.25 * e.du_dx.squaredNorm();
  };
  const auto fused = loss_and_parameter_gradient(net, pts, 1, ev);

  auto eval = evaluate(net, pts, 1);
  EvaluationAdjoints<double> adj;
  adj.scalar_bar.assign(0, 0.0);
  ev(eval, adj);
  VecX<double> grad = VecX<double>::Zero(net.parameter_count());
  accumulate_parameter_gradient(net, pts, 1, adj, grad);
  CHECK(grad == fused.gradient);  // same code path, same order: bitwise
}

TEST_CASE("evaluation is chunk-transparent and deterministic") {
  const auto net = init_network<double>({2, 16, 1}, 31);
  std::vector<Point2> pts;
  Rng rng(7);
  for (int i = 0; i < 1300; ++i)  // spans three internal chunks
    pts.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
  const auto a = evaluate(net, pts, 1);
  const auto b = evaluate(net, pts, 1);
  CHECK(a.u == b.u);
  CHECK(a.du_dx == b.du_dx);

  // Values inside a large batch agree with a one-point evaluation up to
  // kernel-level rounding (batched and single-column GEMMs may round
  // differently; run-to-run determinism above is the hard guarantee).
  const auto single = evaluate(net, {pts[700]}, 1);
  CHECK_THAT(a.u[700], Catch::Matchers::WithinULP(single.u[0], 4));
  CHECK_THAT(a.du_dx[700], Catch::Matchers::WithinULP(single.du_dx[0], 4));
}

TEST_CASE("softplus head stays positive and stable") {
  auto net = init_network<double>({2, 4, 2}, 3);
  // Push the second output channel strongly negative and positive.
  net.biases[1][1] = -40.0;
  auto e = evaluate(net, {{0.1, 0.2}}, 0);
  CHECK(e.eps[0] > 0.0);
  CHECK(e.eps[0] < 1e-15);
  net.biases[1][1] = 40.0;
  e = evaluate(net, {{0.1, 0.2}}, 0);
  CHECK_THAT(e.eps[0], Catch::Matchers::WithinAbs(40.0, 1.0));
  CHECK(std::isfinite(e.eps[0]));
}

TEST_CASE("non-finite outputs raise a numeric error") {
  auto net = init_network<double>({2, 3, 1}, 1);
  net.weights[0](0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(evaluate(net, {{1.0, 1.0}}, 1), NumericOverflowError);
}

TEST_CASE("checkpoints round-trip bitwise") {
  auto net = init_network<double>({2, 9, 7, 2}, 77, Activation::sigmoid,
                                  {{"eps", 1.75}, {"offset", -0.25}});
  const std::string path = "/tmp/vpinn_ckpt_test.bin";
  save_checkpoint(net, path);
  const auto back = load_checkpoint<double>(path);
  CHECK(back.layer_sizes == net.layer_sizes);
  CHECK(back.activation == Activation::sigmoid);
  REQUIRE(back.scalars.size() == 2);
  CHECK(back.scalars[0].first == "eps");
  CHECK(back.scalars[1].first == "offset");
  CHECK(to_parameters(back) == to_parameters(net));

  // float load casts but keeps structure
  const auto backf = load_checkpoint<float>(path);
  CHECK(backf.layer_sizes == net.layer_sizes);
  CHECK_THAT(static_cast<double>(backf.scalars[0].second),
             Catch::Matchers::WithinAbs(1.75, 1e-7));

  {
    std::ofstream bad(path, std::ios::binary);
    bad << "JUNKJUNKJUNKJUNK";
  }
  CHECK_THROWS_AS(load_checkpoint<double>(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("single precision evaluation tracks double") {
  const auto netd = init_network<double>({2, 12, 12, 1}, 8);
  auto netf = init_network<float>({2, 12, 12, 1}, 8);
  // Same seed gives the same draw sequence; float casts of the same doubles.
  const std::vector<Point2> pts{{0.3, 0.4}, {-0.2, 0.9}};
  const auto ed = evaluate(netd, pts, 1);
  const auto ef = evaluate(netf, pts, 1);
  for (int i = 0; i < 2; ++i) {
    CHECK_THAT(static_cast<double>(ef.u[i]),
               Catch::Matchers::WithinAbs(ed.u[i], 1e-5));
    CHECK_THAT(static_cast<double>(ef.du_dx[i]),
               Catch::Matchers::WithinAbs(ed.du_dx[i], 1e-4));
  }
}
