// The three residual-assembly kernels side by side: identical losses on a
// regular mesh, per-call timings, and the matrix kernel refusing a mesh it
// cannot represent.
//
// Usage: demo_kernel_comparison [elements_per_dim]   (default 8)

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "vpinn/commands.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_call(const std::function<void()>& fn, int reps) {
  fn();  // warmup
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vpinn;
  const int e = argc > 1 ? std::atoi(argv[1]) : 8;
  if (e < 1) {
    std::fprintf(stderr, "elements_per_dim must be >= 1\n");
    return 2;
  }

  const auto rule = tensor_product_rule(
      gauss_rule_1d(10, QuadratureKind::gauss_legendre));
  const auto basis = reference_basis(5, rule);
  const ScalarField2D& f = lookup_field("sin2pi_f");
  const PdeCoefficients<double> coeffs;  // poisson, eps = 1

  Mesh mesh = generate_structured_mesh(e, e, {0.0, 1.0}, {0.0, 1.0});
  auto tensors = assemble_element_tensors(mesh, basis, rule);
  assemble_forcing(tensors, f);
  const auto premult = assemble_regular_premultipliers(mesh, basis, rule, f);

  const DenseNetwork<double> net = init_network<double>({2, 20, 20, 1}, 42);
  const auto ev = evaluate(net, tensors.quad_points, 1);

  const double loss_tensor =
      variational_loss_tensor(tensors, ev, coeffs).loss;
  const double loss_matrix =
      variational_loss_matrix(premult, ev, coeffs).loss;
  const double loss_loop_aa =
      variational_loss_loop(mesh, basis, rule, f, ev, coeffs,
                            LoopMode::axis_aligned)
          .loss;
  const double loss_loop_gen =
      variational_loss_loop(mesh, basis, rule, f, ev, coeffs,
                            LoopMode::general)
          .loss;

  std::printf("%dx%d regular mesh, %d tests and %d quad points per element\n",
              e, e, basis.n_test(), rule.size());
  std::printf("  tensor          %.17e\n", loss_tensor);
  std::printf("  matrix          %.17e\n", loss_matrix);
  std::printf("  loop (aligned)  %.17e\n", loss_loop_aa);
  std::printf("  loop (general)  %.17e\n", loss_loop_gen);
  const double spread =
      std::max({loss_tensor, loss_matrix, loss_loop_aa, loss_loop_gen}) -
      std::min({loss_tensor, loss_matrix, loss_loop_aa, loss_loop_gen});
  std::printf("  spread          %.3e (relative %.3e)\n\n", spread,
              spread / loss_tensor);

  // Timings for the assembly alone; the shared network evaluation is kept
  // outside the loop so the kernels are what is being measured.
  const int reps = 50;
  EvaluationAdjoints<double> adj;
  std::printf("per-call kernel time, %d reps, gradients included:\n", reps);
  std::printf("  tensor  %8.1f us\n",
              1e6 * time_call(
                        [&] {
                          variational_loss_tensor(tensors, ev, coeffs, 1.0,
                                                  &adj);
                        },
                        reps));
  std::printf("  matrix  %8.1f us\n",
              1e6 * time_call(
                        [&] {
                          variational_loss_matrix(premult, ev, coeffs, 1.0,
                                                  &adj);
                        },
                        reps));
  std::printf("  loop    %8.1f us\n",
              1e6 * time_call(
                        [&] {
                          variational_loss_loop(mesh, basis, rule, f, ev,
                                                coeffs, LoopMode::general,
                                                1.0, &adj);
                        },
                        reps));

  // On a skewed mesh the matrix kernel's shared-premultiplier assumption
  // breaks; it must refuse rather than return a wrong number.
  skew_mesh_nodes(mesh, 0.2, 1234);
  try {
    assemble_regular_premultipliers(mesh, basis, rule, f);
    std::printf("\nskewed mesh: matrix kernel unexpectedly accepted\n");
    return 1;
  } catch (const InvalidModeError& err) {
    std::printf("\nskewed mesh: matrix kernel refused as expected\n  (%s)\n",
                err.what());
  }
  const auto skew_tensors = [&] {
    auto t = assemble_element_tensors(mesh, basis, rule);
    assemble_forcing(t, f);
    return t;
  }();
  const auto ev2 = evaluate(net, skew_tensors.quad_points, 1);
  const double skew_tensor =
      variational_loss_tensor(skew_tensors, ev2, coeffs).loss;
  const double skew_loop =
      variational_loss_loop(mesh, basis, rule, f, ev2, coeffs,
                            LoopMode::general)
          .loss;
  std::printf("  tensor vs loop there: %.17e vs %.17e\n", skew_tensor,
              skew_loop);
  return 0;
}
