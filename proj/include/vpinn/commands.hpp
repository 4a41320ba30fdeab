#pragma once

// Implementations behind the CLI subcommands: problem construction from a
// validated config, the solve/inverse/benchmark/check/mesh-info entry
// points, and the precision dispatch.  Argument parsing stays in the tool's
// main; everything here works on FullConfig and plain strings.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vpinn/config.hpp"
#include "vpinn/mesh_io.hpp"
#include "vpinn/report.hpp"

namespace vpinn {

// CLI flag overrides; each one, when present, wins over the config value.
struct RunOverrides {
  std::optional<int> threads;
  std::optional<Precision> precision;
  std::optional<std::uint64_t> seed;
};

inline int apply_overrides(FullConfig& cfg, const RunOverrides& o) {
  if (o.precision) cfg.precision = *o.precision;
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads && *o.threads < 1)
    throw ConfigError("--threads: must be >= 1");
  return o.threads.value_or(1);
}

inline Mesh build_domain_mesh(const DomainSpec& d) {
  if (d.kind == DomainSpec::Kind::rectangle)
    return generate_structured_mesh(d.nx, d.ny, d.x_range, d.y_range);
  return read_gmsh_file(d.path);
}

struct BoundingBox {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

inline BoundingBox mesh_bbox(const Mesh& mesh) {
  if (mesh.nodes.empty()) throw InvalidArgumentError("mesh_bbox: empty mesh");
  BoundingBox b{mesh.nodes[0].x, mesh.nodes[0].x, mesh.nodes[0].y,
                mesh.nodes[0].y};
  for (const auto& p : mesh.nodes) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

// Metrics/plot grid over the mesh's bounding box (for rectangle domains
// this is exactly the configured ranges).
inline GridSpec metrics_grid(const FullConfig& cfg, const Mesh& mesh) {
  const auto b = mesh_bbox(mesh);
  GridSpec g;
  g.nx = cfg.output.grid_nx;
  g.ny = cfg.output.grid_ny;
  g.x_range = {b.x0, b.x1};
  g.y_range = {b.y0, b.y1};
  return g;
}

// Deterministically perturb interior nodes by up to `amount` times the mean
// element size, turning a structured grid into general quadrilaterals.
inline void skew_mesh_nodes(Mesh& mesh, double amount, std::uint64_t seed) {
  if (amount <= 0.0) return;
  const auto b = mesh_bbox(mesh);
  const double h =
      std::sqrt((b.x1 - b.x0) * (b.y1 - b.y0) /
                static_cast<double>(mesh.n_elements()));
  const double tol = 1e-12 * std::max(b.x1 - b.x0, b.y1 - b.y0);
  Rng rng(seed);
  for (auto& p : mesh.nodes) {
    const bool on_boundary = std::abs(p.x - b.x0) < tol ||
                             std::abs(p.x - b.x1) < tol ||
                             std::abs(p.y - b.y0) < tol ||
                             std::abs(p.y - b.y1) < tol;
    if (on_boundary) continue;
    p.x += rng.uniform(-amount * h, amount * h);
    p.y += rng.uniform(-amount * h, amount * h);
  }
  const auto v = validate_mesh(mesh);
  if (!v.ok())
    throw AssemblyError(
        "skew_mesh_nodes: perturbation produced a degenerate element; "
        "lower the skew amount");
}

template <typename Real>
PdeCoefficients<Real> coefficients_from_config(const FullConfig& cfg) {
  PdeCoefficients<Real> c;
  c.eps = static_cast<Real>(cfg.problem.eps);
  c.bx = static_cast<Real>(cfg.problem.bx);
  c.by = static_cast<Real>(cfg.problem.by);
  if (cfg.problem.pde == PdeType::cd2d_variable_eps) {
    c.source = EpsSource::spatial;
  } else if (cfg.network.eps_scalar_init) {
    c.source = EpsSource::scalar;
    c.eps_scalar_index = 0;  // the single "eps" scalar added at init
  }
  return c;
}

template <typename Real>
struct BuiltProblem {
  Mesh mesh;
  DenseNetwork<Real> net;
  ProblemAssembly<Real> pa;
};

// Everything train() needs, from a validated config.  A premade mesh (the
// benchmark's skewed grids) bypasses the domain spec.
template <typename Real>
BuiltProblem<Real> build_problem(const FullConfig& cfg,
                                 std::optional<Mesh> premade = {}) {
  BuiltProblem<Real> bp;
  bp.mesh = premade ? std::move(*premade)
                    : build_domain_mesh(cfg.problem.domain);

  const auto rule = tensor_product_rule(
      gauss_rule_1d(cfg.disc.n_quad_per_dim, cfg.disc.quadrature));
  const auto basis = reference_basis(cfg.disc.n_test_per_dim, rule);
  const ScalarField2D f = lookup_field(cfg.problem.forcing);

  std::vector<std::pair<std::string, double>> scalars;
  if (cfg.network.eps_scalar_init)
    scalars.emplace_back("eps", *cfg.network.eps_scalar_init);
  bp.net = init_network<Real>(cfg.network.layers, cfg.seed,
                              cfg.network.activation, scalars);

  auto& pa = bp.pa;
  pa.tensors = assemble_element_tensors<Real>(bp.mesh, basis, rule);
  assemble_forcing(pa.tensors, f);
  pa.coeffs = coefficients_from_config<Real>(cfg);
  pa.form = cfg.disc.form;
  pa.kernel = cfg.disc.kernel;
  if (pa.form == LossForm::strong) {
    pa.strong_forcing.resize(
        static_cast<Eigen::Index>(pa.tensors.quad_points.size()));
    for (std::size_t i = 0; i < pa.tensors.quad_points.size(); ++i)
      pa.strong_forcing[static_cast<Eigen::Index>(i)] =
          f(pa.tensors.quad_points[i].x, pa.tensors.quad_points[i].y);
  } else if (pa.kernel == KernelKind::loop) {
    pa.mesh = bp.mesh;
    pa.basis = basis;
    pa.rule = rule;
    pa.forcing_field = f;
    pa.loop_mode = LoopMode::general;
  } else if (pa.kernel == KernelKind::matrix) {
    pa.premult =
        assemble_regular_premultipliers<Real>(bp.mesh, basis, rule, f);
  }

  pa.boundary =
      sample_boundary(bp.mesh, cfg.problem.n_boundary_points,
                      lookup_field(cfg.problem.boundary_g),
                      cfg.problem.boundary_seed);
  if (cfg.problem.sensors) {
    if (cfg.problem.exact_solution.empty())
      throw ConfigError(
          "problem.sensors: source 'exact' needs problem.exact_solution");
    pa.sensors = sample_sensors(bp.mesh, cfg.problem.sensors->count,
                                lookup_field(cfg.problem.exact_solution),
                                cfg.problem.sensors->seed);
  }
  pa.build_batch();
  return bp;
}

namespace detail {

inline std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename Real>
void save_checkpoint_atomic(const DenseNetwork<Real>& net,
                            const std::string& path) {
  const std::string tmp = path + ".tmp";
  save_checkpoint(net, tmp);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot rename checkpoint into place: " + ec.message());
}

}  // namespace detail

// Shared body of solve and inverse.
template <typename Real>
int run_training_command(const FullConfig& cfg, const std::string& out_dir,
                         int threads, bool inverse) {
  auto bp = build_problem<Real>(cfg);

  RunInfo info;
  info.command = inverse ? "inverse" : "solve";
  info.threads = threads;
  info.mesh_n_nodes = bp.mesh.n_nodes();
  info.mesh_n_elements = bp.mesh.n_elements();
  info.mesh_n_boundary = static_cast<int>(bp.mesh.boundary_node_ids.size());
  std::cout << info.command << ": " << info.mesh_n_elements
            << " elements, " << bp.pa.n_interior << " interior points, "
            << bp.pa.n_boundary << " boundary points, " << bp.pa.n_sensors
            << " sensors\n";

  RunReport rep = inverse ? train_inverse(bp.net, bp.pa, cfg.training)
                          : train_forward(bp.net, bp.pa, cfg.training);

  const GridSpec grid_spec = metrics_grid(cfg, bp.mesh);
  const ScalarField2D* exact =
      cfg.problem.exact_solution.empty()
          ? nullptr
          : &lookup_field(cfg.problem.exact_solution);
  if (exact) rep.metrics = evaluate_metrics(bp.net, *exact, grid_spec);
  const auto grid = sample_solution_grid(bp.net, grid_spec, exact);

  auto files = write_run_artifacts(out_dir, cfg, info, rep, grid);
  detail::save_checkpoint_atomic(
      bp.net, (std::filesystem::path(out_dir) / "model.ckpt").string());
  files.push_back("model.ckpt");

  std::cout << "steps: " << rep.steps_run << " (" << rep.stop_reason
            << ")\n";
  if (!rep.history.empty()) {
    const auto& last = rep.history.back();
    std::cout << "final loss: total=" << detail::short_double(last.total)
              << " variational=" << detail::short_double(last.variational)
              << " boundary=" << detail::short_double(last.boundary)
              << " sensor=" << detail::short_double(last.sensor) << "\n";
  }
  if (exact)
    std::cout << "metrics (" << grid_spec.nx << "x" << grid_spec.ny
              << " grid): mae=" << detail::short_double(rep.metrics.mae)
              << " rel_l2=" << detail::short_double(rep.metrics.rel_l2)
              << " max=" << detail::short_double(rep.metrics.max_err)
              << "\n";
  if (std::isfinite(rep.final_eps)) {
    std::cout << "recovered eps = " << detail::short_double(rep.final_eps);
    if (std::isfinite(rep.eps_abs_error))
      std::cout << " (abs error "
                << detail::short_double(rep.eps_abs_error) << ")";
    std::cout << "\n";
  }
  std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
  return 0;
}

inline int cmd_solve(const FullConfig& cfg, const std::string& out_dir,
                     int threads) {
  return cfg.precision == Precision::f64
             ? run_training_command<double>(cfg, out_dir, threads, false)
             : run_training_command<float>(cfg, out_dir, threads, false);
}

inline int cmd_inverse(const FullConfig& cfg, const std::string& out_dir,
                       int threads) {
  if (!cfg.problem.sensors)
    throw ConfigError("inverse: config must define problem.sensors");
  if (cfg.problem.pde != PdeType::cd2d_variable_eps &&
      !cfg.network.eps_scalar_init)
    throw ConfigError(
        "inverse: set network.eps_scalar_init (constant coefficient) or "
        "problem.pde.type = cd2d_variable_eps (spatial coefficient)");
  return cfg.precision == Precision::f64
             ? run_training_command<double>(cfg, out_dir, threads, true)
             : run_training_command<float>(cfg, out_dir, threads, true);
}

// ---------------------------------------------------------------------------
// benchmark: time one full training step (forward + loss + adjoint +
// parameter gradient + Adam update) per sweep point.

template <typename Real>
BenchmarkRow bench_case(const FullConfig& cfg, KernelKind kernel,
                        int e_per_dim, int n_test, int n_quad, double skew,
                        int reps, int threads) {
  BenchmarkRow row;
  row.kernel = detail::enum_name(kernel, detail::kernel_table());
  row.n_elem = e_per_dim * e_per_dim;
  row.n_test = n_test * n_test;
  row.n_quad = n_quad * n_quad;
  row.threads = threads;
  row.precision =
      cfg.precision == Precision::f64 ? "double" : "single";

  Mesh mesh =
      generate_structured_mesh(e_per_dim, e_per_dim, {0.0, 1.0}, {0.0, 1.0});
  skew_mesh_nodes(mesh, skew, 1234);

  FullConfig c = cfg;
  c.disc.n_test_per_dim = n_test;
  c.disc.n_quad_per_dim = n_quad;
  c.disc.kernel = kernel;
  c.disc.form = LossForm::weak;

  BuiltProblem<Real> bp;
  try {
    bp = build_problem<Real>(c, std::move(mesh));
  } catch (const InvalidModeError&) {
    row.supported = false;  // matrix premultipliers on a skewed mesh
    return row;
  }
  if (kernel == KernelKind::loop && skew == 0.0)
    bp.pa.loop_mode = LoopMode::axis_aligned;

  CompositeObjective<Real> objective;
  objective.pa = &bp.pa;
  objective.weights = c.training.weights;
  LossEvaluator<Real> evaluator =
      [&objective](const NetworkEvaluation<Real>& ev,
                   EvaluationAdjoints<Real>& adj) -> Real {
    return objective(ev, adj);
  };

  VecX<Real> params = to_parameters(bp.net);
  AdamState<Real> state(params.size());
  const Real lr = static_cast<Real>(c.training.lr.lr0);
  const auto step = [&]() {
    auto lg = loss_and_parameter_gradient(bp.net, bp.pa.batch, 1, evaluator);
    adam_step(params, lg.gradient, state, lr);
    from_parameters(bp.net, params);
  };

  const TimingSummary t = time_epochs(step, reps);
  row.median_s = t.median_s;
  row.p10_s = t.p10_s;
  row.p90_s = t.p90_s;
  return row;
}

inline int cmd_benchmark(const FullConfig& cfg, const std::string& out_dir,
                         int threads) {
  if (!cfg.benchmark)
    throw ConfigError("benchmark: config has no 'benchmark' section");
  const auto& bs = *cfg.benchmark;

  std::vector<BenchmarkRow> rows;
  for (KernelKind kernel : bs.kernels) {
    for (int e : bs.elements_per_dim) {
      std::vector<int> quads = bs.n_quad_per_dim;
      if (bs.total_quad_points) {
        const auto per_elem =
            *bs.total_quad_points / (std::int64_t(e) * e);
        quads = {static_cast<int>(std::llround(
            std::sqrt(static_cast<double>(per_elem))))};
      }
      for (int t : bs.n_test_per_dim) {
        for (int q : quads) {
          BenchmarkRow row =
              cfg.precision == Precision::f64
                  ? bench_case<double>(cfg, kernel, e, t, q, bs.skew,
                                       bs.reps, threads)
                  : bench_case<float>(cfg, kernel, e, t, q, bs.skew,
                                      bs.reps, threads);
          std::cout << row.kernel << " n_elem=" << row.n_elem
                    << " n_test=" << row.n_test << " n_quad=" << row.n_quad
                    << (row.supported
                            ? " median_s=" +
                                  detail::short_double(row.median_s)
                            : std::string(" unsupported"))
                    << "\n";
          rows.push_back(std::move(row));
        }
      }
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto csv_path =
      (std::filesystem::path(out_dir) / "benchmark.csv").string();
  atomic_write_text(csv_path, benchmark_csv(rows));
  std::cout << "wrote " << csv_path << " (" << rows.size() << " rows, cpu: "
            << hardware_descriptor() << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// check: self-verification on the configured problem.

namespace detail {

struct CheckLine {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  std::string status;  // pass | fail | skipped note
};

inline void print_check(const CheckLine& c) {
  std::printf("check %-26s %10.3e  (tol %.0e)  %s\n", c.name.c_str(),
              c.value, c.tol, c.status.c_str());
}

}  // namespace detail

inline int cmd_check(const FullConfig& cfg, bool corrupt_tensors) {
  std::vector<detail::CheckLine> lines;
  const auto push = [&](const std::string& name, double value, double tol) {
    lines.push_back(
        {name, value, tol, value <= tol ? "pass" : "fail"});
    detail::print_check(lines.back());
  };

  // 1. quadrature exactness: the 1D rule integrates monomials exactly up
  // to its design degree.
  {
    const auto rule =
        gauss_rule_1d(cfg.disc.n_quad_per_dim, cfg.disc.quadrature);
    const int degree =
        cfg.disc.quadrature == QuadratureKind::gauss_legendre
            ? 2 * rule.size() - 1
            : 2 * rule.size() - 3;
    double worst = 0.0;
    for (int d = 0; d <= degree; ++d) {
      double s = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      worst = std::max(worst, std::abs(s - exact));
    }
    push("quadrature-exactness", worst, 1e-12);
  }

  // 2. test functions vanish on the reference boundary.
  {
    double worst = 0.0;
    for (int k = 1; k <= cfg.disc.n_test_per_dim; ++k) {
      worst = std::max(worst, std::abs(test_function_1d(k, 1.0).value));
      worst = std::max(worst, std::abs(test_function_1d(k, -1.0).value));
    }
    push("test-function-boundary", worst, 1e-12);
  }

  const Mesh mesh = build_domain_mesh(cfg.problem.domain);

  // 3. mapping jacobian vs central finite differences of the bilinear map.
  {
    Rng rng(31);
    double worst = 0.0;
    const int n_elems = std::min(mesh.n_elements(), 8);
    for (int i = 0; i < n_elems; ++i) {
      const int k = static_cast<int>(
          rng.integer(static_cast<std::uint64_t>(mesh.n_elements())));
      const auto nodes = element_nodes(mesh, k);
      const auto bc = bilinear_coeffs(nodes);
      for (int rep = 0; rep < 5; ++rep) {
        const double xi = rng.uniform(-0.9, 0.9);
        const double eta = rng.uniform(-0.9, 0.9);
        const auto jd = detail::jacobian_at(bc, xi, eta);
        const double h = 1e-6;
        const auto xp = bilinear_map(nodes, xi + h, eta);
        const auto xm = bilinear_map(nodes, xi - h, eta);
        const auto yp = bilinear_map(nodes, xi, eta + h);
        const auto ym = bilinear_map(nodes, xi, eta - h);
        const double fd[4] = {(xp.x - xm.x) / (2 * h), (xp.y - xm.y) / (2 * h),
                              (yp.x - ym.x) / (2 * h), (yp.y - ym.y) / (2 * h)};
        const double an[4] = {jd.j11, jd.j12, jd.j21, jd.j22};
        for (int c = 0; c < 4; ++c)
          worst = std::max(worst, std::abs(fd[c] - an[c]) /
                                      std::max(std::abs(an[c]), 1.0));
      }
    }
    push("mapping-jacobian-fd", worst, 1e-6);
  }

  // 4. kernel equivalence on this problem: tensor vs loop oracle, and the
  // matrix fast path where the mesh admits it.
  {
    const auto rule = tensor_product_rule(
        gauss_rule_1d(cfg.disc.n_quad_per_dim, cfg.disc.quadrature));
    const auto basis = reference_basis(cfg.disc.n_test_per_dim, rule);
    const ScalarField2D f = lookup_field(cfg.problem.forcing);
    auto tensors = assemble_element_tensors(mesh, basis, rule);
    assemble_forcing(tensors, f);
    if (corrupt_tensors)
      for (auto& g : tensors.grad_x) g *= 1.001;  // negative control

    const int out_ch =
        cfg.problem.pde == PdeType::cd2d_variable_eps ? 2 : 1;
    std::vector<std::pair<std::string, double>> scalars;
    auto coeffs = coefficients_from_config<double>(cfg);
    if (coeffs.source == EpsSource::scalar)
      scalars.emplace_back("eps", *cfg.network.eps_scalar_init);
    const auto net =
        init_network<double>({2, 10, 10, out_ch}, cfg.seed, Activation::tanh,
                             scalars);
    const auto ev = evaluate(net, tensors.quad_points, 1);

    const auto rt = variational_loss_tensor(tensors, ev, coeffs);
    const auto rl = variational_loss_loop(mesh, basis, rule, f, ev, coeffs,
                                          LoopMode::general);
    double worst =
        std::abs(rt.loss - rl.loss) / std::max(std::abs(rl.loss), 1e-300);
    const double denom = rl.residuals.cwiseAbs().maxCoeff();
    worst = std::max(worst, (rt.residuals - rl.residuals)
                                    .cwiseAbs()
                                    .maxCoeff() /
                                std::max(denom, 1e-300));
    push("kernel-equivalence-loop", worst, 1e-12);

    try {
      const auto pre = assemble_regular_premultipliers(mesh, basis, rule, f);
      const auto rm = variational_loss_matrix(pre, ev, coeffs);
      double w = std::abs(rm.loss - rl.loss) /
                 std::max(std::abs(rl.loss), 1e-300);
      w = std::max(w, (rm.residuals - rl.residuals).cwiseAbs().maxCoeff() /
                          std::max(denom, 1e-300));
      push("kernel-equivalence-matrix", w, 1e-12);
    } catch (const InvalidModeError&) {
      lines.push_back({"kernel-equivalence-matrix", 0.0, 1e-12,
                       "skipped (inadmissible)"});
      detail::print_check(lines.back());
    }
  }

  // 5. parameter gradients of the full objective vs central differences,
  // on a reduced copy of the problem (small net, small mesh).
  {
    FullConfig small = cfg;
    small.disc.n_quad_per_dim = std::min(cfg.disc.n_quad_per_dim, 5);
    small.disc.n_test_per_dim = std::min(cfg.disc.n_test_per_dim, 3);
    small.disc.kernel = KernelKind::tensor;
    small.network.layers = {2, 8,
                            cfg.problem.pde == PdeType::cd2d_variable_eps
                                ? 2
                                : 1};
    small.problem.n_boundary_points =
        std::min(cfg.problem.n_boundary_points, 40);
    if (small.problem.domain.kind == DomainSpec::Kind::rectangle) {
      small.problem.domain.nx = std::min(small.problem.domain.nx, 2);
      small.problem.domain.ny = std::min(small.problem.domain.ny, 2);
    }
    auto bp = build_problem<double>(small);
    CompositeObjective<double> objective;
    objective.pa = &bp.pa;
    objective.weights = small.training.weights;
    LossEvaluator<double> evaluator =
        [&objective](const NetworkEvaluation<double>& ev,
                     EvaluationAdjoints<double>& adj) -> double {
      return objective(ev, adj);
    };
    const int order = bp.pa.form == LossForm::weak ? 1 : 2;
    const auto lg =
        loss_and_parameter_gradient(bp.net, bp.pa.batch, order, evaluator);

    VecX<double> params = to_parameters(bp.net);
    double worst = 0.0;
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      auto probe = [&](double v) {
        params[i] = v;
        from_parameters(bp.net, params);
        return static_cast<double>(
            loss_and_parameter_gradient(bp.net, bp.pa.batch, order,
                                        evaluator)
                .loss);
      };
      const double fd = (probe(keep + h) - probe(keep - h)) / (2 * h);
      params[i] = keep;
      worst = std::max(worst, std::abs(fd - lg.gradient[i]) /
                                  std::max(std::abs(lg.gradient[i]), 1e-8));
    }
    from_parameters(bp.net, params);
    push("parameter-gradient-fd", worst, 1e-4);
  }

  int n_fail = 0, n_skip = 0;
  for (const auto& l : lines) {
    if (l.status == "fail") ++n_fail;
    if (l.status.rfind("skipped", 0) == 0) ++n_skip;
  }
  std::cout << "check summary: "
            << (lines.size() - n_fail - n_skip) << " passed, " << n_fail
            << " failed, " << n_skip << " skipped\n";
  return n_fail == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// mesh-info: structural statistics as key,value CSV.

inline int cmd_mesh_info(const std::string& mesh_path,
                         const std::string& out_dir) {
  const Mesh mesh = read_gmsh_file(mesh_path);
  const auto b = mesh_bbox(mesh);
  const auto v = validate_mesh(mesh);

  const auto rule = tensor_product_rule(
      gauss_rule_1d(3, QuadratureKind::gauss_legendre));
  double total_area = 0.0, min_area = 0.0, max_area = 0.0;
  double min_det = 0.0;
  int n_axis_aligned = 0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const auto nodes = element_nodes(mesh, k);
    const auto bc = bilinear_coeffs(nodes);
    double area = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto jd = detail::jacobian_at(bc, rule.xi[q], rule.eta[q]);
      area += rule.weights[q] * jd.det;
      if (k == 0 && q == 0) min_det = jd.det;
      min_det = std::min(min_det, jd.det);
    }
    total_area += area;
    if (k == 0) min_area = max_area = area;
    min_area = std::min(min_area, area);
    max_area = std::max(max_area, area);
    const double scale = std::abs(bc.xc1) + std::abs(bc.yc2) + 1e-300;
    if (std::abs(bc.xc2) + std::abs(bc.xc3) + std::abs(bc.yc1) +
            std::abs(bc.yc3) <=
        1e-12 * scale)
      ++n_axis_aligned;
  }

  std::string csv = "key,value\n";
  const auto add = [&](const std::string& k, const std::string& val) {
    csv += k + "," + val + "\n";
  };
  add("file", mesh_path);
  add("n_nodes", std::to_string(mesh.n_nodes()));
  add("n_elements", std::to_string(mesh.n_elements()));
  add("n_boundary_nodes",
      std::to_string(mesh.boundary_node_ids.size()));
  add("x_min", detail::format_double(b.x0));
  add("x_max", detail::format_double(b.x1));
  add("y_min", detail::format_double(b.y0));
  add("y_max", detail::format_double(b.y1));
  add("total_area", detail::format_double(total_area));
  add("min_element_area", detail::format_double(min_area));
  add("max_element_area", detail::format_double(max_area));
  add("min_jacobian", detail::format_double(min_det));
  add("axis_aligned_elements", std::to_string(n_axis_aligned));
  add("degenerate_elements",
      std::to_string(v.degenerate_element_ids.size()));
  add("misoriented_elements",
      std::to_string(v.misoriented_element_ids.size()));

  std::cout << csv;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    atomic_write_text(
        (std::filesystem::path(out_dir) / "mesh_info.csv").string(), csv);
  }
  return 0;
}

}  // namespace vpinn
