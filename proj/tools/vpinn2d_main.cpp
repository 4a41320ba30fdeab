#include <CLI11.hpp>

#include <iostream>

#include "vpinn/commands.hpp"

namespace {

const char* category_name(vpinn::ErrorCategory c) {
  switch (c) {
    case vpinn::ErrorCategory::config:
      return "config";
    case vpinn::ErrorCategory::mesh:
      return "mesh";
    case vpinn::ErrorCategory::numeric:
      return "numeric";
    case vpinn::ErrorCategory::io:
      return "io";
  }
  return "unknown";
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;          // 0 = not given
  std::string precision;    // empty = not given
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
  auto* cfg = cmd->add_option("--config", f.config_path,
                              "path to the JSON run configuration");
  if (needs_config) cfg->required();
  cmd->add_option("--out", f.out_dir,
                  "output directory for run artifacts (default: out)");
  cmd->add_option("--threads", f.threads,
                  "worker thread count recorded in reports (execution is "
                  "serial)");
  cmd->add_option("--precision", f.precision,
                  "floating-point precision: double or single (overrides "
                  "the config)")
      ->check(CLI::IsMember({"double", "single"}));
  f.seed_opt = cmd->add_option(
      "--seed", f.seed,
      "random seed override for network init and sampling");
}

vpinn::RunOverrides overrides_from(const CommonFlags& f) {
  vpinn::RunOverrides o;
  if (f.threads != 0) o.threads = f.threads;
  if (!f.precision.empty())
    o.precision = f.precision == "double" ? vpinn::Precision::f64
                                          : vpinn::Precision::f32;
  if (f.seed_opt && f.seed_opt->count() > 0) o.seed = f.seed;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "variational neural-network solver for 2D Poisson and "
      "convection-diffusion problems on quadrilateral meshes"};
  app.require_subcommand(1);

  CommonFlags solve_f, inverse_f, bench_f, check_f, info_f;
  bool corrupt_tensors = false;
  std::string mesh_path;
  info_f.out_dir.clear();  // mesh-info writes a file only when --out given

  auto* solve =
      app.add_subcommand("solve", "train a forward problem, write artifacts");
  add_common(solve, solve_f, true);

  auto* inverse = app.add_subcommand(
      "inverse", "recover a diffusion coefficient from sensor data");
  add_common(inverse, inverse_f, true);

  auto* bench = app.add_subcommand(
      "benchmark", "time the assembly kernels over a sweep, write CSV");
  add_common(bench, bench_f, true);

  auto* check = app.add_subcommand(
      "check", "run equivalence/gradient/quadrature self-checks");
  add_common(check, check_f, true);
  check
      ->add_flag("--corrupt-tensors", corrupt_tensors,
                 "negative control: perturb assembled tensors so the "
                 "equivalence check must fail")
      ->group("");  // hidden

  auto* info = app.add_subcommand("mesh-info",
                                  "print statistics for a gmsh mesh file");
  info->add_option("mesh", mesh_path, "path to a .msh file (v2.2 or v4.1)")
      ->required();
  info->add_option("--out", info_f.out_dir,
                   "directory to also write mesh_info.csv into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are config-category errors
  }

  try {
    if (*solve) {
      vpinn::FullConfig cfg = vpinn::parse_config(solve_f.config_path);
      const int threads = vpinn::apply_overrides(cfg, overrides_from(solve_f));
      return vpinn::cmd_solve(cfg, solve_f.out_dir, threads);
    }
    if (*inverse) {
      vpinn::FullConfig cfg = vpinn::parse_config(inverse_f.config_path);
      const int threads =
          vpinn::apply_overrides(cfg, overrides_from(inverse_f));
      return vpinn::cmd_inverse(cfg, inverse_f.out_dir, threads);
    }
    if (*bench) {
      vpinn::FullConfig cfg = vpinn::parse_config(bench_f.config_path);
      const int threads = vpinn::apply_overrides(cfg, overrides_from(bench_f));
      return vpinn::cmd_benchmark(cfg, bench_f.out_dir, threads);
    }
    if (*check) {
      vpinn::FullConfig cfg = vpinn::parse_config(check_f.config_path);
      vpinn::apply_overrides(cfg, overrides_from(check_f));
      return vpinn::cmd_check(cfg, corrupt_tensors);
    }
    if (*info) return vpinn::cmd_mesh_info(mesh_path, info_f.out_dir);
  } catch (const vpinn::Error& e) {
    std::cerr << "error (" << category_name(e.category()) << "): "
              << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
