#pragma once

// JSON run configuration: strict parsing (unknown keys are hard errors,
// every error names the offending path), defaults for everything that has a
// sensible one, and an effective-config echo that is itself a valid config.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vpinn/core.hpp"
#include "vpinn/fields.hpp"
#include "vpinn/network.hpp"
#include "vpinn/quadrature.hpp"
#include "vpinn/trainer.hpp"

namespace vpinn {

using Json = nlohmann::json;

enum class PdeType { poisson, cd2d, cd2d_variable_eps };
enum class Precision { f64, f32 };

struct DomainSpec {
  enum class Kind { rectangle, gmsh } kind = Kind::rectangle;
  int nx = 1, ny = 1;
  std::pair<double, double> x_range{0.0, 1.0};
  std::pair<double, double> y_range{0.0, 1.0};
  std::string path;  // gmsh
};

struct SensorSpec {
  int count = 50;
  std::uint64_t seed = 7;
  std::string source = "exact";
};

struct ProblemConfig {
  PdeType pde = PdeType::poisson;
  double eps = 1.0;
  double bx = 0.0, by = 0.0;
  std::string forcing;
  std::string exact_solution;  // empty = none
  std::string boundary_g;
  std::string eps_exact;  // empty = none (spatial-coefficient reference)
  std::optional<double> eps_actual;  // constant-coefficient validation
  DomainSpec domain;
  int n_boundary_points = 400;
  std::uint64_t boundary_seed = 1;
  std::optional<SensorSpec> sensors;
};

struct DiscretizationConfig {
  int n_test_per_dim = 5;
  int n_quad_per_dim = 10;
  QuadratureKind quadrature = QuadratureKind::gauss_legendre;
  LossForm form = LossForm::weak;
  KernelKind kernel = KernelKind::tensor;
};

struct NetworkConfig {
  std::vector<int> layers{2, 30, 30, 30, 1};
  Activation activation = Activation::tanh;
  std::optional<double> eps_scalar_init;  // trainable constant coefficient
};

struct OutputConfig {
  int grid_nx = 100, grid_ny = 100;
  bool heatmaps = true;
};

// Sweep for the benchmark command.  Meshes are structured e-by-e grids on
// the unit square (n_elem = e^2); the per-element quadrature either comes
// from an explicit list or is derived from a fixed total point budget.
struct BenchmarkSpec {
  std::vector<KernelKind> kernels;
  std::vector<int> elements_per_dim;
  std::vector<int> n_test_per_dim{5};
  std::vector<int> n_quad_per_dim;  // exclusive with total_quad_points
  std::optional<std::int64_t> total_quad_points;
  int reps = 15;
  double skew = 0.0;  // interior-node perturbation, fraction of element size
};

struct FullConfig {
  ProblemConfig problem;
  DiscretizationConfig disc;
  NetworkConfig network;
  TrainConfig training;
  std::uint64_t seed = 42;
  Precision precision = Precision::f64;
  OutputConfig output;
  std::optional<BenchmarkSpec> benchmark;
};

namespace detail {

// Strict object reader: every key must be consumed, leftovers are errors
// that name the full path.
class ConfigReader {
 public:
  ConfigReader(const Json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const Json& raw(const std::string& key) {
    consumed_.push_back(key);
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) {
      if (j_.contains(key)) consumed_.push_back(key);  // explicit null
      return fallback;
    }
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key))
      throw ConfigError(join(key) + ": required key is missing");
    return convert<T>(key);
  }

  ConfigReader section(const std::string& key) {
    if (!has(key)) {
      consumed_.push_back(key);
      return ConfigReader(empty_, join(key));
    }
    const Json& sub = raw(key);
    if (!sub.is_object())
      throw ConfigError(join(key) + ": expected an object");
    return ConfigReader(sub, join(key));
  }

  bool has_section(const std::string& key) {
    if (!has(key)) return false;
    if (!j_.at(key).is_object())
      throw ConfigError(join(key) + ": expected an object");
    return true;
  }

  // Call after reading everything: any unconsumed key is unknown.
  void done() const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const auto& c : consumed_)
        if (c == key) {
          known = true;
          break;
        }
      if (!known)
        throw ConfigError(join(key) + ": unknown key");
    }
  }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    const Json& v = raw(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number())
          throw ConfigError(join(key) + ": expected a number");
        return v.get<double>();
      } else if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer())
          throw ConfigError(join(key) + ": expected an integer");
        return v.get<int>();
      } else if constexpr (std::is_same_v<T, std::int64_t>) {
        if (!v.is_number_integer())
          throw ConfigError(join(key) + ": expected an integer");
        return v.get<std::int64_t>();
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned() && !v.is_number_integer())
          throw ConfigError(join(key) + ": expected a nonnegative integer");
        if (v.is_number_integer() && v.get<std::int64_t>() < 0)
          throw ConfigError(join(key) + ": expected a nonnegative integer");
        return v.get<std::uint64_t>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
          throw ConfigError(join(key) + ": expected a boolean");
        return v.get<bool>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
          throw ConfigError(join(key) + ": expected a string");
        return v.get<std::string>();
      } else if constexpr (std::is_same_v<T, std::vector<int>>) {
        if (!v.is_array())
          throw ConfigError(join(key) + ": expected an array of integers");
        std::vector<int> out;
        for (const auto& e : v) {
          if (!e.is_number_integer())
            throw ConfigError(join(key) + ": expected an array of integers");
          out.push_back(e.get<int>());
        }
        return out;
      } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
        if (!v.is_array())
          throw ConfigError(join(key) + ": expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) {
          if (!e.is_string())
            throw ConfigError(join(key) + ": expected an array of strings");
          out.push_back(e.get<std::string>());
        }
        return out;
      } else if constexpr (std::is_same_v<T, std::pair<double, double>>) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
            !v[1].is_number())
          throw ConfigError(join(key) + ": expected [number, number]");
        return {v[0].get<double>(), v[1].get<double>()};
      } else {
        static_assert(sizeof(T) == 0, "unsupported config type");
      }
    } catch (const Json::exception&) {
      throw ConfigError(join(key) + ": malformed value");
    }
  }

  const Json& j_;
  std::string path_;
  std::vector<std::string> consumed_;
  inline static const Json empty_ = Json::object();
};

template <typename Enum>
Enum parse_enum(const std::string& value, const std::string& path,
                const std::vector<std::pair<std::string, Enum>>& table) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  std::string msg = path + ": '" + value + "' is not one of {";
  for (std::size_t i = 0; i < table.size(); ++i)
    msg += (i ? ", " : "") + table[i].first;
  throw ConfigError(msg + "}");
}

inline const std::vector<std::pair<std::string, PdeType>>& pde_table() {
  static const std::vector<std::pair<std::string, PdeType>> t = {
      {"poisson", PdeType::poisson},
      {"cd2d", PdeType::cd2d},
      {"cd2d_variable_eps", PdeType::cd2d_variable_eps}};
  return t;
}
inline const std::vector<std::pair<std::string, Precision>>&
precision_table() {
  static const std::vector<std::pair<std::string, Precision>> t = {
      {"double", Precision::f64}, {"single", Precision::f32}};
  return t;
}
inline const std::vector<std::pair<std::string, KernelKind>>& kernel_table() {
  static const std::vector<std::pair<std::string, KernelKind>> t = {
      {"tensor", KernelKind::tensor},
      {"loop", KernelKind::loop},
      {"matrix", KernelKind::matrix}};
  return t;
}

template <typename Enum>
std::string enum_name(
    Enum e, const std::vector<std::pair<std::string, Enum>>& table) {
  for (const auto& [name, v] : table)
    if (v == e) return name;
  return "?";
}

inline void check_field_name(const std::string& name,
                             const std::string& path) {
  try {
    lookup_field(name);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace detail

// Parse a complete configuration from a JSON document.  `origin` labels
// error messages (usually the file path).
inline FullConfig parse_config_json(const Json& root,
                                    const std::string& origin) {
  using detail::ConfigReader;
  FullConfig out;
  ConfigReader top(root, "");

  {
    if (!top.has_section("problem"))
      throw ConfigError(origin + ": missing required section 'problem'");
    ConfigReader p = top.section("problem");
    auto& pr = out.problem;

    {
      ConfigReader pde = p.section("pde");
      pr.pde = detail::parse_enum(
          pde.get<std::string>("type", "poisson"), pde.join("type"),
          detail::pde_table());
      pr.eps = pde.get<double>("eps", 1.0);
      const auto b =
          pde.get<std::pair<double, double>>("b", {0.0, 0.0});
      pr.bx = b.first;
      pr.by = b.second;
      pde.done();
      if (pr.pde == PdeType::poisson && (pr.bx != 0.0 || pr.by != 0.0))
        throw ConfigError(
            "problem.pde.b: poisson mode requires zero convection");
      if (pr.pde != PdeType::cd2d_variable_eps && !(pr.eps > 0.0))
        throw ConfigError("problem.pde.eps: must be positive");
    }

    pr.forcing = p.require<std::string>("forcing");
    detail::check_field_name(pr.forcing, p.join("forcing"));
    pr.boundary_g = p.require<std::string>("boundary_g");
    detail::check_field_name(pr.boundary_g, p.join("boundary_g"));
    pr.exact_solution = p.get<std::string>("exact_solution", "");
    if (!pr.exact_solution.empty())
      detail::check_field_name(pr.exact_solution, p.join("exact_solution"));
    pr.eps_exact = p.get<std::string>("eps_exact", "");
    if (!pr.eps_exact.empty())
      detail::check_field_name(pr.eps_exact, p.join("eps_exact"));
    if (p.has("eps_actual")) pr.eps_actual = p.require<double>("eps_actual");

    {
      ConfigReader d = p.section("domain");
      const std::string kind = d.get<std::string>("type", "rectangle");
      if (kind == "rectangle") {
        pr.domain.kind = DomainSpec::Kind::rectangle;
        pr.domain.nx = d.get<int>("nx", 1);
        pr.domain.ny = d.get<int>("ny", 1);
        pr.domain.x_range =
            d.get<std::pair<double, double>>("x_range", {0.0, 1.0});
        pr.domain.y_range =
            d.get<std::pair<double, double>>("y_range", {0.0, 1.0});
        if (pr.domain.nx < 1 || pr.domain.ny < 1)
          throw ConfigError("problem.domain: nx and ny must be >= 1");
        if (pr.domain.x_range.first >= pr.domain.x_range.second ||
            pr.domain.y_range.first >= pr.domain.y_range.second)
          throw ConfigError("problem.domain: ranges must be increasing");
      } else if (kind == "gmsh") {
        pr.domain.kind = DomainSpec::Kind::gmsh;
        pr.domain.path = d.require<std::string>("path");
        if (!std::ifstream(pr.domain.path).good())
          throw ConfigError("problem.domain.path: cannot open '" +
                            pr.domain.path + "'");
      } else {
        throw ConfigError(
            "problem.domain.type: '" + kind +
            "' is not one of {rectangle, gmsh}");
      }
      d.done();
    }

    pr.n_boundary_points = p.get<int>("n_boundary_points", 400);
    if (pr.n_boundary_points < 1)
      throw ConfigError("problem.n_boundary_points: must be >= 1");
    pr.boundary_seed = p.get<std::uint64_t>("boundary_seed", 1);

    if (p.has_section("sensors")) {
      ConfigReader s = p.section("sensors");
      SensorSpec spec;
      spec.count = s.get<int>("count", 50);
      spec.seed = s.get<std::uint64_t>("seed", 7);
      spec.source = s.get<std::string>("source", "exact");
      if (spec.count < 1)
        throw ConfigError("problem.sensors.count: must be >= 1");
      if (spec.source != "exact")
        throw ConfigError(
            "problem.sensors.source: only 'exact' is supported");
      s.done();
      pr.sensors = spec;
    } else if (p.has("sensors")) {
      p.raw("sensors");  // consume non-object to produce a clear error
      throw ConfigError("problem.sensors: expected an object");
    }
    p.done();
  }

  {
    ConfigReader d = top.section("discretization");
    auto& dc = out.disc;
    dc.n_test_per_dim = d.get<int>("n_test_per_dim", 5);
    dc.n_quad_per_dim = d.get<int>("n_quad_per_dim", 10);
    if (dc.n_test_per_dim < 1)
      throw ConfigError("discretization.n_test_per_dim: must be >= 1");
    if (dc.n_quad_per_dim < 2)
      throw ConfigError("discretization.n_quad_per_dim: must be >= 2");
    const std::string q =
        d.get<std::string>("quadrature", "gauss_legendre");
    if (q == "gauss_legendre")
      dc.quadrature = QuadratureKind::gauss_legendre;
    else if (q == "gauss_lobatto")
      dc.quadrature = QuadratureKind::gauss_lobatto;
    else
      throw ConfigError(
          "discretization.quadrature: '" + q +
          "' is not one of {gauss_legendre, gauss_lobatto}");
    const std::string form = d.get<std::string>("form", "weak");
    if (form == "weak")
      dc.form = LossForm::weak;
    else if (form == "strong")
      dc.form = LossForm::strong;
    else
      throw ConfigError("discretization.form: '" + form +
                        "' is not one of {weak, strong}");
    dc.kernel = detail::parse_enum(d.get<std::string>("kernel", "tensor"),
                                   d.join("kernel"), detail::kernel_table());
    d.done();
  }

  {
    ConfigReader n = top.section("network");
    auto& nc = out.network;
    nc.layers = n.get<std::vector<int>>("layers", {2, 30, 30, 30, 1});
    if (nc.layers.size() < 2 || nc.layers.front() != 2)
      throw ConfigError(
          "network.layers: need [2, ..., n_out] with 2 inputs");
    for (int s : nc.layers)
      if (s < 1) throw ConfigError("network.layers: sizes must be >= 1");
    const std::string act = n.get<std::string>("activation", "tanh");
    if (act == "tanh")
      nc.activation = Activation::tanh;
    else if (act == "sigmoid")
      nc.activation = Activation::sigmoid;
    else
      throw ConfigError("network.activation: '" + act +
                        "' is not one of {tanh, sigmoid}");
    if (n.has("eps_scalar_init"))
      nc.eps_scalar_init = n.require<double>("eps_scalar_init");
    n.done();

    if (out.problem.pde == PdeType::cd2d_variable_eps &&
        nc.layers.back() < 2)
      throw ConfigError(
          "network.layers: cd2d_variable_eps needs 2 output channels "
          "(solution and coefficient)");
    if (out.problem.pde == PdeType::cd2d_variable_eps &&
        nc.eps_scalar_init)
      throw ConfigError(
          "network.eps_scalar_init: incompatible with cd2d_variable_eps "
          "(the coefficient is the second output channel)");
  }

  {
    ConfigReader t = top.section("training");
    auto& tc = out.training;
    tc.iterations = t.get<std::int64_t>("iterations", 1000);
    if (tc.iterations < 1)
      throw ConfigError("training.iterations: must be >= 1");
    tc.lr.lr0 = t.get<double>("learning_rate", 1e-3);
    if (!(tc.lr.lr0 > 0.0))
      throw ConfigError("training.learning_rate: must be positive");
    if (t.has_section("lr_schedule")) {
      ConfigReader s = t.section("lr_schedule");
      const std::string kind = s.get<std::string>("type", "constant");
      if (kind == "constant") {
        tc.lr.mode = LrMode::constant;
      } else if (kind == "exponential") {
        tc.lr.mode = LrMode::exponential;
        tc.lr.decay = s.get<double>("decay", 0.99);
        tc.lr.every = s.get<int>("every", 1000);
        if (!(tc.lr.decay > 0.0 && tc.lr.decay <= 1.0))
          throw ConfigError(
              "training.lr_schedule.decay: must be in (0, 1]");
        if (tc.lr.every < 1)
          throw ConfigError("training.lr_schedule.every: must be >= 1");
      } else {
        throw ConfigError(
            "training.lr_schedule.type: '" + kind +
            "' is not one of {constant, exponential}");
      }
      s.done();
    } else {
      t.section("lr_schedule");  // consume an explicit null
    }
    {
      ConfigReader w = t.section("weights");
      tc.weights.tau = w.get<double>("tau", 10.0);
      tc.weights.gamma = w.get<double>("gamma", 10.0);
      if (tc.weights.tau < 0.0 || tc.weights.gamma < 0.0)
        throw ConfigError("training.weights: must be nonnegative");
      w.done();
    }
    out.seed = t.get<std::uint64_t>("seed", 42);
    out.precision = detail::parse_enum(
        t.get<std::string>("precision", "double"), t.join("precision"),
        detail::precision_table());
    tc.log_every = t.get<int>("log_every", 100);
    if (tc.log_every < 1)
      throw ConfigError("training.log_every: must be >= 1");
    tc.timing_window = t.get<int>("timing_window", 0);
    if (tc.timing_window < 0)
      throw ConfigError("training.timing_window: must be >= 0");
    if (t.has_section("convergence")) {
      ConfigReader c = t.section("convergence");
      if (c.has("eps_abs_tol"))
        tc.convergence.eps_abs_tol = c.require<double>("eps_abs_tol");
      if (c.has("loss_tol"))
        tc.convergence.loss_tol = c.require<double>("loss_tol");
      tc.convergence.plateau_window = c.get<int>("plateau_window", 2000);
      if (tc.convergence.plateau_window < 1)
        throw ConfigError(
            "training.convergence.plateau_window: must be >= 1");
      c.done();
    } else {
      t.section("convergence");
    }
    tc.convergence.eps_actual = out.problem.eps_actual;
    t.done();
  }

  {
    ConfigReader o = top.section("output");
    out.output.grid_nx = o.get<int>("grid_nx", 100);
    out.output.grid_ny = o.get<int>("grid_ny", 100);
    if (out.output.grid_nx < 2 || out.output.grid_ny < 2)
      throw ConfigError("output.grid_nx/grid_ny: must be >= 2");
    out.output.heatmaps = o.get<bool>("heatmaps", true);
    o.done();
  }

  if (top.has_section("benchmark")) {
    ConfigReader b = top.section("benchmark");
    BenchmarkSpec bs;
    for (const auto& name :
         b.require<std::vector<std::string>>("kernels"))
      bs.kernels.push_back(detail::parse_enum(name, b.join("kernels"),
                                              detail::kernel_table()));
    if (bs.kernels.empty())
      throw ConfigError("benchmark.kernels: sweep must not be empty");
    bs.elements_per_dim = b.require<std::vector<int>>("elements_per_dim");
    if (bs.elements_per_dim.empty())
      throw ConfigError(
          "benchmark.elements_per_dim: sweep must not be empty");
    for (int e : bs.elements_per_dim)
      if (e < 1)
        throw ConfigError("benchmark.elements_per_dim: entries must be >= 1");
    bs.n_test_per_dim = b.get<std::vector<int>>("n_test_per_dim", {5});
    if (bs.n_test_per_dim.empty())
      throw ConfigError("benchmark.n_test_per_dim: sweep must not be empty");
    for (int t : bs.n_test_per_dim)
      if (t < 1)
        throw ConfigError("benchmark.n_test_per_dim: entries must be >= 1");
    const bool has_quad_list = b.has("n_quad_per_dim");
    const bool has_total = b.has("total_quad_points");
    if (has_quad_list == has_total)
      throw ConfigError(
          "benchmark: give exactly one of n_quad_per_dim and "
          "total_quad_points");
    if (has_quad_list) {
      bs.n_quad_per_dim = b.require<std::vector<int>>("n_quad_per_dim");
      if (bs.n_quad_per_dim.empty())
        throw ConfigError(
            "benchmark.n_quad_per_dim: sweep must not be empty");
      for (int q : bs.n_quad_per_dim)
        if (q < 2)
          throw ConfigError(
              "benchmark.n_quad_per_dim: entries must be >= 2");
    } else {
      bs.total_quad_points = b.require<std::int64_t>("total_quad_points");
      if (*bs.total_quad_points < 1)
        throw ConfigError("benchmark.total_quad_points: must be >= 1");
      for (int e : bs.elements_per_dim) {
        const std::int64_t n_elem = std::int64_t(e) * e;
        const std::int64_t per_elem = *bs.total_quad_points / n_elem;
        const auto per_dim =
            static_cast<std::int64_t>(std::llround(std::sqrt(
                static_cast<double>(per_elem))));
        if (per_elem * n_elem != *bs.total_quad_points ||
            per_dim * per_dim != per_elem || per_dim < 2)
          throw ConfigError(
              "benchmark.total_quad_points: " +
              std::to_string(*bs.total_quad_points) +
              " does not split into a square per-element rule (>= 2 per "
              "dimension) over " +
              std::to_string(n_elem) + " elements");
      }
    }
    bs.reps = b.get<int>("reps", 15);
    if (bs.reps < 10)
      throw ConfigError("benchmark.reps: must be >= 10");
    bs.skew = b.get<double>("skew", 0.0);
    if (!(bs.skew >= 0.0 && bs.skew <= 0.45))
      throw ConfigError("benchmark.skew: must be in [0, 0.45]");
    b.done();
    out.benchmark = bs;
  }

  top.done();
  return out;
}

inline FullConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  Json root;
  try {
    root = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config_json(root, path);
}

// Effective configuration (defaults filled in), suitable both for the run
// report and for re-running: parse_config_json(effective_config(c)) == c.
inline Json effective_config(const FullConfig& c) {
  Json root;
  Json pde;
  pde["type"] = detail::enum_name(c.problem.pde, detail::pde_table());
  pde["eps"] = c.problem.eps;
  pde["b"] = {c.problem.bx, c.problem.by};
  Json problem;
  problem["pde"] = pde;
  problem["forcing"] = c.problem.forcing;
  problem["boundary_g"] = c.problem.boundary_g;
  if (!c.problem.exact_solution.empty())
    problem["exact_solution"] = c.problem.exact_solution;
  if (!c.problem.eps_exact.empty())
    problem["eps_exact"] = c.problem.eps_exact;
  if (c.problem.eps_actual) problem["eps_actual"] = *c.problem.eps_actual;
  Json domain;
  if (c.problem.domain.kind == DomainSpec::Kind::rectangle) {
    domain["type"] = "rectangle";
    domain["nx"] = c.problem.domain.nx;
    domain["ny"] = c.problem.domain.ny;
    domain["x_range"] = {c.problem.domain.x_range.first,
                         c.problem.domain.x_range.second};
    domain["y_range"] = {c.problem.domain.y_range.first,
                         c.problem.domain.y_range.second};
  } else {
    domain["type"] = "gmsh";
    domain["path"] = c.problem.domain.path;
  }
  problem["domain"] = domain;
  problem["n_boundary_points"] = c.problem.n_boundary_points;
  problem["boundary_seed"] = c.problem.boundary_seed;
  if (c.problem.sensors) {
    Json s;
    s["count"] = c.problem.sensors->count;
    s["seed"] = c.problem.sensors->seed;
    s["source"] = c.problem.sensors->source;
    problem["sensors"] = s;
  }
  root["problem"] = problem;

  Json disc;
  disc["n_test_per_dim"] = c.disc.n_test_per_dim;
  disc["n_quad_per_dim"] = c.disc.n_quad_per_dim;
  disc["quadrature"] = c.disc.quadrature == QuadratureKind::gauss_legendre
                           ? "gauss_legendre"
                           : "gauss_lobatto";
  disc["form"] = c.disc.form == LossForm::weak ? "weak" : "strong";
  disc["kernel"] = detail::enum_name(c.disc.kernel, detail::kernel_table());
  root["discretization"] = disc;

  Json net;
  net["layers"] = c.network.layers;
  net["activation"] =
      c.network.activation == Activation::tanh ? "tanh" : "sigmoid";
  if (c.network.eps_scalar_init)
    net["eps_scalar_init"] = *c.network.eps_scalar_init;
  root["network"] = net;

  Json tr;
  tr["iterations"] = c.training.iterations;
  tr["learning_rate"] = c.training.lr.lr0;
  Json sched;
  if (c.training.lr.mode == LrMode::constant) {
    sched["type"] = "constant";
  } else {
    sched["type"] = "exponential";
    sched["decay"] = c.training.lr.decay;
    sched["every"] = c.training.lr.every;
  }
  tr["lr_schedule"] = sched;
  Json weights;
  weights["tau"] = c.training.weights.tau;
  weights["gamma"] = c.training.weights.gamma;
  tr["weights"] = weights;
  tr["seed"] = c.seed;
  tr["precision"] = detail::enum_name(c.precision, detail::precision_table());
  tr["log_every"] = c.training.log_every;
  tr["timing_window"] = c.training.timing_window;
  if (c.training.convergence.eps_abs_tol || c.training.convergence.loss_tol) {
    Json conv;
    if (c.training.convergence.eps_abs_tol)
      conv["eps_abs_tol"] = *c.training.convergence.eps_abs_tol;
    if (c.training.convergence.loss_tol)
      conv["loss_tol"] = *c.training.convergence.loss_tol;
    conv["plateau_window"] = c.training.convergence.plateau_window;
    tr["convergence"] = conv;
  }
  root["training"] = tr;

  Json outp;
  outp["grid_nx"] = c.output.grid_nx;
  outp["grid_ny"] = c.output.grid_ny;
  outp["heatmaps"] = c.output.heatmaps;
  root["output"] = outp;

  if (c.benchmark) {
    const auto& bs = *c.benchmark;
    Json b;
    Json kernels = Json::array();
    for (KernelKind k : bs.kernels)
      kernels.push_back(detail::enum_name(k, detail::kernel_table()));
    b["kernels"] = kernels;
    b["elements_per_dim"] = bs.elements_per_dim;
    b["n_test_per_dim"] = bs.n_test_per_dim;
    if (bs.total_quad_points)
      b["total_quad_points"] = *bs.total_quad_points;
    else
      b["n_quad_per_dim"] = bs.n_quad_per_dim;
    b["reps"] = bs.reps;
    b["skew"] = bs.skew;
    root["benchmark"] = b;
  }
  return root;
}

}  // namespace vpinn
