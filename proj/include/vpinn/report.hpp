#pragma once

// Run artifacts: the report document (JSON), loss-history and solution-grid
// CSVs, PPM heatmaps with min/max sidecars, and the benchmark table.  All
// files are written atomically (temp file + rename), so a rerun into the
// same directory replaces artifacts without ever exposing partial ones.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "vpinn/config.hpp"
#include "vpinn/network.hpp"
#include "vpinn/trainer.hpp"

namespace vpinn {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void atomic_write_text(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw IoError("cannot rename '" + tmp.string() + "' to '" + path +
                  "': " + ec.message());
}

// ---------------------------------------------------------------------------
// Loss-history CSV: step,total,variational,boundary,sensor,lr,epsilon

inline std::string loss_history_csv(const std::vector<HistoryRow>& rows) {
  std::string out = "step,total,variational,boundary,sensor,lr,epsilon\n";
  for (const auto& r : rows) {
    out += std::to_string(r.step) + ",";
    out += detail::format_double(r.total) + ",";
    out += detail::format_double(r.variational) + ",";
    out += detail::format_double(r.boundary) + ",";
    out += detail::format_double(r.sensor) + ",";
    out += detail::format_double(r.lr) + ",";
    out += detail::format_double(r.eps) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solution grid, sampled on the metrics grid.  Column layout:
//   x,y,u_pred[,u_exact,abs_err][,eps_pred]

struct SolutionGrid {
  GridSpec spec;
  std::vector<Point2> points;
  std::vector<double> u_pred;
  std::vector<double> u_exact;  // empty when no exact solution is known
  std::vector<double> eps_pred;  // empty unless the network has the head
};

template <typename Real>
SolutionGrid sample_solution_grid(const DenseNetwork<Real>& net,
                                  const GridSpec& spec,
                                  const ScalarField2D* exact) {
  SolutionGrid g;
  g.spec = spec;
  g.points = grid_points(spec);
  const auto ev = evaluate(net, g.points, 0);
  g.u_pred.resize(g.points.size());
  for (std::size_t i = 0; i < g.points.size(); ++i)
    g.u_pred[i] = static_cast<double>(ev.u[static_cast<Eigen::Index>(i)]);
  if (exact) {
    g.u_exact.resize(g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i)
      g.u_exact[i] = (*exact)(g.points[i].x, g.points[i].y);
  }
  if (net.output_channels() >= 2) {
    g.eps_pred.resize(g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i)
      g.eps_pred[i] =
          static_cast<double>(ev.eps[static_cast<Eigen::Index>(i)]);
  }
  return g;
}

inline std::string solution_grid_csv(const SolutionGrid& g) {
  std::string header = "x,y,u_pred";
  if (!g.u_exact.empty()) header += ",u_exact,abs_err";
  if (!g.eps_pred.empty()) header += ",eps_pred";
  std::string out = header + "\n";
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    out += detail::format_double(g.points[i].x) + ",";
    out += detail::format_double(g.points[i].y) + ",";
    out += detail::format_double(g.u_pred[i]);
    if (!g.u_exact.empty()) {
      out += "," + detail::format_double(g.u_exact[i]);
      out += "," +
             detail::format_double(std::abs(g.u_pred[i] - g.u_exact[i]));
    }
    if (!g.eps_pred.empty())
      out += "," + detail::format_double(g.eps_pred[i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// PPM heatmap (P6) with a two-segment diverging colormap (blue -> white ->
// red across [vmin, vmax]) and a text sidecar recording range and layout.
// Row 0 of the image is the TOP of the domain (largest y).

namespace detail {

struct Rgb {
  unsigned char r, g, b;
};

inline Rgb diverging_color(double t) {
  // endpoints and midpoint of a blue/white/red map
  const double lo[3] = {59, 76, 192}, mid[3] = {221, 221, 221},
               hi[3] = {180, 4, 38};
  double c[3];
  if (t < 0.5) {
    const double s = t / 0.5;
    for (int i = 0; i < 3; ++i) c[i] = lo[i] + (mid[i] - lo[i]) * s;
  } else {
    const double s = (t - 0.5) / 0.5;
    for (int i = 0; i < 3; ++i) c[i] = mid[i] + (hi[i] - mid[i]) * s;
  }
  return {static_cast<unsigned char>(c[0] + 0.5),
          static_cast<unsigned char>(c[1] + 0.5),
          static_cast<unsigned char>(c[2] + 0.5)};
}

}  // namespace detail

// values: row-major, x fastest, row 0 at y_min (the grid_points layout).
inline void write_heatmap_ppm(const std::string& path,
                              const std::vector<double>& values, int nx,
                              int ny) {
  if (nx < 1 || ny < 1 ||
      values.size() != static_cast<std::size_t>(nx) * ny)
    throw InvalidArgumentError(
        "write_heatmap_ppm: values must form an nx * ny grid");
  double vmin = values[0], vmax = values[0];
  for (double v : values) {
    if (!std::isfinite(v))
      throw InvalidArgumentError("write_heatmap_ppm: non-finite value");
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double span = vmax > vmin ? vmax - vmin : 1.0;

  std::string img = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) +
                    "\n255\n";
  img.reserve(img.size() + static_cast<std::size_t>(nx) * ny * 3);
  for (int row = 0; row < ny; ++row) {
    const int j = ny - 1 - row;  // image top = largest y
    for (int i = 0; i < nx; ++i) {
      const double v = values[static_cast<std::size_t>(j) * nx + i];
      const auto c = detail::diverging_color((v - vmin) / span);
      img.push_back(static_cast<char>(c.r));
      img.push_back(static_cast<char>(c.g));
      img.push_back(static_cast<char>(c.b));
    }
  }
  atomic_write_text(path, img);

  std::string side;
  side += "min " + detail::format_double(vmin) + "\n";
  side += "max " + detail::format_double(vmax) + "\n";
  side += "nx " + std::to_string(nx) + "\n";
  side += "ny " + std::to_string(ny) + "\n";
  side +=
      "colormap diverging blue(59,76,192)-white(221,221,221)-red(180,4,38) "
      "linear over [min,max]\n";
  side += "orientation row 0 is the top of the domain (largest y)\n";
  atomic_write_text(path + ".txt", side);
}

// ---------------------------------------------------------------------------
// Benchmark CSV: kernel,n_elem,n_test,n_quad,median_s,p10_s,p90_s,threads,
// precision.  Unsupported combinations carry the literal `unsupported` in
// the timing cells.

struct BenchmarkRow {
  std::string kernel;
  int n_elem = 0, n_test = 0, n_quad = 0;
  bool supported = true;
  double median_s = 0.0, p10_s = 0.0, p90_s = 0.0;
  int threads = 1;
  std::string precision = "double";
};

inline std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out =
      "kernel,n_elem,n_test,n_quad,median_s,p10_s,p90_s,threads,precision\n";
  for (const auto& r : rows) {
    out += r.kernel + "," + std::to_string(r.n_elem) + "," +
           std::to_string(r.n_test) + "," + std::to_string(r.n_quad) + ",";
    if (r.supported) {
      out += detail::format_double(r.median_s) + ",";
      out += detail::format_double(r.p10_s) + ",";
      out += detail::format_double(r.p90_s) + ",";
    } else {
      out += "unsupported,unsupported,unsupported,";
    }
    out += std::to_string(r.threads) + "," + r.precision + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// The report document.

inline std::string hardware_descriptor() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find("model name");
    if (pos != std::string::npos) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string name = line.substr(colon + 1);
        while (!name.empty() && name.front() == ' ') name.erase(0, 1);
        return name;
      }
    }
  }
  return "unknown cpu";
}

struct RunInfo {
  std::string command;  // solve | inverse | benchmark | check | mesh-info
  int threads = 1;
  int mesh_n_nodes = 0, mesh_n_elements = 0, mesh_n_boundary = 0;
};

inline Json run_report_json(const FullConfig& cfg, const RunInfo& info,
                            const RunReport& rep) {
  auto num_or_null = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  Json j;
  j["command"] = info.command;
  j["config"] = effective_config(cfg);
  j["hardware"] = {{"cpu", hardware_descriptor()},
                   {"threads", info.threads}};
  j["mesh"] = {{"n_nodes", info.mesh_n_nodes},
               {"n_elements", info.mesh_n_elements},
               {"n_boundary_nodes", info.mesh_n_boundary}};

  Json hist;
  for (const char* key : {"step", "total", "variational", "boundary",
                          "sensor", "lr", "epsilon"})
    hist[key] = Json::array();
  for (const auto& r : rep.history) {
    hist["step"].push_back(r.step);
    hist["total"].push_back(r.total);
    hist["variational"].push_back(r.variational);
    hist["boundary"].push_back(r.boundary);
    hist["sensor"].push_back(r.sensor);
    hist["lr"].push_back(r.lr);
    hist["epsilon"].push_back(num_or_null(r.eps));
  }
  j["history"] = hist;

  j["metrics"] = {{"mae", num_or_null(rep.metrics.mae)},
                  {"rel_l2", num_or_null(rep.metrics.rel_l2)},
                  {"max_err", num_or_null(rep.metrics.max_err)}};
  j["timing"] = {{"median_s", rep.timing.median_s},
                 {"p10_s", rep.timing.p10_s},
                 {"p90_s", rep.timing.p90_s},
                 {"samples", rep.timing.samples.size()}};
  j["converged"] = rep.converged;
  j["stop_reason"] = rep.stop_reason;
  j["steps_run"] = rep.steps_run;
  if (std::isfinite(rep.final_eps)) {
    j["inverse"] = {{"final_eps", rep.final_eps},
                    {"eps_abs_error", num_or_null(rep.eps_abs_error)}};
  }
  return j;
}

// Writes the full artifact set for a run into `dir`.  Returns the list of
// files written (relative to `dir`).
inline std::vector<std::string> write_run_artifacts(
    const std::string& dir, const FullConfig& cfg, const RunInfo& info,
    const RunReport& rep, const SolutionGrid& grid) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir + "'");

  std::vector<std::string> written;
  const auto emit = [&](const std::string& name,
                        const std::string& content) {
    atomic_write_text((fs::path(dir) / name).string(), content);
    written.push_back(name);
  };

  emit("report.json", run_report_json(cfg, info, rep).dump(2) + "\n");
  emit("loss.csv", loss_history_csv(rep.history));
  emit("solution.csv", solution_grid_csv(grid));

  if (cfg.output.heatmaps) {
    const int nx = grid.spec.nx, ny = grid.spec.ny;
    const auto heat = [&](const std::string& name,
                          const std::vector<double>& v) {
      write_heatmap_ppm((fs::path(dir) / name).string(), v, nx, ny);
      written.push_back(name);
      written.push_back(name + ".txt");
    };
    heat("u_pred.ppm", grid.u_pred);
    if (!grid.u_exact.empty()) {
      heat("u_exact.ppm", grid.u_exact);
      std::vector<double> err(grid.u_pred.size());
      for (std::size_t i = 0; i < err.size(); ++i)
        err[i] = std::abs(grid.u_pred[i] - grid.u_exact[i]);
      heat("abs_err.ppm", err);
    }
    if (!grid.eps_pred.empty()) heat("eps_pred.ppm", grid.eps_pred);
  }
  return written;
}

}  // namespace vpinn
