#pragma once

// Element-tensor assembly: the per-element premultiplier tensors that reduce
// the weak-form residual to contractions against sampled network gradients,
// plus forcing assembly, boundary/sensor sampling, and a binary dump format
// for offline inspection.

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "vpinn/basis.hpp"
#include "vpinn/core.hpp"
#include "vpinn/geometry.hpp"
#include "vpinn/quadrature.hpp"

namespace vpinn {

using ScalarField2D = std::function<double(double, double)>;

// Premultiplier tensors, one (n_test x n_quad) slice per element, with the
// quadrature weight and jacobian determinant folded in:
//   grad_x(k,j,q) = w_q det_kq dv_j/dx|_kq      (physical derivative)
//   grad_y(k,j,q) = w_q det_kq dv_j/dy|_kq
//   test  (k,j,q) = w_q det_kq v_j(q)
// so the diffusion residual is a plain contraction over q and the same test
// slice serves both the convection term and the forcing column:
//   forcing(j,k) = sum_q test(k,j,q) f(x_kq).
// Slices are stored row-major and contiguous per element.
template <typename Real>
struct ElementTensors {
  int n_elem = 0, n_test = 0, n_quad = 0;
  std::vector<Real> grad_x, grad_y, test;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> forcing;  // n_test x n_elem
  std::vector<Point2> quad_points;  // element-major, n_elem * n_quad

  using SliceMap = Eigen::Map<
      const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  SliceMap grad_x_slice(int k) const { return slice(grad_x, k); }
  SliceMap grad_y_slice(int k) const { return slice(grad_y, k); }
  SliceMap test_slice(int k) const { return slice(test, k); }
  bool has_forcing() const { return forcing.size() > 0; }

 private:
  SliceMap slice(const std::vector<Real>& t, int k) const {
    return SliceMap(t.data() +
                        static_cast<std::size_t>(k) * n_test * n_quad,
                    n_test, n_quad);
  }
};

// Geometry and basis factors are computed in double regardless of Real; the
// cast happens at storage time.
template <typename Real = double>
ElementTensors<Real> assemble_element_tensors(const Mesh& mesh,
                                              const ReferenceBasis& basis,
                                              const QuadratureRule2D& rule) {
  const int n_elem = mesh.n_elements();
  const int n_test = basis.n_test();
  const int n_quad = rule.size();
  if (n_elem == 0) throw InvalidArgumentError("assemble: empty mesh");
  if (basis.values.cols() != n_quad)
    throw ContractViolationError(
        "assemble: basis was built for a different quadrature rule");

  ElementTensors<Real> out;
  out.n_elem = n_elem;
  out.n_test = n_test;
  out.n_quad = n_quad;
  const std::size_t slice = static_cast<std::size_t>(n_test) * n_quad;
  out.grad_x.resize(slice * n_elem);
  out.grad_y.resize(slice * n_elem);
  out.test.resize(slice * n_elem);
  out.quad_points.resize(static_cast<std::size_t>(n_elem) * n_quad);

  for (int k = 0; k < n_elem; ++k) {
    const auto nodes = element_nodes(mesh, k);
    const BilinearCoeffs c = bilinear_coeffs(nodes);
    Real* gx = out.grad_x.data() + slice * k;
    Real* gy = out.grad_y.data() + slice * k;
    Real* tv = out.test.data() + slice * k;
    for (int q = 0; q < n_quad; ++q) {
      const double xi = rule.xi[q];
      const double eta = rule.eta[q];
      const JacobianData jd = detail::jacobian_at(c, xi, eta);
      if (!(jd.det > 0.0))
        throw DegenerateElementError(
            k, "assemble: element " + std::to_string(k) +
                   " has non-positive jacobian determinant " +
                   std::to_string(jd.det) + " at quadrature point " +
                   std::to_string(q));
      out.quad_points[static_cast<std::size_t>(k) * n_quad + q] = {
          c.xc0 + c.xc1 * xi + c.xc2 * eta + c.xc3 * xi * eta,
          c.yc0 + c.yc1 * xi + c.yc2 * eta + c.yc3 * xi * eta};
      const double wdet = rule.weights[q] * jd.det;
      const double inv = 1.0 / jd.det;
      for (int j = 0; j < n_test; ++j) {
        const double dxi = basis.grad_xi(j, q);
        const double deta = basis.grad_eta(j, q);
        const double dvdx = (jd.j22 * dxi - jd.j12 * deta) * inv;
        const double dvdy = (-jd.j21 * dxi + jd.j11 * deta) * inv;
        gx[static_cast<std::size_t>(j) * n_quad + q] =
            static_cast<Real>(wdet * dvdx);
        gy[static_cast<std::size_t>(j) * n_quad + q] =
            static_cast<Real>(wdet * dvdy);
        tv[static_cast<std::size_t>(j) * n_quad + q] =
            static_cast<Real>(wdet * basis.values(j, q));
      }
    }
  }
  return out;
}

// Fills tensors.forcing by sampling f at the stored quadrature points.
template <typename Real>
void assemble_forcing(ElementTensors<Real>& tensors, const ScalarField2D& f) {
  tensors.forcing.resize(tensors.n_test, tensors.n_elem);
  Eigen::Vector<Real, Eigen::Dynamic> fs(tensors.n_quad);
  for (int k = 0; k < tensors.n_elem; ++k) {
    for (int q = 0; q < tensors.n_quad; ++q) {
      const Point2 p =
          tensors.quad_points[static_cast<std::size_t>(k) * tensors.n_quad + q];
      const double v = f(p.x, p.y);
      if (!is_finite(v))
        throw AssemblyError("forcing is not finite at (" + std::to_string(p.x) +
                            ", " + std::to_string(p.y) + ")");
      fs[q] = static_cast<Real>(v);
    }
    tensors.forcing.col(k) = tensors.test_slice(k) * fs;
  }
}

// ---------------------------------------------------------------------------
// Regular-grid premultipliers: the reduced form valid only when every element
// is an axis-aligned rectangle (constant diagonal jacobian).  Reference-space
// test derivatives carry the quadrature weight; the geometry enters through
// per-point column factors:
//   grad_x = (w dv/dxi) @ (U_x o J_x)   with J_x(q,n) = det_n / j11_n
// Jx/Jy/Jdet are stored as full n_quad x n_elem matrices (constant down each
// column) so the contraction is a single dense product per term.
template <typename Real>
struct RegularPremultipliers {
  int n_elem = 0, n_test = 0, n_quad = 0;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> V, Vx, Vy;  // n_test x n_quad
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> Jx, Jy, Jdet;  // n_quad x n_elem
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> forcing;  // n_test x n_elem
};

// Throws InvalidModeError when some element is not an axis-aligned rectangle.
template <typename Real = double>
RegularPremultipliers<Real> assemble_regular_premultipliers(
    const Mesh& mesh, const ReferenceBasis& basis, const QuadratureRule2D& rule,
    const ScalarField2D& f) {
  const int n_elem = mesh.n_elements();
  const int n_test = basis.n_test();
  const int n_quad = rule.size();
  if (n_elem == 0) throw InvalidArgumentError("assemble: empty mesh");

  RegularPremultipliers<Real> out;
  out.n_elem = n_elem;
  out.n_test = n_test;
  out.n_quad = n_quad;
  out.V.resize(n_test, n_quad);
  out.Vx.resize(n_test, n_quad);
  out.Vy.resize(n_test, n_quad);
  for (int j = 0; j < n_test; ++j) {
    for (int q = 0; q < n_quad; ++q) {
      out.V(j, q) = static_cast<Real>(rule.weights[q] * basis.values(j, q));
      out.Vx(j, q) = static_cast<Real>(rule.weights[q] * basis.grad_xi(j, q));
      out.Vy(j, q) = static_cast<Real>(rule.weights[q] * basis.grad_eta(j, q));
    }
  }

  out.Jx.resize(n_quad, n_elem);
  out.Jy.resize(n_quad, n_elem);
  out.Jdet.resize(n_quad, n_elem);
  out.forcing.resize(n_test, n_elem);
  Eigen::VectorXd fdet(n_quad);
  for (int k = 0; k < n_elem; ++k) {
    const auto nodes = element_nodes(mesh, k);
    const BilinearCoeffs c = bilinear_coeffs(nodes);
    const double scale =
        std::max({std::abs(c.xc1), std::abs(c.yc2), std::abs(c.xc2),
                  std::abs(c.yc1)}) +
        std::max(std::abs(c.xc3), std::abs(c.yc3));
    const double tol = 1e-12 * std::max(scale, 1.0);
    if (std::abs(c.xc3) > tol || std::abs(c.yc3) > tol ||
        std::abs(c.xc2) > tol || std::abs(c.yc1) > tol)
      throw InvalidModeError(
          "regular premultipliers require axis-aligned rectangular elements; "
          "element " +
          std::to_string(k) + " is skewed");
    const double jx = c.xc1, jy = c.yc2;
    const double det = jx * jy;
    if (!(det > 0.0))
      throw DegenerateElementError(
          k, "assemble: element " + std::to_string(k) +
                 " has non-positive jacobian determinant");
    out.Jx.col(k).setConstant(static_cast<Real>(det / jx));
    out.Jy.col(k).setConstant(static_cast<Real>(det / jy));
    out.Jdet.col(k).setConstant(static_cast<Real>(det));
    for (int q = 0; q < n_quad; ++q) {
      const Point2 p = bilinear_map(nodes, rule.xi[q], rule.eta[q]);
      const double v = f(p.x, p.y);
      if (!is_finite(v))
        throw AssemblyError("forcing is not finite at (" + std::to_string(p.x) +
                            ", " + std::to_string(p.y) + ")");
      fdet[q] = det * rule.weights[q] * v;
    }
    out.forcing.col(k) =
        (basis.values * fdet).template cast<Real>();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary and sensor point sets.

struct BoundarySet {
  std::vector<Point2> points;
  Eigen::VectorXd values;  // prescribed boundary data at each point
};

// n points distributed uniformly by arc length over the boundary edges, with
// a seed-dependent fractional offset so different seeds give different point
// sets.  Deterministic for a fixed (mesh, n, seed).
inline BoundarySet sample_boundary(const Mesh& mesh, int n,
                                   const ScalarField2D& g, std::uint64_t seed) {
  if (n < 1) throw InvalidArgumentError("sample_boundary: n must be >= 1");
  const auto edges = boundary_edges(mesh);
  if (edges.empty())
    throw InvalidArgumentError("sample_boundary: mesh has no boundary edges");

  std::vector<double> lengths(edges.size());
  double total = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Point2 a = mesh.nodes[edges[i].first];
    const Point2 b = mesh.nodes[edges[i].second];
    lengths[i] = std::hypot(b.x - a.x, b.y - a.y);
    total += lengths[i];
  }

  Rng rng(seed);
  const double offset = rng.uniform();
  BoundarySet out;
  out.points.reserve(n);
  out.values.resize(n);
  std::size_t edge = 0;
  double consumed = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + offset) * total / n;
    while (edge + 1 < edges.size() && consumed + lengths[edge] < s) {
      consumed += lengths[edge];
      ++edge;
    }
    const double t = std::min(1.0, (s - consumed) / lengths[edge]);
    const Point2 a = mesh.nodes[edges[edge].first];
    const Point2 b = mesh.nodes[edges[edge].second];
    const Point2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double v = g(p.x, p.y);
    if (!is_finite(v))
      throw AssemblyError("boundary data is not finite at (" +
                          std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ")");
    out.points.push_back(p);
    out.values[i] = v;
  }
  return out;
}

struct SensorSet {
  std::vector<Point2> points;
  Eigen::VectorXd values;  // observed solution at each point
};

// Interior sensor locations: a uniformly random element, then a uniformly
// random reference point mapped into it.
inline SensorSet sample_sensors(const Mesh& mesh, int n,
                                const ScalarField2D& u_observed,
                                std::uint64_t seed) {
  if (n < 1) throw InvalidArgumentError("sample_sensors: n must be >= 1");
  Rng rng(seed);
  SensorSet out;
  out.points.reserve(n);
  out.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(rng.integer(mesh.n_elements()));
    const double xi = rng.uniform(-1.0, 1.0);
    const double eta = rng.uniform(-1.0, 1.0);
    const Point2 p = bilinear_map(element_nodes(mesh, k), xi, eta);
    const double v = u_observed(p.x, p.y);
    if (!is_finite(v))
      throw AssemblyError("sensor data is not finite at (" +
                          std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ")");
    out.points.push_back(p);
    out.values[i] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binary tensor dump: magic, little-endian u64 rank and dims, then the
// payload as little-endian f64 in C (row-major) order.

inline constexpr char kTensorMagic[8] = {'V', 'P', 'T', 'E',
                                         'N', 'S', '0', '1'};

inline void write_tensor_binary(const std::string& path,
                                const std::vector<std::uint64_t>& dims,
                                const double* data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kTensorMagic, 8);
  const std::uint64_t rank = dims.size();
  out.write(reinterpret_cast<const char*>(&rank), 8);
  std::uint64_t count = 1;
  for (const auto d : dims) {
    out.write(reinterpret_cast<const char*>(&d), 8);
    count *= d;
  }
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * 8));
  if (!out) throw IoError("write failed: " + path);
}

struct TensorFile {
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

inline TensorFile read_tensor_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kTensorMagic, 8) != 0)
    throw IoError("not a tensor dump: " + path);
  std::uint64_t rank = 0;
  in.read(reinterpret_cast<char*>(&rank), 8);
  if (!in || rank > 8) throw IoError("corrupt tensor dump: " + path);
  TensorFile tf;
  tf.dims.resize(rank);
  std::uint64_t count = 1;
  for (auto& d : tf.dims) {
    in.read(reinterpret_cast<char*>(&d), 8);
    count *= d;
  }
  tf.data.resize(count);
  in.read(reinterpret_cast<char*>(tf.data.data()),
          static_cast<std::streamsize>(count * 8));
  if (!in) throw IoError("truncated tensor dump: " + path);
  return tf;
}

// Writes grad_x/grad_y/test as [n_elem, n_test, n_quad], forcing as
// [n_test, n_elem], and the quadrature points as [n_elem * n_quad, 2].
template <typename Real>
void dump_element_tensors(const ElementTensors<Real>& t,
                          const std::string& dir) {
  const auto dump3 = [&](const std::vector<Real>& v, const std::string& name) {
    std::vector<double> buf(v.begin(), v.end());
    write_tensor_binary(dir + "/" + name,
                        {static_cast<std::uint64_t>(t.n_elem),
                         static_cast<std::uint64_t>(t.n_test),
                         static_cast<std::uint64_t>(t.n_quad)},
                        buf.data());
  };
  dump3(t.grad_x, "grad_x.bin");
  dump3(t.grad_y, "grad_y.bin");
  dump3(t.test, "test.bin");
  if (t.has_forcing()) {
    // forcing is column-major in memory; emit row-major explicitly.
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(t.n_test) * t.n_elem);
    for (int j = 0; j < t.n_test; ++j)
      for (int k = 0; k < t.n_elem; ++k)
        buf.push_back(static_cast<double>(t.forcing(j, k)));
    write_tensor_binary(dir + "/forcing.bin",
                        {static_cast<std::uint64_t>(t.n_test),
                         static_cast<std::uint64_t>(t.n_elem)},
                        buf.data());
  }
  std::vector<double> pts;
  pts.reserve(t.quad_points.size() * 2);
  for (const auto& p : t.quad_points) {
    pts.push_back(p.x);
    pts.push_back(p.y);
  }
  write_tensor_binary(dir + "/quad_points.bin",
                      {static_cast<std::uint64_t>(t.quad_points.size()), 2},
                      pts.data());
}

}  // namespace vpinn
