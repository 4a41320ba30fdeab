#pragma once

// Quadrilateral meshes and the bilinear isoparametric map from the reference
// square [-1,1]^2 to a physical element.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vpinn/core.hpp"

namespace vpinn {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Vertices in counter-clockwise order starting at the one mapped from the
// reference corner (-1,-1).
struct QuadElement {
  std::array<int, 4> vertex_ids{};
};

struct Mesh {
  std::vector<Point2> nodes;
  std::vector<QuadElement> elements;
  std::vector<int> boundary_node_ids;  // sorted, unique
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
};

inline std::array<Point2, 4> element_nodes_of(const Mesh& mesh,
                                              const QuadElement& e) {
  return {mesh.nodes.at(e.vertex_ids[0]), mesh.nodes.at(e.vertex_ids[1]),
          mesh.nodes.at(e.vertex_ids[2]), mesh.nodes.at(e.vertex_ids[3])};
}

inline std::array<Point2, 4> element_nodes(const Mesh& mesh, int k) {
  return element_nodes_of(mesh, mesh.elements.at(static_cast<std::size_t>(k)));
}

// Edges incident to exactly one element, i.e. the geometric boundary.
// Returned sorted by (min id, max id) so downstream sampling is
// order-independent of element numbering.
inline std::vector<std::pair<int, int>> boundary_edges(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> incidence;
  for (const auto& e : mesh.elements) {
    for (int i = 0; i < 4; ++i) {
      const int a = e.vertex_ids[i];
      const int b = e.vertex_ids[(i + 1) % 4];
      ++incidence[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [edge, count] : incidence)
    if (count == 1) edges.push_back(edge);
  return edges;
}

// Coefficients of the bilinear map
//   x(xi,eta) = xc0 + xc1*xi + xc2*eta + xc3*xi*eta   (same shape for y)
// expressed in terms of the four vertices.
struct BilinearCoeffs {
  double xc0, xc1, xc2, xc3;
  double yc0, yc1, yc2, yc3;
};

inline BilinearCoeffs bilinear_coeffs(const std::array<Point2, 4>& n) {
  BilinearCoeffs c{};
  c.xc0 = 0.25 * (n[0].x + n[1].x + n[2].x + n[3].x);
  c.xc1 = 0.25 * (-n[0].x + n[1].x + n[2].x - n[3].x);
  c.xc2 = 0.25 * (-n[0].x - n[1].x + n[2].x + n[3].x);
  c.xc3 = 0.25 * (n[0].x - n[1].x + n[2].x - n[3].x);
  c.yc0 = 0.25 * (n[0].y + n[1].y + n[2].y + n[3].y);
  c.yc1 = 0.25 * (-n[0].y + n[1].y + n[2].y - n[3].y);
  c.yc2 = 0.25 * (-n[0].y - n[1].y + n[2].y + n[3].y);
  c.yc3 = 0.25 * (n[0].y - n[1].y + n[2].y - n[3].y);
  return c;
}

inline Point2 bilinear_map(const std::array<Point2, 4>& nodes, double xi,
                           double eta) {
  const BilinearCoeffs c = bilinear_coeffs(nodes);
  return {c.xc0 + c.xc1 * xi + c.xc2 * eta + c.xc3 * xi * eta,
          c.yc0 + c.yc1 * xi + c.yc2 * eta + c.yc3 * xi * eta};
}

// Jacobian entries of the bilinear map at a reference point:
//   j11 = dx/dxi, j12 = dy/dxi, j21 = dx/deta, j22 = dy/deta.
struct JacobianData {
  double j11, j12, j21, j22;
  double det;
};

namespace detail {

inline JacobianData jacobian_at(const BilinearCoeffs& c, double xi,
                                double eta) {
  JacobianData jd{};
  jd.j11 = c.xc1 + c.xc3 * eta;
  jd.j12 = c.yc1 + c.yc3 * eta;
  jd.j21 = c.xc2 + c.xc3 * xi;
  jd.j22 = c.yc2 + c.yc3 * xi;
  jd.det = jd.j11 * jd.j22 - jd.j12 * jd.j21;
  return jd;
}

}  // namespace detail

// Throws DegenerateElementError (id -1; assembly re-tags with the element id)
// when the determinant is not strictly positive.
inline JacobianData bilinear_jacobian(const std::array<Point2, 4>& nodes,
                                      double xi, double eta) {
  const JacobianData jd = detail::jacobian_at(bilinear_coeffs(nodes), xi, eta);
  if (!(jd.det > 0.0))
    throw DegenerateElementError(
        -1, "bilinear_jacobian: non-positive determinant " +
                std::to_string(jd.det));
  return jd;
}

// Pushes a reference-space gradient (d/dxi, d/deta) through the inverse
// Jacobian to a physical-space gradient (d/dx, d/dy).
inline std::pair<double, double> physical_gradient(const JacobianData& jd,
                                                   double d_dxi,
                                                   double d_deta) {
  if (!(jd.det > 0.0))
    throw DegenerateElementError(
        -1, "physical_gradient: non-positive determinant " +
                std::to_string(jd.det));
  const double inv = 1.0 / jd.det;
  return {(jd.j22 * d_dxi - jd.j12 * d_deta) * inv,
          (-jd.j21 * d_dxi + jd.j11 * d_deta) * inv};
}

// Structured nx-by-ny grid of axis-aligned rectangles on
// [x0,x1] x [y0,y1].  Node (i,j) -> id j*(nx+1)+i; element (ex,ey) follows
// the CCW vertex contract with vertex 0 at the lower-left corner.
inline Mesh generate_structured_mesh(int nx, int ny,
                                     std::pair<double, double> x_range,
                                     std::pair<double, double> y_range) {
  if (nx < 1 || ny < 1)
    throw InvalidArgumentError("generate_structured_mesh: nx, ny must be >= 1");
  if (!(x_range.second > x_range.first) || !(y_range.second > y_range.first))
    throw InvalidArgumentError("generate_structured_mesh: empty range");

  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  const double dx = (x_range.second - x_range.first) / nx;
  const double dy = (y_range.second - y_range.first) / ny;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Endpoints are produced exactly at the range bounds.
      const double x = (i == nx) ? x_range.second : x_range.first + i * dx;
      const double y = (j == ny) ? y_range.second : y_range.first + j * dy;
      mesh.nodes.push_back({x, y});
    }
  }
  mesh.elements.reserve(static_cast<std::size_t>(nx) * ny);
  const auto node_id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int ey = 0; ey < ny; ++ey) {
    for (int ex = 0; ex < nx; ++ex) {
      QuadElement e;
      e.vertex_ids = {node_id(ex, ey), node_id(ex + 1, ey),
                      node_id(ex + 1, ey + 1), node_id(ex, ey + 1)};
      mesh.elements.push_back(e);
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i == 0 || i == nx || j == 0 || j == ny)
        mesh.boundary_node_ids.push_back(node_id(i, j));
    }
  }
  return mesh;
}

// Per-element health report.  Orientation uses the shoelace signed area of
// the four vertices; determinant extrema are scanned on a coarse reference
// grid plus the corners (the bilinear determinant is itself bilinear in
// (xi,eta), so the corner values already bound it — the scan is belt and
// braces against future map changes).
struct MeshValidation {
  struct ElementCheck {
    int element_id = 0;
    double min_det = 0.0;
    double max_det = 0.0;
    double signed_area = 0.0;
    bool degenerate = false;
    bool misoriented = false;
  };
  std::vector<ElementCheck> elements;
  std::vector<int> degenerate_element_ids;
  std::vector<int> misoriented_element_ids;
  bool ok() const {
    return degenerate_element_ids.empty() && misoriented_element_ids.empty();
  }
};

inline double signed_area(const std::array<Point2, 4>& n) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2& p = n[i];
    const Point2& q = n[(i + 1) % 4];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

inline MeshValidation validate_mesh(const Mesh& mesh) {
  MeshValidation report;
  report.elements.reserve(mesh.elements.size());
  for (int k = 0; k < mesh.n_elements(); ++k) {
    const auto nodes = element_nodes(mesh, k);
    const BilinearCoeffs c = bilinear_coeffs(nodes);
    MeshValidation::ElementCheck chk;
    chk.element_id = k;
    chk.signed_area = signed_area(nodes);
    chk.min_det = std::numeric_limits<double>::infinity();
    chk.max_det = -std::numeric_limits<double>::infinity();
    for (int iy = 0; iy <= 4; ++iy) {
      for (int ix = 0; ix <= 4; ++ix) {
        const double xi = -1.0 + 0.5 * ix;
        const double eta = -1.0 + 0.5 * iy;
        const double det = detail::jacobian_at(c, xi, eta).det;
        chk.min_det = std::min(chk.min_det, det);
        chk.max_det = std::max(chk.max_det, det);
      }
    }
    chk.degenerate = !(chk.min_det > 0.0);
    chk.misoriented = !(chk.signed_area > 0.0);
    if (chk.degenerate) report.degenerate_element_ids.push_back(k);
    if (chk.misoriented) report.misoriented_element_ids.push_back(k);
    report.elements.push_back(chk);
  }
  return report;
}

}  // namespace vpinn
