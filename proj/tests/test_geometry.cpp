#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "vpinn/core.hpp"
#include "vpinn/geometry.hpp"

using namespace vpinn;

namespace {
const std::array<Point2, 4> unit_square{
    Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 1}};
const std::array<Point2, 4> wide_rect{
    Point2{0, 0}, Point2{2, 0}, Point2{2, 1}, Point2{0, 1}};
const std::array<Point2, 4> skewed{
    Point2{0, 0}, Point2{1, 0}, Point2{1.5, 1}, Point2{0, 1}};
}  // namespace

TEST_CASE("bilinear map hits vertices and centre") {
  CHECK(bilinear_map(unit_square, -1, -1).x == 0.0);
  CHECK(bilinear_map(unit_square, 1, -1).x == 1.0);
  CHECK(bilinear_map(unit_square, 1, 1).y == 1.0);
  const auto c = bilinear_map(unit_square, 0, 0);
  CHECK_THAT(c.x, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(c.y, Catch::Matchers::WithinAbs(0.5, 1e-15));

  const auto m = bilinear_map(wide_rect, 0, 0);
  CHECK_THAT(m.x, Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(m.y, Catch::Matchers::WithinAbs(0.5, 1e-15));
}

TEST_CASE("jacobian on rectangles") {
  const auto jd = bilinear_jacobian(wide_rect, 0.0, 0.0);
  CHECK_THAT(jd.j11, Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(jd.j12, Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(jd.j21, Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK_THAT(jd.j22, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(jd.det, Catch::Matchers::WithinAbs(0.5, 1e-15));

  // Rectangles have a constant jacobian over the reference square.
  for (double xi : {-0.9, 0.2, 0.8}) {
    for (double eta : {-0.7, 0.0, 0.95}) {
      CHECK_THAT(bilinear_jacobian(wide_rect, xi, eta).det,
                 Catch::Matchers::WithinAbs(0.5, 1e-15));
    }
  }
  CHECK_THAT(bilinear_jacobian(unit_square, 0.3, -0.4).det,
             Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("jacobian on a skewed quad varies with position") {
  // det = 0.5 * (0.625 + 0.125*eta) for this element (hand computation).
  CHECK_THAT(bilinear_jacobian(skewed, 0.0, 0.0).det,
             Catch::Matchers::WithinAbs(0.3125, 1e-15));
  CHECK_THAT(bilinear_jacobian(skewed, 1.0, 1.0).det,
             Catch::Matchers::WithinAbs(0.375, 1e-15));
  CHECK_THAT(bilinear_jacobian(skewed, -1.0, -1.0).det,
             Catch::Matchers::WithinAbs(0.25, 1e-15));
}

TEST_CASE("degenerate and reversed elements are rejected") {
  // Clockwise square: negative determinant everywhere.
  const std::array<Point2, 4> cw{Point2{0, 0}, Point2{0, 1}, Point2{1, 1},
                                 Point2{1, 0}};
  CHECK_THROWS_AS(bilinear_jacobian(cw, 0.0, 0.0), DegenerateElementError);

  // Collapsed edge: zero determinant at some reference points.
  const std::array<Point2, 4> pinched{Point2{0, 0}, Point2{1, 0}, Point2{1, 0},
                                      Point2{0, 1}};
  CHECK_THROWS_AS(bilinear_jacobian(pinched, 1.0, 1.0),
                  DegenerateElementError);
}

TEST_CASE("physical gradient inverts the jacobian") {
  // Unit square: d/dxi = 0.5 * d/dx, so a reference gradient (1,0) maps to
  // (2,0) in physical space.
  const auto jd = bilinear_jacobian(unit_square, 0.0, 0.0);
  const auto [gx, gy] = physical_gradient(jd, 1.0, 0.0);
  CHECK_THAT(gx, Catch::Matchers::WithinAbs(2.0, 1e-15));
  CHECK_THAT(gy, Catch::Matchers::WithinAbs(0.0, 1e-15));

  JacobianData bad{1, 0, 0, 1, -1.0};
  CHECK_THROWS_AS(physical_gradient(bad, 1, 0), DegenerateElementError);
}

TEST_CASE("physical gradient composite identity on a skewed quad") {
  // F(x,y) = sin(x) cos(2y).  Differentiate F(map(xi,eta)) in reference
  // coordinates by finite differences, push through physical_gradient, and
  // compare with the analytic gradient at the mapped point.
  const auto F = [](Point2 p) { return std::sin(p.x) * std::cos(2.0 * p.y); };
  const double h = 1e-6;
  for (double xi : {-0.6, 0.0, 0.7}) {
    for (double eta : {-0.5, 0.3, 0.9}) {
      const double d_dxi =
          (F(bilinear_map(skewed, xi + h, eta)) -
           F(bilinear_map(skewed, xi - h, eta))) /
          (2 * h);
      const double d_deta =
          (F(bilinear_map(skewed, xi, eta + h)) -
           F(bilinear_map(skewed, xi, eta - h))) /
          (2 * h);
      const auto jd = bilinear_jacobian(skewed, xi, eta);
      const auto [gx, gy] = physical_gradient(jd, d_dxi, d_deta);
      const Point2 p = bilinear_map(skewed, xi, eta);
      CHECK_THAT(gx, Catch::Matchers::WithinAbs(
                         std::cos(p.x) * std::cos(2.0 * p.y), 1e-5));
      CHECK_THAT(gy, Catch::Matchers::WithinAbs(
                         -2.0 * std::sin(p.x) * std::sin(2.0 * p.y), 1e-5));
    }
  }
}

TEST_CASE("structured mesh generation") {
  const auto mesh = generate_structured_mesh(2, 2, {0.0, 1.0}, {0.0, 1.0});
  REQUIRE(mesh.n_nodes() == 9);
  REQUIRE(mesh.n_elements() == 4);
  REQUIRE(mesh.boundary_node_ids.size() == 8);

  // Exact endpoints.
  CHECK(mesh.nodes[0].x == 0.0);
  CHECK(mesh.nodes[8].x == 1.0);
  CHECK(mesh.nodes[8].y == 1.0);

  // Element 0 is the lower-left cell with CCW ordering from its lower-left
  // corner.
  const auto n0 = element_nodes(mesh, 0);
  CHECK(n0[0].x == 0.0);
  CHECK(n0[0].y == 0.0);
  CHECK(n0[1].x == 0.5);
  CHECK(n0[2].y == 0.5);
  CHECK(signed_area(n0) > 0.0);

  const auto report = validate_mesh(mesh);
  CHECK(report.ok());
  for (const auto& e : report.elements) {
    CHECK_THAT(e.min_det, Catch::Matchers::WithinAbs(0.0625, 1e-15));
    CHECK_THAT(e.max_det, Catch::Matchers::WithinAbs(0.0625, 1e-15));
    CHECK_THAT(e.signed_area, Catch::Matchers::WithinAbs(0.25, 1e-15));
  }

  CHECK_THROWS_AS(generate_structured_mesh(0, 2, {0., 1.}, {0., 1.}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(generate_structured_mesh(2, 2, {1., 0.}, {0., 1.}),
                  InvalidArgumentError);
}

TEST_CASE("validate_mesh flags degenerate and misoriented elements") {
  Mesh mesh = generate_structured_mesh(2, 1, {0.0, 2.0}, {0.0, 1.0});
  // Reverse the second element.
  std::swap(mesh.elements[1].vertex_ids[1], mesh.elements[1].vertex_ids[3]);
  const auto report = validate_mesh(mesh);
  CHECK(!report.ok());
  REQUIRE(report.misoriented_element_ids.size() == 1);
  CHECK(report.misoriented_element_ids[0] == 1);
  REQUIRE(report.degenerate_element_ids.size() == 1);
  CHECK(report.elements[0].degenerate == false);
  CHECK(report.elements[1].degenerate == true);
}

TEST_CASE("boundary edges of a structured mesh") {
  const auto mesh = generate_structured_mesh(3, 2, {0.0, 1.0}, {0.0, 1.0});
  const auto edges = boundary_edges(mesh);
  // Perimeter has 2*(3+2) = 10 edges.
  CHECK(edges.size() == 10);
  for (const auto& [a, b] : edges) {
    CHECK(a < b);  // canonical ordering
  }
}
