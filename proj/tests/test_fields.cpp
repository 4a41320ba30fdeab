#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vpinn/fields.hpp"

using namespace vpinn;

namespace {

// 5-point central second derivative along one axis
double fd_lap(const ScalarField2D& u, double x, double y, double h = 1e-4) {
  const double uxx =
      (u(x + h, y) - 2.0 * u(x, y) + u(x - h, y)) / (h * h);
  const double uyy =
      (u(x, y + h) - 2.0 * u(x, y) + u(x, y - h)) / (h * h);
  return uxx + uyy;
}

double fd_dx(const ScalarField2D& u, double x, double y, double h = 1e-6) {
  return (u(x + h, y) - u(x - h, y)) / (2.0 * h);
}

double fd_dy(const ScalarField2D& u, double x, double y, double h = 1e-6) {
  return (u(x, y + h) - u(x, y - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("constant fields") {
  CHECK(lookup_field("zero")(0.3, -7.0) == 0.0);
  CHECK(lookup_field("one")(-2.0, 5.5) == 1.0);
}

TEST_CASE("unknown field names are config errors listing the library") {
  try {
    lookup_field("sin2pi_uu");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sin2pi_uu") != std::string::npos);
    CHECK(msg.find("sin2pi_u") != std::string::npos);  // suggestions listed
    CHECK(e.category() == ErrorCategory::config);
  }
  CHECK(field_names().size() >= 12);
}

TEST_CASE("sine family: forcing is the negative laplacian of the solution") {
  for (const auto& [uname, fname] :
       {std::pair{"sin2pi_u", "sin2pi_f"}, {"sin4pi_u", "sin4pi_f"},
        {"sin8pi_u", "sin8pi_f"}}) {
    const auto& u = lookup_field(uname);
    const auto& f = lookup_field(fname);
    for (auto [x, y] : {std::pair{0.17, 0.39}, {0.71, 0.05}, {0.5, 0.25}}) {
      CAPTURE(uname, x, y);
      // f = -lap u for eps = 1 (FD h tuned for the 8pi frequency)
      CHECK_THAT(f(x, y),
                 Catch::Matchers::WithinAbs(-fd_lap(u, x, y, 2e-5), 5e-3));
    }
    // boundary trace vanishes on the unit square's edges
    CHECK_THAT(u(0.0, 0.37), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(u(1.0, 0.37), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(u(0.42, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(u(0.42, 1.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("gear forcing matches its closed form") {
  const auto& f = lookup_field("gear_f");
  CHECK_THAT(f(0.0, 9.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(f(0.7, -3.0),
             Catch::Matchers::WithinRel(
                 50.0 * std::sin(0.7) + std::cos(0.7), 1e-15));
}

TEST_CASE("bump fields match independently derived values") {
  const auto& u = lookup_field("bump_u");
  const auto& f = lookup_field("bump_f");

  // frozen values from a symbolic derivation of u and f = -0.3 lap(u)
  CHECK_THAT(u(0.3, -0.7),
             Catch::Matchers::WithinRel(0.83795465658142076, 1e-14));
  CHECK_THAT(u(-0.9, 0.4),
             Catch::Matchers::WithinRel(4.4005113640348021, 1e-14));
  CHECK_THAT(u(0.123, 0.456),
             Catch::Matchers::WithinRel(0.14947240275824694, 1e-14));
  CHECK_THAT(u(0.5, 0.5),
             Catch::Matchers::WithinRel(2.0554228099169483, 1e-14));

  CHECK_THAT(f(0.3, -0.7),
             Catch::Matchers::WithinRel(-3.6748120922657339, 1e-13));
  CHECK_THAT(f(-0.9, 0.4),
             Catch::Matchers::WithinRel(3.6892444093997918, 1e-13));
  CHECK_THAT(f(0.123, 0.456),
             Catch::Matchers::WithinRel(-5.5722692578450213, 1e-13));
  CHECK_THAT(f(0.5, 0.5),
             Catch::Matchers::WithinRel(-0.63394844031749031, 1e-13));

  // cross-check the frozen form against a finite-difference laplacian
  for (double x : {-0.8, -0.2, 0.33, 0.9}) {
    CAPTURE(x);
    CHECK_THAT(f(x, 0.1),
               Catch::Matchers::WithinAbs(-0.3 * fd_lap(u, x, 0.1), 5e-5));
  }
}

TEST_CASE("variable-coefficient forcing satisfies its manufactured pde") {
  const auto& u = lookup_field("sinpi_u");
  const auto& eps = lookup_field("sincos_eps");
  const auto& f = lookup_field("sinpi_vareps_f");

  CHECK_THAT(f(0.3, -0.7),
             Catch::Matchers::WithinRel(-7.1487815397273984, 1e-13));
  CHECK_THAT(f(-0.9, 0.4),
             Catch::Matchers::WithinRel(-2.4163385481941435, 1e-13));
  CHECK_THAT(f(0.123, 0.456),
             Catch::Matchers::WithinRel(5.2475576570710274, 1e-13));
  CHECK_THAT(f(0.5, 0.5),
             Catch::Matchers::WithinRel(13.393133120955175, 1e-13));

  // f = -div(eps grad u) + du/dx, checked by nested finite differences of
  // the flux components
  auto flux_x = [&](double x, double y) { return eps(x, y) * fd_dx(u, x, y); };
  auto flux_y = [&](double x, double y) { return eps(x, y) * fd_dy(u, x, y); };
  for (auto [x, y] : {std::pair{0.21, 0.64}, {0.77, 0.13}, {0.4, 0.9}}) {
    const double h = 1e-4;
    const double div_flux =
        (flux_x(x + h, y) - flux_x(x - h, y)) / (2.0 * h) +
        (flux_y(x, y + h) - flux_y(x, y - h)) / (2.0 * h);
    CAPTURE(x, y);
    CHECK_THAT(f(x, y),
               Catch::Matchers::WithinAbs(-div_flux + fd_dx(u, x, y), 1e-4));
  }

  // the coefficient stays strictly positive on the unit square
  for (double x : {0.0, 0.5, 1.0})
    for (double y : {0.0, 0.5, 1.0}) CHECK(eps(x, y) > 0.0);
}
