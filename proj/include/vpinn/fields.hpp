#pragma once

// Built-in library of named analytic fields: manufactured solutions, their
// forcings, boundary data, and coefficient fields.  Configs reference these
// by name; there is no runtime expression parser.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "vpinn/assembly.hpp"
#include "vpinn/core.hpp"

namespace vpinn {

struct FieldEntry {
  ScalarField2D fn;
  std::string note;
};

namespace detail {

// u = -sin(w x) sin(w y); with eps = 1 the matching forcing is
// f = -lap(u) = -2 w^2 sin(w x) sin(w y).
inline ScalarField2D sine_u(double w) {
  return [w](double x, double y) {
    return -std::sin(w * x) * std::sin(w * y);
  };
}
inline ScalarField2D sine_f(double w) {
  return [w](double x, double y) {
    return -2.0 * w * w * std::sin(w * x) * std::sin(w * y);
  };
}

}  // namespace detail

inline const std::map<std::string, FieldEntry>& field_library() {
  static const std::map<std::string, FieldEntry> lib = [] {
    std::map<std::string, FieldEntry> m;
    m["zero"] = {[](double, double) { return 0.0; }, "constant 0"};
    m["one"] = {[](double, double) { return 1.0; }, "constant 1"};

    const double two_pi = 2.0 * M_PI;
    m["sin2pi_u"] = {detail::sine_u(two_pi),
                     "u = -sin(2 pi x) sin(2 pi y)"};
    m["sin2pi_f"] = {detail::sine_f(two_pi),
                     "forcing for sin2pi_u with eps = 1"};
    m["sin4pi_u"] = {detail::sine_u(2.0 * two_pi),
                     "u = -sin(4 pi x) sin(4 pi y)"};
    m["sin4pi_f"] = {detail::sine_f(2.0 * two_pi),
                     "forcing for sin4pi_u with eps = 1"};
    m["sin8pi_u"] = {detail::sine_u(4.0 * two_pi),
                     "u = -sin(8 pi x) sin(8 pi y)"};
    m["sin8pi_f"] = {detail::sine_f(4.0 * two_pi),
                     "forcing for sin8pi_u with eps = 1"};

    m["gear_f"] = {[](double x, double) {
                     return 50.0 * std::sin(x) + std::cos(x);
                   },
                   "convection-diffusion forcing used on the gear-like mesh"};

    // Constant-coefficient inverse problem on (-1,1)^2:
    // u = 10 sin(x) tanh(x) exp(-0.3 x^2), manufactured for eps = 0.3.
    m["bump_u"] = {[](double x, double) {
                     return 10.0 * std::sin(x) * std::tanh(x) *
                            std::exp(-0.3 * x * x);
                   },
                   "u = 10 sin(x) tanh(x) exp(-0.3 x^2)"};
    // f = -0.3 lap(u), symbolically reduced; valid only with eps = 0.3.
    m["bump_f"] = {
        [](double x, double) {
          const double s = std::sin(x), c = std::cos(x);
          const double sh2 = std::sinh(2.0 * x), ch = std::cosh(x);
          const double t = std::tanh(x);
          const double num = -9.0 * x * x * s * sh2 + 60.0 * x * s +
                             30.0 * x * c * sh2 + 40.0 * s * sh2 +
                             100.0 * s * t - 100.0 * c;
          return 3.0 * num * std::exp(-0.3 * x * x) / (50.0 * ch * ch);
        },
        "forcing for bump_u, manufactured with eps = 0.3"};

    // Spatially varying coefficient check problem:
    // u = sin(pi x) sin(pi y), eps = 0.5 (sin x + cos y), b = (1, 0),
    // f = -div(eps grad u) + du/dx.
    m["sinpi_u"] = {[](double x, double y) {
                      return std::sin(M_PI * x) * std::sin(M_PI * y);
                    },
                    "u = sin(pi x) sin(pi y)"};
    m["sincos_eps"] = {[](double x, double y) {
                         return 0.5 * (std::sin(x) + std::cos(y));
                       },
                       "eps(x, y) = 0.5 (sin x + cos y)"};
    m["sinpi_vareps_f"] = {
        [](double x, double y) {
          const double sx = std::sin(M_PI * x), cx = std::cos(M_PI * x);
          const double sy = std::sin(M_PI * y), cy = std::cos(M_PI * y);
          return 0.5 * M_PI *
                 (2.0 * M_PI * (std::sin(x) + std::cos(y)) * sx * sy +
                  std::sin(y) * sx * cy - sy * std::cos(x) * cx +
                  2.0 * sy * cx);
        },
        "forcing for sinpi_u with eps = sincos_eps and b = (1, 0)"};
    return m;
  }();
  return lib;
}

inline std::vector<std::string> field_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : field_library()) names.push_back(k);
  return names;
}

inline const ScalarField2D& lookup_field(const std::string& name) {
  const auto& lib = field_library();
  const auto it = lib.find(name);
  if (it == lib.end()) {
    std::string msg = "unknown field '" + name + "'; available:";
    for (const auto& [k, v] : lib) msg += " " + k;
    throw ConfigError(msg);
  }
  return it->second.fn;
}

}  // namespace vpinn
