#pragma once

// Shared plumbing: the error taxonomy used across the library (each error maps
// to a process exit category so the CLI can translate failures uniformly), a
// seeded RNG wrapper, and small numeric helpers.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vpinn {

// Exit categories for the command-line front end.  Library code throws typed
// errors; the CLI maps category() straight to the process exit code.
enum class ErrorCategory : int {
  config = 2,
  mesh = 3,
  numeric = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), cat_(cat) {}
  ErrorCategory category() const noexcept { return cat_; }

 private:
  ErrorCategory cat_;
};

// Bad argument values at API boundaries (counts out of range, shape
// mismatches in caller-supplied data, unknown enum names).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& msg)
      : Error(ErrorCategory::config, msg) {}
};

// Config-file problems: unknown keys, missing sections, unresolvable names.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg)
      : Error(ErrorCategory::config, msg) {}
};

// A kernel or code path was requested for a mesh that does not admit it
// (e.g. the regular-grid fast path on a skewed mesh).
class InvalidModeError : public Error {
 public:
  explicit InvalidModeError(const std::string& msg)
      : Error(ErrorCategory::config, msg) {}
};

// Mesh-file problems: unsupported format/version, unsupported element types,
// malformed sections, dangling node references.
class MeshFileError : public Error {
 public:
  explicit MeshFileError(const std::string& msg)
      : Error(ErrorCategory::mesh, msg) {}
};

// An element whose bilinear map folds over (non-positive Jacobian
// determinant somewhere in the reference square).
class DegenerateElementError : public Error {
 public:
  DegenerateElementError(int element_id, const std::string& msg)
      : Error(ErrorCategory::mesh, msg), element_id_(element_id) {}
  int element_id() const noexcept { return element_id_; }

 private:
  int element_id_;
};

// Non-finite values produced while sampling analytic fields during assembly.
class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& msg)
      : Error(ErrorCategory::numeric, msg) {}
};

// Non-finite network outputs.
class NumericOverflowError : public Error {
 public:
  explicit NumericOverflowError(const std::string& msg)
      : Error(ErrorCategory::numeric, msg) {}
};

// Non-finite gradients during optimisation; carries the step at which the
// run died.
class TrainingAbortError : public Error {
 public:
  TrainingAbortError(std::int64_t step, const std::string& msg)
      : Error(ErrorCategory::numeric, msg), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

// Internal consistency failures (mismatched array lengths between stages).
class ContractViolationError : public Error {
 public:
  explicit ContractViolationError(const std::string& msg)
      : Error(ErrorCategory::numeric, msg) {}
};

// Filesystem failures: unwritable output directory, truncated binary files.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

// Deterministic RNG used everywhere a seed appears in an interface.  The
// uniform double is built from the top 53 bits of the generator output so the
// stream is identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // splitmix64 warm-up so that small seeds (0, 1, 2, ...) do not produce
    // correlated early output.
    next_raw();
    next_raw();
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t integer(std::uint64_t n) {
    // Rejection-free scaling is fine here: n is always tiny compared to 2^53.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

 private:
  // splitmix64: tiny, fully deterministic, good enough for sampling points
  // and initialising weights.
  std::uint64_t next_raw() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

inline bool is_finite(double v) { return std::isfinite(v); }

template <typename Derived>
bool all_finite(const Derived& m) {
  return m.allFinite();
}

}  // namespace vpinn
