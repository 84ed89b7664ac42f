#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace minmax_lab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when an instance breaks a promise the problem
/// statements assume (e.g. an empty feasible slice K_1(y)).
class PromiseViolation : public std::runtime_error {
 public:
  explicit PromiseViolation(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleSet : public std::runtime_error {
 public:
  explicit InfeasibleSet(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic RNG. mt19937_64 output is pinned by the standard, and the
/// double derivation below avoids distribution objects whose streams are
/// implementation-defined, so instances are byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

inline void require_dim(const Vec& v, Eigen::Index d, const char* name) {
  if (v.size() != d) {
    throw DimensionMismatch(std::string(name) + ": expected dimension " + std::to_string(d) +
                            ", got " + std::to_string(v.size()));
  }
}

}  // namespace minmax_lab
