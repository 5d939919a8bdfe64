#pragma once

// Deterministic random expressions and fields for randomized identity checks.
// Everything is driven by a std::mt19937_64 and avoids distribution classes
// whose output differs between standard libraries.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "cliffop/expr.hpp"
#include "cliffop/field.hpp"

namespace cliffop {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  /// Dyadic value in [lo, hi] on a grid of 1/16, so literals print exactly.
  double dyadic(double lo, double hi) { return std::round(uniform(lo, hi) * 16.0) / 16.0; }

 private:
  std::mt19937_64 engine_;
};

/// Smooth expression, finite on all of R^n (no log, no bare division).
ScalarExpr random_smooth(Rng& rng, int n, int depth = 3);
/// exp of a smooth expression; never vanishes.
ScalarExpr random_positive(Rng& rng, int n, int depth = 2);
/// Random harmonic polynomial of degree <= 3 (sum of real parts of (x_a + i x_b)^m
/// and linear terms).
ScalarExpr random_harmonic(Rng& rng, int n);

/// Random symbolic field; restricted to grade k when given.
MultivectorField random_field(Rng& rng, Signature sig, std::optional<int> grade = std::nullopt, int depth = 2,
                              double density = 0.5);

/// Random constant multivector with complex coefficients.
Multivector random_multivector(Rng& rng, Signature sig, double density = 0.6);

}  // namespace cliffop
