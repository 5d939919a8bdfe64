#pragma once

// Randomized pointwise identity suites behind `verify-identities`.

#include <cstdint>

#include "cliffop/riccati.hpp"

namespace cliffop::cli {

/// Algebra laws (tolerance 1e-12), Leibniz rules, closed forms of the
/// factorized compositions and the A/B squares, each sampled at `trials`
/// random points of [-1, 1]^n with fresh random inputs.
Verification identity_suite(int n, std::uint64_t seed, int trials, const ResidualOptions& opts);

}  // namespace cliffop::cli
