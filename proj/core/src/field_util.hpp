#pragma once

#include <algorithm>
#include <initializer_list>

#include "cliffop/field.hpp"
#include "cliffop/grid.hpp"

namespace cliffop::detail {

// Step for differencing a field that is itself built from finite differences.
inline constexpr double kNestedFdStep = 5e-3;

/// h itself when it has jets of the given order, else a sampled copy.
inline MultivectorField smooth(const MultivectorField& h, int order) {
  if (h.max_order() >= order) return h;
  return MultivectorField::black_box(
      h.signature(), [h](std::span<const double> p) { return h(p); }, kNestedFdStep);
}

inline DerivativeMode mode_of(std::initializer_list<const MultivectorField*> fields) {
  for (const auto* f : fields) {
    if (f->mode() == DerivativeMode::finite_difference) return DerivativeMode::finite_difference;
  }
  return DerivativeMode::exact;
}

inline double largest(std::initializer_list<Multivector> terms) {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, t.norm());
  return m;
}

/// Residual of u - [u]_0 for a field expected to be scalar-valued.
inline ResidualReport scalar_check(const MultivectorField& u, const GridSpec& grid, Tolerance tol) {
  return grid_residual(
      [&u](std::span<const double> p) {
        const Multivector v = u(p);
        return Sample{v - grade_projection(v, 0), v.norm()};
      },
      grid, tol);
}

inline void require_preconditions(const Verification& v) {
  if (!v.preconditions_pass()) throw PreconditionError(v);
}

}  // namespace cliffop::detail
