#pragma once

// Factorized operators d^f = d + M^f and d^-f = d - M^f, where M^f is right
// multiplication by f, and the eigenvalue problems they generate.

#include "cliffop/field.hpp"
#include "cliffop/grid.hpp"
#include "cliffop/riccati.hpp"

namespace cliffop {

enum class OperatorSign { plus, minus };

/// Nonzero spectral parameter; lambda^2 is the eigenvalue.
class SpectralParam {
 public:
  /// Throws InvalidArgument for lambda == 0.
  explicit SpectralParam(Complex lambda);
  Complex value() const noexcept { return lambda_; }
  Complex squared() const noexcept { return lambda_ * lambda_; }

 private:
  Complex lambda_;
};

struct FactorizedOperator {
  MultivectorField f;
  OperatorSign sign = OperatorSign::plus;

  /// d g(p) +- g(p) f(p).
  Multivector apply(const MultivectorField& g, std::span<const double> p) const;
  MultivectorField apply_field(const MultivectorField& g) const;
};

/// (-lap - v) phi - lambda^2 phi for a scalar potential v.
ResidualReport scalar_schrodinger_residual(const MultivectorField& v, const MultivectorField& phi, SpectralParam lambda,
                                           const GridSpec& grid, const ResidualOptions& opts = {});

/// d^f d^-f g - lambda^2 g at p.
Sample schrodinger_sample(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                          std::span<const double> p);
ResidualReport gen_schrodinger_residual(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                                        const GridSpec& grid, const ResidualOptions& opts = {});

/// Preconditions: the candidate solves the Riccati equation. Conclusions: the
/// factorized eigenvalue residual of g and, for scalar g, its agreement with
/// (-lap - v) g.
Verification gen_schrodinger_check(const RiccatiCandidate& c, const MultivectorField& g, SpectralParam lambda,
                                   const GridSpec& grid, const ResidualOptions& opts = {});

struct TransformResult {
  MultivectorField output;
  Verification verification;
};

/// h = d^-f g, checked against d^-f d^f h = lambda^2 h. Throws
/// PreconditionError unless d^f d^-f g = lambda^2 g on the grid.
TransformResult darboux_transform(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                                  const GridSpec& grid, const ResidualOptions& opts = {});

enum class ClosedForm {
  /// d^f d^-f G = -lap G + G((-1)^(k+1) df - f^2) - 2 sum_j [e_j G]_{k-1} d_j f
  plus_minus,
  /// d^-f d^f G = -lap G - G((-1)^(k+1) df + f^2) + 2 sum_j [e_j G]_{k-1} d_j f
  minus_plus,
  /// d^-f d^f phi = -lap phi + phi (df - f^2), scalar phi
  scalar_minus_plus,
};

/// lhs is the operator composition, rhs the closed form. f must be a 1-vector
/// field and G homogeneous of grade k (k = 0 for scalar_minus_plus).
IdentitySides closed_form_sides(const MultivectorField& f, const MultivectorField& G, int k, ClosedForm which,
                                std::span<const double> p);
ResidualReport closed_form_residual(const MultivectorField& f, const MultivectorField& G, int k, ClosedForm which,
                                    const GridSpec& grid, const ResidualOptions& opts = {});

/// Scalar eigenfunction phi of -lap - v to the 1-vector h = d phi - phi f,
/// checked against -lap h - v h - 2 sum_j h_j d_j f = lambda^2 h.
TransformResult vector_transform(const RiccatiCandidate& c, const MultivectorField& phi, SpectralParam lambda,
                                 const GridSpec& grid, const ResidualOptions& opts = {});

/// 1-vector g with -lap g + g u + 2 sum_j g_j d_j f = lambda^2 g, u = df - f^2,
/// to phi + H2 = [d^-f g]_0 + [d^-f g]_2.
TransformResult even_transform(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                               const GridSpec& grid, const ResidualOptions& opts = {});

/// Grade-k G with -lap G + G w - 2 sum_j [e_j G]_{k-1} d_j f = lambda^2 G,
/// w = (-1)^(k+1) df - f^2, to H = [d^-f G]_{k-1} + [d^-f G]_{k+1}.
TransformResult grade_pair_transform(const MultivectorField& f, const MultivectorField& G, int k, SpectralParam lambda,
                                     const GridSpec& grid, const ResidualOptions& opts = {});

}  // namespace cliffop
