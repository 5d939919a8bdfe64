#pragma once

// The Clifford Riccati equation  df + f^2 = v  and its solution constructors.

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cliffop/field.hpp"
#include "cliffop/grid.hpp"

namespace cliffop {

enum class Provenance { log_derivative, separable, euler_shift, euler_combine, homogeneous_sum, user };

std::string_view provenance_name(Provenance p);
/// Throws InvalidArgument for an unknown tag.
Provenance parse_provenance(std::string_view tag);

struct RiccatiCandidate {
  MultivectorField f;
  /// Scalar potential.
  MultivectorField v;
  Provenance provenance = Provenance::user;
  /// Scalar denominators of f; samples where one is near zero are masked.
  std::vector<MultivectorField> singular;
  /// Grades f may occupy; empty when unknown.
  std::vector<int> grade_support;

  /// Throws SignatureMismatch / InvalidArgument when v is not scalar.
  static RiccatiCandidate user(MultivectorField f, MultivectorField v);
  bool is_vector() const { return grade_support == std::vector<int>{1}; }
};

struct ResidualOptions {
  /// Overrides the mode default.
  std::optional<Tolerance> tolerance;
  ToleranceDefaults defaults;
  /// When false, a sample on a singular set raises SingularityError.
  bool mask_singular = true;

  Tolerance resolve(DerivativeMode mode) const { return tolerance ? *tolerance : Tolerance::for_mode(mode, defaults); }
};

/// Grid with the candidate's singular sets masked (or checked, see
/// ResidualOptions::mask_singular).
GridSpec candidate_grid(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts = {});

/// Pointwise df + f^2 - v.
Sample riccati_sample(const RiccatiCandidate& c, std::span<const double> p);
ResidualReport riccati_residual(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts = {});

/// f = d(phi)/phi with v = -lap(phi)/phi; phi must be scalar.
RiccatiCandidate log_derivative(const MultivectorField& phi);

struct VectorSplit {
  /// -div f - <f, f> - v
  ResidualReport scalar;
  /// d ^ f
  ResidualReport bivector;
  /// sup |scalar + bivector - full residual|
  double recombination_error = 0.0;
};

/// Throws InvalidArgument unless the candidate is pure grade 1.
VectorSplit vector_split_residuals(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts = {});

struct SeparableOptions {
  double step = 1e-3;
  double blow_up_bound = 1e6;
};

/// Solution of f' = -v(x) - f^2 on an interval, stored at RK4 nodes and
/// interpolated by quintic Hermite pieces that use f' and f'' from the ODE.
class ScalarRiccatiSolution {
 public:
  struct Node {
    double x;
    double f;
    double df;
    double d2f;
  };

  explicit ScalarRiccatiSolution(std::vector<Node> nodes);

  double lo() const noexcept { return nodes_.front().x; }
  double hi() const noexcept { return nodes_.back().x; }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  double value(double x) const;
  /// f^(m)(x) / m! for m = 0..order (order <= 5). Throws DomainError
  /// outside [lo, hi].
  std::array<double, 6> taylor(double x, int order) const;

 private:
  std::vector<Node> nodes_;
};

/// Integrates f' = -v - f^2 from f(x0) = f0 across [lo, hi] with classical
/// RK4. v(x) and v'(x) come from `potential`. Throws BlowUpError when |f|
/// exceeds the bound.
ScalarRiccatiSolution solve_scalar_riccati(const std::function<std::pair<double, double>(double)>& potential, double x0,
                                           double f0, double lo, double hi, int axis,
                                           const SeparableOptions& opts = {});

/// f = sum_k f_k(x_k) e_k for v = sum_k v_k(x_k). Each v_k may use x_k only.
/// Intervals default to [x0_k - 1, x0_k + 1] when empty.
RiccatiCandidate separable_solve(Signature sig, const std::vector<ScalarExpr>& v_list, const std::vector<double>& x0,
                                 const std::vector<double>& f0, std::vector<std::pair<double, double>> intervals = {},
                                 const SeparableOptions& opts = {});

struct Construction {
  RiccatiCandidate candidate;
  Verification verification;
};

/// f = d(phi1)/phi1 + d(phi2)/phi2 with v = -2 <d(phi1)/phi1, d(phi2)/phi2>.
/// Throws PreconditionError when either input is not harmonic on the grid.
Construction homogeneous_sum(const MultivectorField& phi1, const MultivectorField& phi2, const GridSpec& grid,
                             const ResidualOptions& opts = {});

/// f = d(phi)/phi + h, given lap(phi) + 2 <d(phi), h> = 0 and h solving the
/// equation for v.
Construction euler_shift(const RiccatiCandidate& h, const MultivectorField& phi, const GridSpec& grid,
                         const ResidualOptions& opts = {});

/// f = (alpha g - h) / (alpha - 1), alpha = K exp(phi1 - phi2), g = d(phi1),
/// h = d(phi2); g and h must both solve the equation for v.
Construction euler_combine(const MultivectorField& phi1, const MultivectorField& phi2, Complex K,
                           const MultivectorField& v, const GridSpec& grid, const ResidualOptions& opts = {});

struct FamilyDistance {
  Complex K;
  double distance;
};

struct FamilyGapReport {
  Verification verification;
  std::vector<FamilyDistance> distances;
  double min_distance = 0.0;
  double margin = 0.1;
  bool pass = false;
};

/// e3 solves the equation with v = -1 but stays at distance >= margin from
/// every sampled member of the two-gradient family built from x1 and x2.
FamilyGapReport family_gap_demo(const GridSpec& grid, const std::vector<Complex>& K_samples, double margin = 0.1,
                                const ResidualOptions& opts = {});

}  // namespace cliffop
