#pragma once

// Lattice sampling of pointwise identities and residual aggregation.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cliffop/algebra.hpp"
#include "cliffop/errors.hpp"
#include "cliffop/field.hpp"

namespace cliffop {

struct ToleranceDefaults {
  double exact = 1e-9;
  double fd = 1e-4;
  /// Samples with |denominator| below this are masked.
  double exclusion_radius = 1e-6;
};

/// Either eps * (1 + max sampled |LHS|) or a fixed bound.
struct Tolerance {
  enum class Kind { scaled, absolute };
  Kind kind = Kind::scaled;
  double value = 1e-9;

  static Tolerance scaled(double eps) { return {Kind::scaled, eps}; }
  static Tolerance absolute(double bound) { return {Kind::absolute, bound}; }
  static Tolerance for_mode(DerivativeMode mode, const ToleranceDefaults& d = {}) {
    return scaled(mode == DerivativeMode::exact ? d.exact : d.fd);
  }
  double resolve(double max_lhs) const { return kind == Kind::scaled ? value * (1.0 + max_lhs) : value; }
};

struct GridSpec {
  using Predicate = std::function<bool(std::span<const double>)>;

  std::vector<std::pair<double, double>> box;
  int samples_per_axis = 11;
  /// Scalar fields whose near-zero set is masked.
  std::vector<MultivectorField> exclude_near_zero;
  double exclusion_radius = 1e-6;
  /// Extra masks; a point is dropped when any returns true.
  std::vector<Predicate> exclude;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 1;

  static GridSpec cube(int n, double lo = -1.0, double hi = 1.0, int samples = 11);

  int dimension() const noexcept { return static_cast<int>(box.size()); }
  /// Lattice size before masking.
  std::size_t size() const;
  /// Throws InvalidArgument on an empty box, lo >= hi, fewer than two samples
  /// per axis or more than 10^6 lattice points.
  void validate() const;
  std::vector<double> point(std::size_t index) const;
  bool excluded(std::span<const double> p) const;
  /// Lattice points that survive the masks, in lattice order.
  std::vector<std::vector<double>> points() const;

  /// Copy with a mask |s| < radius added.
  GridSpec masking(const MultivectorField& s) const;
};

struct ResidualReport {
  double sup_norm = 0.0;
  double rms = 0.0;
  std::vector<double> worst_point;
  std::size_t samples_used = 0;
  double tolerance = 0.0;
  bool pass = true;
};

enum class Role { precondition, conclusion };

struct NamedReport {
  std::string name;
  Role role = Role::conclusion;
  ResidualReport report;
};

/// Reports of a conditional statement: its hypotheses and its conclusions.
struct Verification {
  std::vector<NamedReport> reports;

  void add(std::string name, Role role, ResidualReport r);
  bool pass() const;
  bool preconditions_pass() const;
  /// Throws InvalidArgument for an unknown name.
  const ResidualReport& get(std::string_view name) const;
  void append(const Verification& other);
};

/// A hypothesis of a conditional statement failed on the grid; the
/// verification carries every report computed so far.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(Verification v);
  const Verification& verification() const noexcept { return v_; }

 private:
  Verification v_;
};

/// One evaluation of an identity: the residual and the size of its LHS.
struct Sample {
  Multivector residual;
  double lhs_magnitude = 0.0;
};

using Identity = std::function<Sample(std::span<const double>)>;

/// Evaluates the identity on every unmasked lattice point. The aggregate is
/// reduced in lattice order, so the report does not depend on threading.
/// Throws SingularityError when every point is masked; evaluation errors
/// propagate from the lowest failing lattice index.
ResidualReport grid_residual(const Identity& identity, const GridSpec& grid, Tolerance tol);

/// Convenience form for a residual with no natural LHS scale.
ResidualReport grid_residual(const std::function<Multivector(std::span<const double>)>& residual, const GridSpec& grid,
                             Tolerance tol);

/// Aggregates residual norms taken at `points` (same order). NaN norms make
/// the report fail with an infinite sup.
ResidualReport summarize(std::span<const double> residual_norms, std::span<const double> lhs_magnitudes,
                         const std::vector<std::vector<double>>& points, Tolerance tol);

/// Sample from the two sides of an identity.
Sample compare(const Multivector& lhs, const Multivector& rhs);

/// Evaluates f on every unmasked point, in parallel when grid.threads != 1,
/// returning values in lattice order.
template <class T>
std::vector<T> grid_map(const std::function<T(std::span<const double>)>& f, const GridSpec& grid);
/// Same over explicit points; threads as in GridSpec::threads.
template <class T>
std::vector<T> grid_map(const std::function<T(std::span<const double>)>& f,
                        const std::vector<std::vector<double>>& points, int threads);

}  // namespace cliffop

#include "cliffop/detail/grid_map.hpp"
