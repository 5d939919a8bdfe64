#pragma once

// Multivector-valued fields on R^n and the first-order calculus on them.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cliffop/algebra.hpp"
#include "cliffop/expr.hpp"
#include "cliffop/jet.hpp"

namespace cliffop {

enum class DerivativeMode { exact, finite_difference };

inline constexpr double kDefaultFdStep = 1e-5;

/// Symbolic multivector field: blade -> scalar expression.
using ExprMap = std::map<Blade, ScalarExpr>;

/// Taylor jets of every blade component of a field at one point.
class MultivectorJet {
 public:
  MultivectorJet(Signature sig, int order);

  static MultivectorJet constant(const Multivector& m, int order);
  static MultivectorJet scalar(Signature sig, const Jet& j);

  Signature signature() const noexcept { return sig_; }
  int order() const noexcept { return order_; }

  /// Sorted by blade; zero jets are not stored.
  std::span<const std::pair<Blade, Jet>> terms() const noexcept { return terms_; }
  Jet component(Blade b) const;
  void add(Blade b, const Jet& j);

  Multivector value() const;
  MultivectorJet derivative(int j) const;
  MultivectorJet truncated(int order) const;

  MultivectorJet& operator+=(const MultivectorJet& o);
  MultivectorJet& operator-=(const MultivectorJet& o);
  MultivectorJet& operator*=(Complex s);
  friend MultivectorJet operator+(MultivectorJet a, const MultivectorJet& b) { return a += b; }
  friend MultivectorJet operator-(MultivectorJet a, const MultivectorJet& b) { return a -= b; }
  friend MultivectorJet operator*(MultivectorJet a, Complex s) { return a *= s; }
  friend MultivectorJet operator*(Complex s, MultivectorJet a) { return a *= s; }
  /// Geometric product, truncated to the lower order.
  friend MultivectorJet operator*(const MultivectorJet& a, const MultivectorJet& b);
  friend MultivectorJet operator*(const Multivector& c, const MultivectorJet& a);
  friend MultivectorJet operator*(const MultivectorJet& a, const Multivector& c);
  /// Every component multiplied by the scalar jet s.
  MultivectorJet scaled(const Jet& s) const;
  /// Every component divided by the scalar jet s (s.value() != 0).
  MultivectorJet divided(const Jet& s) const;

 private:
  Signature sig_;
  int order_;
  std::vector<std::pair<Blade, Jet>> terms_;
};

MultivectorJet grade_projection(const MultivectorJet& a, int k);

class FieldNode {
 public:
  explicit FieldNode(Signature sig) : sig_(sig) {}
  virtual ~FieldNode() = default;

  Signature signature() const noexcept { return sig_; }
  /// Jet of the given order at p; p.size() == n and order <= max_order().
  virtual MultivectorJet jet(std::span<const double> p, int order) const = 0;
  virtual int max_order() const = 0;
  virtual DerivativeMode mode() const = 0;
  /// Symbolic form, when every ingredient has one.
  virtual std::optional<ExprMap> expressions() const { return std::nullopt; }

 private:
  Signature sig_;
};

/// Value-semantic handle to an immutable field.
class MultivectorField {
 public:
  using Sampler = std::function<Multivector(std::span<const double>)>;

  /// Throws InvalidArgument when an expression uses a variable beyond n.
  static MultivectorField from_expressions(Signature sig, ExprMap components);
  static MultivectorField scalar(Signature sig, ScalarExpr e);
  static MultivectorField constant(const Multivector& m);
  static MultivectorField zero(Signature sig);
  /// Black-box field whose derivatives (up to order 2) come from central
  /// differences with step h.
  static MultivectorField black_box(Signature sig, Sampler sampler, double h = kDefaultFdStep);
  /// Field given directly by a jet provider.
  static MultivectorField custom(Signature sig, std::function<MultivectorJet(std::span<const double>, int)> provider,
                                 int max_order, DerivativeMode mode);

  explicit MultivectorField(std::shared_ptr<const FieldNode> node);

  Signature signature() const noexcept { return node_->signature(); }
  int dimension() const noexcept { return signature().dimension(); }
  DerivativeMode mode() const { return node_->mode(); }
  int max_order() const { return node_->max_order(); }
  std::optional<ExprMap> expressions() const { return node_->expressions(); }
  const std::shared_ptr<const FieldNode>& node() const noexcept { return node_; }

  Multivector operator()(std::span<const double> p) const;
  /// Throws ModeError when order exceeds max_order().
  MultivectorJet jet(std::span<const double> p, int order) const;

  friend MultivectorField operator+(const MultivectorField& a, const MultivectorField& b);
  friend MultivectorField operator-(const MultivectorField& a, const MultivectorField& b);
  friend MultivectorField operator-(const MultivectorField& a);
  friend MultivectorField operator*(Complex s, const MultivectorField& a);
  friend MultivectorField operator*(const MultivectorField& a, Complex s) { return s * a; }
  /// Pointwise geometric product.
  friend MultivectorField operator*(const MultivectorField& a, const MultivectorField& b);

 private:
  std::shared_ptr<const FieldNode> node_;
};

/// Pointwise sum of c_i F_i.
MultivectorField linear_combine(std::span<const Complex> coeffs, std::span<const MultivectorField> fields);
/// Field-level Dirac operator sum_j e_j d_j F.
MultivectorField dirac_field(const MultivectorField& f);
MultivectorField laplacian_field(const MultivectorField& f);
MultivectorField partial_field(const MultivectorField& f, int j);
MultivectorField grade_field(const MultivectorField& f, int k);
/// F / s for a scalar-valued field s.
MultivectorField divide(const MultivectorField& f, const MultivectorField& s);
/// Coefficient of blade b, as a scalar field.
MultivectorField component_field(const MultivectorField& f, Blade b);
/// sum_j a_j b_j over the 1-vector parts, as a scalar field.
MultivectorField euclidean_inner(const MultivectorField& a, const MultivectorField& b);
/// f(s) for a scalar-valued field s.
MultivectorField apply_function(Function f, const MultivectorField& s);
/// The scalar part of F as a field.
MultivectorField scalar_part(const MultivectorField& f);
/// Pointwise product F(p) * G(p) taken on values only; derivatives of the
/// result come from central differences even when F and G are exact.
MultivectorField sampled_product(const MultivectorField& f, const MultivectorField& g, double h = kDefaultFdStep);

/// sum_j e_j d_j F(p).
Multivector dirac(const MultivectorField& f, std::span<const double> p);
/// Componentwise sum_j d_jj F(p).
Multivector laplacian(const MultivectorField& f, std::span<const double> p);
/// d_j F(p).
Multivector partial(const MultivectorField& f, int j, std::span<const double> p);

/// Throws InvalidArgument unless g is homogeneous of grade k (checked on the
/// symbolic form when there is one, else on the value at p).
void require_grade(const MultivectorField& g, int k, std::span<const double> p);

struct IdentitySides {
  Multivector lhs;
  Multivector rhs;
  Multivector residual() const { return lhs - rhs; }
};

/// d(phi f) against d(phi) f + phi d(f). phi must be scalar-valued.
IdentitySides leibniz_scalar(const MultivectorField& phi, const MultivectorField& f, std::span<const double> p);
Multivector leibniz_residual_scalar(const MultivectorField& phi, const MultivectorField& f, std::span<const double> p);

/// d(G f) against d(G) f + 2 sum_j [e_j G]_{k-1} d_j f + (-1)^k G d(f).
/// Throws InvalidArgument unless G is homogeneous of grade k.
IdentitySides leibniz_kvector(const MultivectorField& g, const MultivectorField& f, int k, std::span<const double> p);
Multivector leibniz_residual_kvector(const MultivectorField& g, const MultivectorField& f, int k,
                                     std::span<const double> p);

/// Parses {"e1": "x2", "e1^e2": "..."}; "1" names the scalar blade.
MultivectorField parse_field(Signature sig, const std::map<std::string, std::string>& components);
/// Rendered components of a field with a symbolic form.
std::map<std::string, std::string> render_field(const MultivectorField& f);

}  // namespace cliffop
