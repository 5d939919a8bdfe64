#pragma once

// Scalar expressions over x1..xn with exact forward-mode derivatives.
//
// Grammar (whitespace allowed between tokens):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | 'i' | 'x' digits | func '(' expr ')' | '(' expr ')' | '-' atom
//   func   := exp | log | sin | cos | sqrt
// `integer` may carry a leading '-'. Note that '-' binds tighter than '^':
// "-x1^2" is (-x1)^2.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliffop/algebra.hpp"
#include "cliffop/jet.hpp"

namespace cliffop {

enum class Function { exp, log, sin, cos, sqrt };

std::string_view function_name(Function f);

/// Immutable expression tree; copies share nodes.
class ScalarExpr {
 public:
  enum class Kind { number, imaginary_unit, variable, negate, add, subtract, multiply, divide, power, call };
  struct Node;

  /// The constant 0.
  ScalarExpr();

  Kind kind() const noexcept;
  double number() const;      // Kind::number
  int variable() const;       // Kind::variable, 1-based
  int exponent() const;       // Kind::power
  Function function() const;  // Kind::call
  /// Left child, or the only child of negate / power / call.
  ScalarExpr lhs() const;
  ScalarExpr rhs() const;

  /// Largest variable index used; 0 for constants.
  int max_variable() const noexcept;
  /// Sorted distinct variable indices.
  std::vector<int> variables() const;
  /// Value when the tree has no variables and evaluates without error.
  std::optional<Complex> constant_value() const;
  bool is_constant(Complex c) const;

  /// Structural equality.
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a);

  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const noexcept { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

// Builders. They fold constant subtrees and drop additive zeros and
// multiplicative ones; the parser does not use them, so parsed trees keep
// their exact shape.
ScalarExpr make_constant(Complex value);
ScalarExpr make_variable(int j);
ScalarExpr make_power(const ScalarExpr& base, int exponent);
ScalarExpr make_call(Function f, const ScalarExpr& arg);

/// Throws ParseError (with byte offset) on malformed input or when a
/// variable index exceeds n.
ScalarExpr parse_expression(std::string_view source, int n);

/// Minimal-parenthesis rendering; parse_expression(render(e)) == e for
/// every parsed tree.
std::string render(const ScalarExpr& e);

/// Taylor jet of the given order at p (n = p.size()). Throws DomainError.
Jet evaluate(const ScalarExpr& e, std::span<const double> p, int order);

Complex evaluate_value(const ScalarExpr& e, std::span<const double> p);

/// Value, gradient and Hessian at p.
Jet2 eval_jet(const ScalarExpr& e, std::span<const double> p);

/// f(u) on a jet; throws DomainError for log / sqrt of a non-positive real.
Jet apply_function(Function f, const Jet& u);

/// Symbolic d/dx_j built with the folding builders.
ScalarExpr differentiate(const ScalarExpr& e, int j);

}  // namespace cliffop
