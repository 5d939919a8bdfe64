#pragma once

// Truncated multivariate Taylor series ("jets") used for exact forward-mode
// differentiation. A jet of order K in n variables stores the coefficients
// c_alpha = (d^alpha F)(p) / alpha! for every multi-index with |alpha| <= K.
// Monomials are enumerated by total degree first, so the jet of order K-1 is
// a prefix of the jet of order K.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cliffop/algebra.hpp"

namespace cliffop {

inline constexpr int kMaxJetOrder = 6;

class TaylorLayout {
 public:
  struct MulEntry {
    std::uint32_t lhs;
    std::uint32_t rhs;
  };
  struct DerivEntry {
    std::uint32_t from;
    std::uint32_t to;
    double factor;
  };

  /// Shared, immutable layout; safe to call from several threads.
  static const TaylorLayout& get(int n, int order);

  int variables() const noexcept { return n_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  /// Number of monomials of degree <= d.
  std::size_t prefix(int d) const;

  std::span<const std::uint8_t> exponent(std::size_t idx) const;
  int degree(std::size_t idx) const noexcept { return degree_[idx]; }
  /// Index of x_j (1-based) or of x_j x_k; requires order >= 1 resp. 2.
  std::size_t unit_index(int j) const { return static_cast<std::size_t>(j); }
  std::size_t pair_index(int j, int k) const;

  /// All (lhs, rhs) with alpha_lhs + alpha_rhs = alpha_target.
  std::span<const MulEntry> products_into(std::size_t target) const;
  /// d/dx_j: coefficient `to` of the derivative = factor * coefficient `from`.
  std::span<const DerivEntry> derivative(int j) const;

 private:
  TaylorLayout(int n, int order);
  std::size_t index_of(std::span<const std::uint8_t> alpha) const;

  int n_;
  int order_;
  std::vector<std::vector<std::uint8_t>> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> mul_offsets_;
  std::vector<MulEntry> mul_;
  std::vector<std::vector<DerivEntry>> deriv_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

class Jet {
 public:
  Jet(int n, int order);

  static Jet constant(int n, int order, Complex value);
  /// The coordinate function x_j around the point with x_j = value.
  static Jet variable(int n, int order, int j, double value);

  const TaylorLayout& layout() const noexcept { return *layout_; }
  int order() const noexcept { return layout_->order(); }
  int variables() const noexcept { return layout_->variables(); }

  Complex value() const noexcept { return c_[0]; }
  std::span<const Complex> coefficients() const noexcept { return c_; }
  std::span<Complex> coefficients() noexcept { return c_; }
  Complex operator[](std::size_t idx) const { return c_[idx]; }
  Complex& operator[](std::size_t idx) { return c_[idx]; }
  bool is_zero() const noexcept;

  /// First partial d/dx_j at the expansion point (order >= 1).
  Complex partial(int j) const;
  /// Second partial d^2/dx_j dx_k at the expansion point (order >= 2).
  Complex second_partial(int j, int k) const;

  /// Same series cut to a lower order.
  Jet truncated(int order) const;
  /// d/dx_j; the result has order - 1.
  Jet derivative(int j) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(Complex s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, Complex s) { return a *= s; }
  friend Jet operator*(Complex s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  /// Throws std::domain_error when b.value() == 0.
  friend Jet operator/(const Jet& a, const Jet& b);

  /// g(u) for a univariate g given by its Taylor coefficients
  /// d_m = g^(m)(u0) / m!, m = 0..order, around u0 = value().
  Jet compose(std::span<const Complex> taylor) const;

  Jet pow(int exponent) const;

 private:
  const TaylorLayout* layout_;
  std::vector<Complex> c_;
};

/// Value, gradient and full Hessian of a scalar function at a point.
struct Jet2 {
  Complex value;
  std::vector<Complex> gradient;              // n entries
  std::vector<std::vector<Complex>> hessian;  // n x n, symmetric

  Complex laplacian() const;
  static Jet2 from_jet(const Jet& jet);
};

}  // namespace cliffop
