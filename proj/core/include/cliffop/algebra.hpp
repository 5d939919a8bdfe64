#pragma once

// Complexified Clifford algebra C_n = R_{0,n} (x) C with generators
// e_1..e_n, e_j e_k + e_k e_j = -2 delta_jk.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cliffop {

using Complex = std::complex<double>;

/// Upper bound on n; a multivector has up to 2^n components.
inline constexpr int kMaxDimension = 12;

class Signature {
 public:
  /// Throws InvalidArgument unless 1 <= n <= kMaxDimension.
  explicit Signature(int n);

  int dimension() const noexcept { return n_; }
  std::uint32_t full_mask() const noexcept { return (std::uint32_t{1} << n_) - 1; }

  friend bool operator==(Signature, Signature) = default;

 private:
  int n_;
};

/// Basis blade e_A stored as a bitmask; bit j-1 set <=> e_j is a factor.
/// The factors are always read in increasing index order.
struct Blade {
  std::uint32_t mask = 0;

  static Blade basis(int j);  // e_j, 1-based
  static Blade from_indices(std::initializer_list<int> indices);

  int grade() const noexcept;
  bool contains(int j) const noexcept { return (mask >> (j - 1)) & 1u; }

  /// "1" for the identity blade, otherwise "e1^e3^e4".
  std::string name() const;

  friend auto operator<=>(Blade, Blade) = default;
};

/// Parses a blade name produced by Blade::name(); indices must be strictly
/// increasing and at most n.
Blade parse_blade(std::string_view name, Signature sig);

/// Sign of e_A e_B relative to e_{A xor B}: transposition parity times one
/// factor -1 per shared generator.
int blade_product_sign(Blade a, Blade b) noexcept;

class Multivector {
 public:
  struct Term {
    Blade blade;
    Complex coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit Multivector(Signature sig) : sig_(sig) {}

  static Multivector scalar(Signature sig, Complex value);
  static Multivector basis(Signature sig, int j);
  static Multivector blade(Signature sig, Blade b, Complex coeff = 1.0);
  /// sum_j components[j-1] e_j; components.size() must equal n.
  static Multivector vector(Signature sig, std::span<const Complex> components);
  static Multivector vector(Signature sig, std::span<const double> components);
  /// Arbitrary term list; duplicates are summed, exact zeros dropped.
  static Multivector from_terms(Signature sig, std::vector<Term> terms);

  Signature signature() const noexcept { return sig_; }
  int dimension() const noexcept { return sig_.dimension(); }

  /// Sorted by blade mask; no coefficient is exactly zero.
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(Blade b) const;
  Complex scalar_part() const { return coefficient(Blade{}); }

  /// Coefficient of e_j.
  Complex component(int j) const { return coefficient(Blade::basis(j)); }

  /// Distinct grades with a nonzero term, ascending.
  std::vector<int> grades() const;

  /// True when every term of grade != k has |coeff| <= tol.
  bool is_homogeneous(int k, double tol = 0.0) const;

  /// Euclidean norm of the coefficient vector.
  double norm() const;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(Complex s);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }
  friend Multivector operator*(Multivector a, Complex s) { return a *= s; }
  friend Multivector operator*(Complex s, Multivector a) { return a *= s; }
  friend Multivector operator*(const Multivector& a, const Multivector& b);

  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.sig_ == b.sig_ && a.terms_ == b.terms_;
  }

 private:
  Signature sig_;
  std::vector<Term> terms_;
};

Multivector geometric_product(const Multivector& a, const Multivector& b);

/// [a]_k; zero for k outside [0, n].
Multivector grade_projection(const Multivector& a, int k);

/// Anti-involution with conj(e_j) = -e_j and conj(i) = -i.
Multivector conjugate(const Multivector& a);

/// Returns (x . y, x ^ y) for pure 1-vectors; x . y = -sum x_j y_j.
std::pair<Complex, Multivector> dot_and_wedge(const Multivector& x, const Multivector& y);

/// <x, y> = sum_j x_j y_j over the 1-vector parts (no conjugation).
Complex euclidean_inner(const Multivector& x, const Multivector& y);

/// e_N = e_1 e_2 ... e_n.
Multivector pseudoscalar(Signature sig);

Multivector linear_combine(std::span<const Complex> coeffs, std::span<const Multivector> terms);

/// "c*e1^e2 + ..." with shortest round-trip numbers; complex coefficients
/// render as "(re+imi)". The zero multivector renders as "0".
std::string render(const Multivector& a);

/// Inverse of render().
Multivector parse_multivector(std::string_view text, Signature sig);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

}  // namespace cliffop
