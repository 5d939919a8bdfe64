#include "cliffop/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>

#include "cliffop/errors.hpp"

namespace cliffop {

Signature::Signature(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension) {
    throw InvalidArgument("dimension n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxDimension) + "]");
  }
}

Blade Blade::basis(int j) {
  if (j < 1 || j > kMaxDimension) throw InvalidArgument("basis index " + std::to_string(j) + " out of range");
  return Blade{std::uint32_t{1} << (j - 1)};
}

Blade Blade::from_indices(std::initializer_list<int> indices) {
  Blade b;
  int last = 0;
  for (int j : indices) {
    if (j <= last) throw InvalidArgument("blade indices must be strictly increasing");
    b.mask |= basis(j).mask;
    last = j;
  }
  return b;
}

int Blade::grade() const noexcept { return std::popcount(mask); }

std::string Blade::name() const {
  if (mask == 0) return "1";
  std::string out;
  for (int j = 1; j <= 32; ++j) {
    if (!((mask >> (j - 1)) & 1u)) continue;
    if (!out.empty()) out += '^';
    out += 'e';
    out += std::to_string(j);
  }
  return out;
}

Blade parse_blade(std::string_view name, Signature sig) {
  if (name == "1") return Blade{};
  Blade b;
  int last = 0;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (name[pos] != 'e') throw ParseError("expected 'e' in blade name '" + std::string(name) + "'", pos);
    ++pos;
    int j = 0;
    auto [ptr, ec] = std::from_chars(name.data() + pos, name.data() + name.size(), j);
    if (ec != std::errc{} || ptr == name.data() + pos) {
      throw ParseError("expected generator index in blade name '" + std::string(name) + "'", pos);
    }
    if (j < 1 || j > sig.dimension()) {
      throw ParseError("generator e" + std::to_string(j) + " out of range for n = " + std::to_string(sig.dimension()),
                       pos);
    }
    if (j <= last) throw ParseError("blade indices must be strictly increasing", pos);
    pos = static_cast<std::size_t>(ptr - name.data());
    b.mask |= Blade::basis(j).mask;
    last = j;
    if (pos < name.size()) {
      if (name[pos] != '^') throw ParseError("expected '^' in blade name '" + std::string(name) + "'", pos);
      ++pos;
      if (pos == name.size()) throw ParseError("dangling '^' in blade name", pos);
    }
  }
  if (last == 0) throw ParseError("empty blade name", 0);
  return b;
}

int blade_product_sign(Blade a, Blade b) noexcept {
  // Count pairs (i in A, j in B) with i > j: each is one transposition.
  std::uint32_t x = a.mask >> 1;
  int swaps = 0;
  while (x != 0) {
    swaps += std::popcount(x & b.mask);
    x >>= 1;
  }
  swaps += std::popcount(a.mask & b.mask);  // e_j^2 = -1
  return (swaps & 1) ? -1 : 1;
}

namespace {

void canonicalize(std::vector<Multivector::Term>& terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& l, const auto& r) { return l.blade.mask < r.blade.mask; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    Multivector::Term acc = terms[i];
    std::size_t j = i + 1;
    for (; j < terms.size() && terms[j].blade == acc.blade; ++j) acc.coeff += terms[j].coeff;
    if (acc.coeff != Complex{}) terms[out++] = acc;
    i = j;
  }
  terms.resize(out);
}

void check_same(Signature a, Signature b) {
  if (a != b) throw SignatureMismatch(a.dimension(), b.dimension());
}

}  // namespace

Multivector Multivector::scalar(Signature sig, Complex value) { return blade(sig, Blade{}, value); }

Multivector Multivector::basis(Signature sig, int j) {
  if (j < 1 || j > sig.dimension()) throw InvalidArgument("basis index out of range");
  return blade(sig, Blade::basis(j));
}

Multivector Multivector::blade(Signature sig, Blade b, Complex coeff) {
  if ((b.mask & ~sig.full_mask()) != 0) throw InvalidArgument("blade " + b.name() + " outside signature");
  Multivector m(sig);
  if (coeff != Complex{}) m.terms_.push_back({b, coeff});
  return m;
}

Multivector Multivector::vector(Signature sig, std::span<const Complex> components) {
  if (static_cast<int>(components.size()) != sig.dimension()) {
    throw InvalidArgument("vector needs exactly n components");
  }
  Multivector m(sig);
  for (int j = 1; j <= sig.dimension(); ++j) {
    if (components[j - 1] != Complex{}) m.terms_.push_back({Blade::basis(j), components[j - 1]});
  }
  return m;
}

Multivector Multivector::vector(Signature sig, std::span<const double> components) {
  std::vector<Complex> c(components.begin(), components.end());
  return vector(sig, c);
}

Multivector Multivector::from_terms(Signature sig, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if ((t.blade.mask & ~sig.full_mask()) != 0) {
      throw InvalidArgument("blade " + t.blade.name() + " outside signature");
    }
  }
  canonicalize(terms);
  Multivector m(sig);
  m.terms_ = std::move(terms);
  return m;
}

Complex Multivector::coefficient(Blade b) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b.mask,
                             [](const Term& t, std::uint32_t m) { return t.blade.mask < m; });
  return (it != terms_.end() && it->blade == b) ? it->coeff : Complex{};
}

std::vector<int> Multivector::grades() const {
  std::vector<int> g;
  for (const auto& t : terms_) g.push_back(t.blade.grade());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

bool Multivector::is_homogeneous(int k, double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return t.blade.grade() == k || std::abs(t.coeff) <= tol; });
}

double Multivector::norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coeff);
  return std::sqrt(s);
}

Multivector& Multivector::operator+=(const Multivector& other) {
  check_same(sig_, other.sig_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->blade.mask < b->blade.mask)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->blade.mask < a->blade.mask) {
      merged.push_back(*b++);
    } else {
      Complex c = a->coeff + b->coeff;
      if (c != Complex{}) merged.push_back({a->blade, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) { return *this += -other; }

Multivector& Multivector::operator*=(Complex s) {
  for (auto& t : terms_) t.coeff *= s;
  std::erase_if(terms_, [](const Term& t) { return t.coeff == Complex{}; });
  return *this;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  check_same(a.sig_, b.sig_);
  const std::size_t pairs = a.terms_.size() * b.terms_.size();
  const std::size_t blades = std::size_t{a.sig_.full_mask()} + 1;
  Multivector m(a.sig_);
  // dense accumulation once the term pairs outnumber the blades
  if (pairs > blades) {
    std::vector<Complex> dense(blades);
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        dense[ta.blade.mask ^ tb.blade.mask] +=
            static_cast<double>(blade_product_sign(ta.blade, tb.blade)) * (ta.coeff * tb.coeff);
      }
    }
    for (std::uint32_t mask = 0; mask < blades; ++mask) {
      if (dense[mask] != Complex{}) m.terms_.push_back({Blade{mask}, dense[mask]});
    }
    return m;
  }
  std::vector<Multivector::Term> acc;
  acc.reserve(pairs);
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      const double sign = blade_product_sign(ta.blade, tb.blade);
      acc.push_back({Blade{ta.blade.mask ^ tb.blade.mask}, sign * (ta.coeff * tb.coeff)});
    }
  }
  canonicalize(acc);
  m.terms_ = std::move(acc);
  return m;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

Multivector grade_projection(const Multivector& a, int k) {
  std::vector<Multivector::Term> kept;
  for (const auto& t : a.terms()) {
    if (t.blade.grade() == k) kept.push_back(t);
  }
  return Multivector::from_terms(a.signature(), std::move(kept));
}

Multivector conjugate(const Multivector& a) {
  std::vector<Multivector::Term> out;
  for (const auto& t : a.terms()) {
    const int k = t.blade.grade();
    const double sign = ((k * (k + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    out.push_back({t.blade, sign * std::conj(t.coeff)});
  }
  return Multivector::from_terms(a.signature(), std::move(out));
}

std::pair<Complex, Multivector> dot_and_wedge(const Multivector& x, const Multivector& y) {
  check_same(x.signature(), y.signature());
  if (!x.is_homogeneous(1) || !y.is_homogeneous(1)) {
    throw InvalidArgument("dot_and_wedge requires pure 1-vectors");
  }
  const Multivector xy = x * y;
  return {xy.scalar_part(), grade_projection(xy, 2)};
}

Complex euclidean_inner(const Multivector& x, const Multivector& y) {
  check_same(x.signature(), y.signature());
  Complex s{};
  for (int j = 1; j <= x.dimension(); ++j) s += x.component(j) * y.component(j);
  return s;
}

Multivector pseudoscalar(Signature sig) { return Multivector::blade(sig, Blade{sig.full_mask()}); }

Multivector linear_combine(std::span<const Complex> coeffs, std::span<const Multivector> terms) {
  if (coeffs.size() != terms.size()) throw InvalidArgument("linear_combine: length mismatch");
  if (terms.empty()) throw InvalidArgument("linear_combine: no terms");
  std::vector<Multivector::Term> acc;
  const Signature sig = terms.front().signature();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    check_same(sig, terms[i].signature());
    for (const auto& t : terms[i].terms()) acc.push_back({t.blade, coeffs[i] * t.coeff});
  }
  return Multivector::from_terms(sig, std::move(acc));
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string render_coefficient(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real() == 0.0 ? 0.0 : c.real());
  std::string out = "(" + format_double(c.real() == 0.0 ? 0.0 : c.real());
  out += std::signbit(c.imag()) ? '-' : '+';
  out += format_double(std::abs(c.imag()));
  out += "i)";
  return out;
}

class MultivectorReader {
 public:
  MultivectorReader(std::string_view text, Signature sig) : text_(text), sig_(sig) {}

  Multivector read() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty multivector", pos_);
    std::vector<Multivector::Term> terms;
    while (true) {
      terms.push_back(read_term());
      skip_ws();
      if (pos_ == text_.size()) break;
      if (text_[pos_] != '+') throw ParseError("expected '+' between terms", pos_);
      ++pos_;
      skip_ws();
    }
    return Multivector::from_terms(sig_, std::move(terms));
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  double read_real() {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) throw ParseError("expected number", pos_);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  Blade read_blade() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (text_[pos_] == 'e' || text_[pos_] == '^' || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
      ++pos_;
    }
    try {
      return parse_blade(text_.substr(start, pos_ - start), sig_);
    } catch (const ParseError& e) {
      throw ParseError("bad blade name", start + e.offset());
    }
  }

  Multivector::Term read_term() {
    if (pos_ < text_.size() && text_[pos_] == 'e') return {read_blade(), 1.0};
    Complex coeff;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      const double re = read_real();
      if (pos_ >= text_.size() || (text_[pos_] != '+' && text_[pos_] != '-')) {
        throw ParseError("expected sign of imaginary part", pos_);
      }
      const double sign = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      const double im = read_real();
      if (text_.substr(pos_, 2) != "i)") throw ParseError("expected 'i)'", pos_);
      pos_ += 2;
      coeff = {re, sign * im};
    } else {
      coeff = read_real();
    }
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      skip_ws();
      return {read_blade(), coeff};
    }
    return {Blade{}, coeff};
  }

  std::string_view text_;
  Signature sig_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render(const Multivector& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& t : a.terms()) {
    if (!out.empty()) out += " + ";
    out += render_coefficient(t.coeff);
    if (t.blade.mask != 0) {
      out += '*';
      out += t.blade.name();
    }
  }
  return out;
}

Multivector parse_multivector(std::string_view text, Signature sig) { return MultivectorReader(text, sig).read(); }

}  // namespace cliffop
