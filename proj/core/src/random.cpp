#include "cliffop/random.hpp"

#include <cmath>
#include <vector>

namespace cliffop {

namespace {

ScalarExpr coefficient(Rng& rng) {
  double c = rng.dyadic(-2.0, 2.0);
  if (c == 0.0) c = 0.5;
  return make_constant(c);
}

}  // namespace

ScalarExpr random_smooth(Rng& rng, int n, int depth) {
  const int choice = depth <= 0 ? rng.integer(0, 2) : rng.integer(0, 9);
  auto sub = [&] { return random_smooth(rng, n, depth - 1); };
  switch (choice) {
    case 0:
      return coefficient(rng);
    case 1:
    case 2:
      return coefficient(rng) * make_variable(rng.integer(1, n));
    case 3:
      return sub() + sub();
    case 4:
      return sub() - sub();
    case 5:
      return sub() * sub();
    case 6:
      return make_power(sub(), rng.integer(2, 3));
    case 7:
      return make_call(Function::sin, sub());
    case 8:
      return make_call(Function::exp, make_constant(0.5) * make_call(Function::cos, sub()));
    default:
      return sub() / (make_constant(2.5) + make_call(Function::sin, sub()));
  }
}

ScalarExpr random_positive(Rng& rng, int n, int depth) {
  return make_call(Function::exp, make_constant(0.5) * random_smooth(rng, n, depth));
}

ScalarExpr random_harmonic(Rng& rng, int n) {
  ScalarExpr out = coefficient(rng);
  for (int j = 1; j <= n; ++j) out = out + coefficient(rng) * make_variable(j);
  if (n >= 2) {
    const int a = rng.integer(1, n);
    int b = rng.integer(1, n - 1);
    if (b >= a) ++b;
    const ScalarExpr xa = make_variable(a);
    const ScalarExpr xb = make_variable(b);
    // Re (xa + i xb)^2 and Re (xa + i xb)^3, plus the product xa xb
    out = out + coefficient(rng) * (make_power(xa, 2) - make_power(xb, 2));
    out = out + coefficient(rng) * (make_power(xa, 3) - make_constant(3.0) * xa * make_power(xb, 2));
    out = out + coefficient(rng) * xa * xb;
  }
  return out;
}

MultivectorField random_field(Rng& rng, Signature sig, std::optional<int> grade, int depth, double density) {
  ExprMap m;
  for (std::uint32_t mask = 0; mask <= sig.full_mask(); ++mask) {
    const Blade b{mask};
    if (grade && b.grade() != *grade) continue;
    if (rng.unit() > density) continue;
    m.emplace(b, random_smooth(rng, sig.dimension(), depth));
  }
  if (m.empty()) {
    // empty draw: use the first admissible blade
    for (std::uint32_t mask = 0; mask <= sig.full_mask(); ++mask) {
      if (!grade || Blade{mask}.grade() == *grade) {
        m.emplace(Blade{mask}, random_smooth(rng, sig.dimension(), depth));
        break;
      }
    }
  }
  return MultivectorField::from_expressions(sig, std::move(m));
}

Multivector random_multivector(Rng& rng, Signature sig, double density) {
  std::vector<Multivector::Term> terms;
  for (std::uint32_t mask = 0; mask <= sig.full_mask(); ++mask) {
    if (rng.unit() > density) continue;
    terms.push_back({Blade{mask}, Complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))});
  }
  return Multivector::from_terms(sig, std::move(terms));
}

}  // namespace cliffop
