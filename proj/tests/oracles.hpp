#pragma once

// Slow, independent reference computations used by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "cliffop/algebra.hpp"

namespace oracle {

using cliffop::Complex;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<int> word_of(std::uint32_t mask) {
  std::vector<int> w;
  for (int j = 0; j < 32; ++j) {
    if (mask >> j & 1u) w.push_back(j + 1);
  }
  return w;
}

// Bubble-sorts the concatenated generator word, flipping the sign on every
// swap of distinct generators and cancelling adjacent equal pairs to -1.
inline std::pair<std::uint32_t, int> reduce_word(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  int sign = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      if (a[i] > a[i + 1]) {
        std::swap(a[i], a[i + 1]);
        sign = -sign;
        changed = true;
      } else if (a[i] == a[i + 1]) {
        a.erase(a.begin() + static_cast<long>(i), a.begin() + static_cast<long>(i) + 2);
        sign = -sign;
        changed = true;
        break;
      }
    }
  }
  std::uint32_t mask = 0;
  for (int j : a) mask |= 1u << (j - 1);
  return {mask, sign};
}

inline cliffop::Multivector dense_product(const cliffop::Multivector& a, const cliffop::Multivector& b) {
  const auto sig = a.signature();
  std::vector<Complex> dense(std::size_t{1} << sig.dimension());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      auto [mask, sign] = reduce_word(word_of(ta.blade.mask), word_of(tb.blade.mask));
      dense[mask] += static_cast<double>(sign) * ta.coeff * tb.coeff;
    }
  }
  std::vector<cliffop::Multivector::Term> terms;
  for (std::uint32_t m = 0; m < dense.size(); ++m) terms.push_back({cliffop::Blade{m}, dense[m]});
  return cliffop::Multivector::from_terms(sig, std::move(terms));
}

inline cliffop::Multivector random_multivector(cliffop::Signature sig, std::mt19937_64& rng, double density = 0.6) {
  std::vector<cliffop::Multivector::Term> terms;
  for (std::uint32_t m = 0; m <= sig.full_mask(); ++m) {
    if (uniform(rng, 0.0, 1.0) > density) continue;
    terms.push_back({cliffop::Blade{m}, Complex(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0))});
  }
  return cliffop::Multivector::from_terms(sig, std::move(terms));
}

// Central differences of a complex scalar function.
inline Complex central_partial(const std::function<Complex(const std::vector<double>&)>& f, std::vector<double> p,
                               int j, double h = 1e-5) {
  const double x = p[j - 1];
  p[j - 1] = x + h;
  const Complex up = f(p);
  p[j - 1] = x - h;
  const Complex down = f(p);
  return (up - down) / (2.0 * h);
}

}  // namespace oracle
