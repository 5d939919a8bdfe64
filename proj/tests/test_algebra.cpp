#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cliffop/algebra.hpp"
#include "cliffop/errors.hpp"
#include "oracles.hpp"

using namespace cliffop;

TEST_CASE("generators square to -1 and anticommute") {
  Signature sig(4);
  for (int j = 1; j <= 4; ++j) {
    CHECK(Multivector::basis(sig, j) * Multivector::basis(sig, j) == Multivector::scalar(sig, -1.0));
    for (int k = j + 1; k <= 4; ++k) {
      auto ej = Multivector::basis(sig, j);
      auto ek = Multivector::basis(sig, k);
      CHECK((ej * ek + ek * ej).is_zero());
    }
  }
}

TEST_CASE("worked products") {
  Signature sig(3);
  auto e1 = Multivector::basis(sig, 1);
  auto e2 = Multivector::basis(sig, 2);
  auto e12 = Multivector::blade(sig, Blade::from_indices({1, 2}));
  CHECK(e12 * e1 == e2);
  auto x = 3.0 * e1 + 4.0 * e2;
  CHECK(x * x == Multivector::scalar(sig, -25.0));
  auto y = e1 + e2;
  CHECK(grade_projection(e1 * y, 0) == Multivector::scalar(sig, -1.0));
}

TEST_CASE("blade signs agree with word reduction") {
  for (int n = 1; n <= 6; ++n) {
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t a = 0; a <= full; ++a) {
      for (std::uint32_t b = 0; b <= full; ++b) {
        auto [mask, sign] = oracle::reduce_word(oracle::word_of(a), oracle::word_of(b));
        REQUIRE(mask == (a ^ b));
        REQUIRE(blade_product_sign(Blade{a}, Blade{b}) == sign);
      }
    }
  }
}

TEST_CASE("grade projection and conjugation") {
  Signature sig(2);
  auto e12 = Multivector::blade(sig, Blade::from_indices({1, 2}));
  CHECK(grade_projection(e12, 2) == e12);
  CHECK(grade_projection(e12, 0).is_zero());
  CHECK(grade_projection(e12, -1).is_zero());
  CHECK(grade_projection(e12, 3).is_zero());

  auto e1 = Multivector::basis(sig, 1);
  CHECK(conjugate(e1) == -e1);
  CHECK(conjugate(e12) == -e12);
  const Complex i(0.0, 1.0);
  CHECK(conjugate(i * e1) == i * e1);
}

TEST_CASE("dot and wedge") {
  Signature sig(2);
  auto e1 = Multivector::basis(sig, 1);
  auto e2 = Multivector::basis(sig, 2);
  auto e12 = Multivector::blade(sig, Blade::from_indices({1, 2}));
  {
    auto [d, w] = dot_and_wedge(e1, e1);
    CHECK(d == Complex(-1.0));
    CHECK(w.is_zero());
  }
  {
    auto [d, w] = dot_and_wedge(e1, e2);
    CHECK(d == Complex(0.0));
    CHECK(w == e12);
  }
  {
    auto [d, w] = dot_and_wedge(e1, e1 + e2);
    CHECK(d == Complex(-1.0));
    CHECK(w == e12);
  }
  CHECK_THROWS_AS(dot_and_wedge(e12, e1), InvalidArgument);
}

TEST_CASE("pseudoscalar squares") {
  const Complex i(0.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    Signature sig(n);
    auto ie = i * pseudoscalar(sig);
    // e_N^2 = (-1)^{n(n+1)/2}, so (i e_N)^2 = -(-1)^{n(n+1)/2}
    const double expected = ((n * (n + 1) / 2) % 2 == 0) ? -1.0 : 1.0;
    CHECK(ie * ie == Multivector::scalar(sig, expected));
  }
  CHECK(pseudoscalar(Signature(1)) == Multivector::basis(Signature(1), 1));
}

TEST_CASE("linear combinations normalize") {
  Signature sig(2);
  auto e1 = Multivector::basis(sig, 1);
  auto e2 = Multivector::basis(sig, 2);
  const Complex i(0.0, 1.0);
  std::vector<Complex> c{1.0, 0.0};
  std::vector<Multivector> t{e1, e2};
  CHECK(linear_combine(c, t) == e1);
  c = {1.0, -1.0};
  t = {e1, e1};
  CHECK(linear_combine(c, t).terms().empty());
  auto one = Multivector::scalar(sig, 1.0);
  c = {0.5, 0.5};
  t = {one + i * e2, one - i * e2};
  CHECK(linear_combine(c, t) == one);
}

TEST_CASE("signature mismatch and range checks") {
  CHECK_THROWS_AS(Signature(0), InvalidArgument);
  CHECK_THROWS_AS(Signature(kMaxDimension + 1), InvalidArgument);
  auto a = Multivector::basis(Signature(2), 1);
  auto b = Multivector::basis(Signature(3), 1);
  CHECK_THROWS_AS(a * b, SignatureMismatch);
  CHECK_THROWS_AS(a + b, SignatureMismatch);
}

TEST_CASE("render round-trips") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 5; ++n) {
    Signature sig(n);
    for (int trial = 0; trial < 50; ++trial) {
      auto a = oracle::random_multivector(sig, rng);
      CHECK(parse_multivector(render(a), sig) == a);
    }
  }
  Signature sig(3);
  CHECK(render(Multivector(sig)) == "0");
  CHECK(parse_multivector("0", sig).is_zero());
  CHECK_THROWS_AS(parse_multivector("1*e4", sig), ParseError);
  CHECK_THROWS_AS(parse_multivector("1*e2^e1", sig), ParseError);
}

TEST_CASE("algebra laws on random multivectors") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 6; ++n) {
    Signature sig(n);
    for (int trial = 0; trial < 40; ++trial) {
      auto a = oracle::random_multivector(sig, rng);
      auto b = oracle::random_multivector(sig, rng);
      auto c = oracle::random_multivector(sig, rng);
      const double scale = 1.0 + a.norm() * b.norm() * c.norm();
      CHECK(((a * b) * c - a * (b * c)).norm() <= 1e-12 * scale);
      CHECK((conjugate(a * b) - conjugate(b) * conjugate(a)).norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
      Multivector sum(sig);
      for (int k = 0; k <= n; ++k) sum += grade_projection(a, k);
      CHECK(sum == a);
      CHECK((a * b - oracle::dense_product(a, b)).norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));

      auto x = grade_projection(a, 1);
      auto y = grade_projection(b, 1);
      auto [d, w] = dot_and_wedge(x, y);
      CHECK((x * y - (Multivector::scalar(sig, d) + w)).norm() <= 1e-12 * (1.0 + x.norm() * y.norm()));
      CHECK((x * y + y * x + Multivector::scalar(sig, 2.0 * euclidean_inner(x, y))).norm() <=
            1e-12 * (1.0 + x.norm() * y.norm()));
    }
  }
}
