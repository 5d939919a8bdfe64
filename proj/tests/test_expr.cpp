#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cliffop/errors.hpp"
#include "cliffop/expr.hpp"
#include "oracles.hpp"

using namespace cliffop;

namespace {

ScalarExpr random_tree(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  const int choice = pick(rng);
  auto leaf_number = [&] {
    return ScalarExpr(parse_expression(format_double(std::round(oracle::uniform(rng, 0.1, 3.0) * 8) / 8), n));
  };
  switch (choice) {
    case 0:
      return leaf_number();
    case 1:
    case 2:
      return make_variable(std::uniform_int_distribution<int>(1, n)(rng));
    case 3:
      return random_tree(rng, n, depth - 1) + random_tree(rng, n, depth - 1);
    case 4:
      return random_tree(rng, n, depth - 1) - random_tree(rng, n, depth - 1);
    case 5:
    case 6:
      return random_tree(rng, n, depth - 1) * random_tree(rng, n, depth - 1);
    case 7:
      return random_tree(rng, n, depth - 1) /
             (make_constant(2.5) + make_call(Function::cos, random_tree(rng, n, depth - 1)));
    case 8:
      return make_power(random_tree(rng, n, depth - 1), std::uniform_int_distribution<int>(-2, 3)(rng));
    case 9:
      return make_call(Function::sin, random_tree(rng, n, depth - 1));
    case 10:
      return make_call(Function::exp, make_constant(0.3) * random_tree(rng, n, depth - 1));
    default:
      return make_call(Function::sqrt, make_constant(1.5) + make_power(random_tree(rng, n, depth - 1), 2));
  }
}

}  // namespace

TEST_CASE("parse shapes") {
  auto e = parse_expression("exp(x1)", 2);
  CHECK(e.kind() == ScalarExpr::Kind::call);
  CHECK(e.function() == Function::exp);
  CHECK(e.lhs().kind() == ScalarExpr::Kind::variable);
  CHECK(e.lhs().variable() == 1);

  auto s = parse_expression("x1*x2 + 3", 2);
  CHECK(s.kind() == ScalarExpr::Kind::add);
  CHECK(s.lhs().kind() == ScalarExpr::Kind::multiply);
  CHECK(s.rhs().number() == 3.0);

  auto left = parse_expression("x1 - x2 - 1", 2);
  CHECK(left.kind() == ScalarExpr::Kind::subtract);
  CHECK(left.lhs().kind() == ScalarExpr::Kind::subtract);

  auto neg = parse_expression("-x1^2", 1);
  CHECK(neg.kind() == ScalarExpr::Kind::power);
  CHECK(neg.lhs().kind() == ScalarExpr::Kind::negate);

  auto inv = parse_expression("x1^-2", 1);
  CHECK(inv.exponent() == -2);
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse_expression("x3", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
  }
  try {
    parse_expression("1 + x1 * )", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 9);
  }
  CHECK_THROWS_AS(parse_expression("", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("tan(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("x1^1.5", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("(x1", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("x0", 2), ParseError);
}

TEST_CASE("jet values") {
  std::vector<double> zero{0.0, 0.0};
  auto j = eval_jet(parse_expression("exp(x1)", 2), zero);
  CHECK(j.value == Complex(1.0));
  CHECK(j.gradient[0] == Complex(1.0));
  CHECK(j.hessian[0][0] == Complex(1.0));

  std::vector<double> p{0.3, -0.7};
  CHECK(std::abs(eval_jet(parse_expression("x1^2 + x2^2", 2), p).laplacian() - 4.0) < 1e-14);

  std::vector<double> q{2.0, 5.0};
  auto m = eval_jet(parse_expression("x1*x2", 2), q);
  CHECK(m.gradient[1] == Complex(2.0));
  CHECK(m.hessian[0][1] == Complex(1.0));
  CHECK(m.hessian[1][0] == Complex(1.0));

  std::vector<double> one{1.0};
  CHECK(evaluate_value(parse_expression("2 + 3*i", 1), one) == Complex(2.0, 3.0));
}

TEST_CASE("domain errors name the subexpression") {
  std::vector<double> p{-1.0, 0.0};
  try {
    evaluate_value(parse_expression("1 + log(x1)", 2), p);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "log(x1)");
  }
  CHECK_THROWS_AS(evaluate_value(parse_expression("1/x2", 2), p), DomainError);
  CHECK_THROWS_AS(evaluate_value(parse_expression("sqrt(x2)", 2), p), DomainError);
  CHECK_THROWS_AS(evaluate_value(parse_expression("x2^-1", 2), p), DomainError);
  CHECK_NOTHROW(evaluate_value(parse_expression("sqrt(x1 + 2)", 2), p));
}

TEST_CASE("gradients and hessians agree with central differences") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3;
    auto e = random_tree(rng, n, 4);
    std::vector<double> p{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    Jet2 jet;
    try {
      jet = eval_jet(e, p);
    } catch (const DomainError&) {
      continue;
    }
    auto value = [&](const std::vector<double>& x) { return evaluate_value(e, x); };
    bool ok = true;
    for (int j = 1; j <= n && ok; ++j) {
      Complex fd;
      try {
        fd = oracle::central_partial(value, p, j);
      } catch (const DomainError&) {
        ok = false;
        break;
      }
      CHECK(std::abs(fd - jet.gradient[j - 1]) <= 1e-6 * (1.0 + std::abs(jet.gradient[j - 1])));
      for (int k = 1; k <= n; ++k) {
        auto partial_k = [&](const std::vector<double>& x) { return eval_jet(e, x).gradient[k - 1]; };
        CHECK(std::abs(oracle::central_partial(partial_k, p, j) - jet.hessian[j - 1][k - 1]) <=
              1e-5 * (1.0 + std::abs(jet.hessian[j - 1][k - 1])));
        CHECK(jet.hessian[j - 1][k - 1] == jet.hessian[k - 1][j - 1]);
      }
    }
    if (ok) ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("symbolic derivative matches the jet") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto e = random_tree(rng, 2, 4);
    std::vector<double> p{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    try {
      auto jet = eval_jet(e, p);
      for (int j = 1; j <= 2; ++j) {
        auto d = evaluate_value(differentiate(e, j), p);
        CHECK(std::abs(d - jet.gradient[j - 1]) <= 1e-10 * (1.0 + std::abs(d)));
      }
    } catch (const DomainError&) {
    }
  }
}

TEST_CASE("higher-order jets") {
  std::vector<double> p{0.4, -0.2};
  auto e = parse_expression("sin(x1)*exp(x2)", 2);
  auto jet = evaluate(e, p, 4);
  auto third = jet.derivative(1).derivative(1).derivative(2);
  CHECK(std::abs(third.value() - (-std::sin(0.4) * std::exp(-0.2))) < 1e-14);
  auto w = evaluate(parse_expression("sqrt(x1 + 1)", 2), p, 3).derivative(1).derivative(1).derivative(1);
  CHECK(std::abs(w.value() - 0.375 * std::pow(1.4, -2.5)) < 1e-13);
  auto l = evaluate(parse_expression("log(x1)", 2), p, 3).derivative(1).derivative(1).derivative(1);
  CHECK(std::abs(l.value() - 2.0 / std::pow(0.4, 3)) < 1e-11);
}

TEST_CASE("render round-trips parsed trees") {
  const char* sources[] = {"x1*x2 + 3",           "-x1^2",         "-(x1^2)", "x1 - (x2 - 1)", "x1/(x2*x1)",
                           "exp(-x1)*sin(x2)^-2", "2.5e-7*i - x1", "((x1))",  "--x1",          "x1*-x2"};
  for (const char* s : sources) {
    auto e = parse_expression(s, 2);
    CHECK(parse_expression(render(e), 2) == e);
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    auto e = random_tree(rng, 3, 5);
    auto back = parse_expression(render(e), 3);
    CHECK(parse_expression(render(back), 3) == back);
    CHECK(render(back) == render(e));
  }
}

TEST_CASE("folding builders") {
  auto x = make_variable(1);
  CHECK(render(x + make_constant(0.0)) == "x1");
  CHECK(render(make_constant(1.0) * x) == "x1");
  CHECK((make_constant(2.0) * make_constant(3.0)).is_constant(6.0));
  CHECK(render(make_constant(Complex(0.5, -1.0))) == "0.5 - i");
  CHECK(render(make_constant(-2.0)) == "-2");
  CHECK(differentiate(make_power(x, 3), 2).is_constant(0.0));
}
