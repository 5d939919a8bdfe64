#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cliffop/errors.hpp"
#include "cliffop/random.hpp"
#include "cliffop/riccati.hpp"

using namespace cliffop;

namespace {

MultivectorField field(int n, std::map<std::string, std::string> m) { return parse_field(Signature(n), m); }
MultivectorField scalar(int n, const char* e) { return field(n, {{"1", e}}); }

}  // namespace

TEST_CASE("riccati residual examples") {
  auto grid = GridSpec::cube(3, -1, 1, 9);
  auto e1 = RiccatiCandidate::user(field(3, {{"e1", "1"}}), scalar(3, "-1"));
  CHECK(riccati_residual(e1, grid).sup_norm == 0.0);

  std::map<std::string, std::string> tanh;
  for (int k = 1; k <= 3; ++k) {
    auto x = "x" + std::to_string(k);
    tanh["e" + std::to_string(k)] = "(exp(" + x + ") - exp(-" + x + ")) / (exp(" + x + ") + exp(-" + x + "))";
  }
  auto t = RiccatiCandidate::user(field(3, tanh), scalar(3, "-3"));
  auto r = riccati_residual(t, grid);
  CHECK(r.sup_norm <= 1e-9);
  CHECK(r.pass);

  auto inv = RiccatiCandidate::user(field(3, {{"e1", "1/x1"}}), scalar(3, "0"));
  inv.singular.push_back(scalar(3, "x1"));
  auto ri = riccati_residual(inv, GridSpec::cube(3, -1, 1, 11));
  CHECK(ri.sup_norm <= 1e-9);
  CHECK(ri.samples_used == 10 * 11 * 11);

  ResidualOptions strict;
  strict.mask_singular = false;
  CHECK_THROWS_AS(riccati_residual(inv, GridSpec::cube(3, -1, 1, 11), strict), SingularityError);
  CHECK_THROWS_AS(RiccatiCandidate::user(field(3, {{"e1", "1"}}), field(3, {{"e2", "1"}})), InvalidArgument);
}

TEST_CASE("log derivative examples") {
  std::vector<double> p{0.3, 0.7, -0.2};
  auto c = log_derivative(scalar(3, "exp(x1)"));
  CHECK((c.f(p) - Multivector::blade(Signature(3), Blade::from_indices({1}))).norm() < 1e-15);
  CHECK(std::abs(c.v(p).scalar_part() + 1.0) < 1e-15);
  CHECK(c.is_vector());
  CHECK(c.provenance == Provenance::log_derivative);

  auto h = log_derivative(scalar(2, "x1*x2"));
  std::vector<double> q{0.5, -0.25};
  CHECK((h.f(q) - parse_field(Signature(2), {{"e1", "2"}, {"e2", "-4"}})(q)).norm() < 1e-14);
  CHECK(riccati_residual(h, GridSpec::cube(2, -1, 1, 11)).sup_norm <= 1e-9);
}

TEST_CASE("log derivative solves the equation for random positive phi") {
  Rng rng(5);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      auto phi = MultivectorField::scalar(Signature(n), random_positive(rng, n));
      auto r = riccati_residual(log_derivative(phi), GridSpec::cube(n, -1, 1, 5));
      CHECK(r.pass);
    }
  }
}

TEST_CASE("residual of a gradient candidate is the Schroedinger defect") {
  Rng rng(9);
  int n = 3;
  Signature sig(n);
  for (int trial = 0; trial < 5; ++trial) {
    auto psi = MultivectorField::scalar(sig, random_smooth(rng, n));
    auto f = dirac_field(psi);
    auto v = MultivectorField::scalar(sig, random_smooth(rng, n));
    auto phi = apply_function(Function::exp, psi);
    auto c = RiccatiCandidate::user(f, v);
    std::vector<double> p(3);
    for (auto& x : p) x = rng.uniform(-1, 1);
    auto res = riccati_sample(c, p).residual;
    auto defect = (laplacian(phi, p) + v(p) * phi(p)) * Complex(-1.0 / phi(p).scalar_part().real());
    CHECK((res - defect).norm() <= 1e-9 * (1.0 + defect.norm()));
  }
}

TEST_CASE("vector split") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  auto s = vector_split_residuals(RiccatiCandidate::user(field(2, {{"e1", "1"}}), scalar(2, "-1")), grid);
  CHECK(s.scalar.sup_norm == 0.0);
  CHECK(s.bivector.sup_norm == 0.0);

  auto grad = dirac_field(scalar(2, "x1^2")) * Complex(-1.0);
  auto g = vector_split_residuals(RiccatiCandidate::user(grad, scalar(2, "0")), grid);
  CHECK(g.bivector.sup_norm == 0.0);

  auto rot =
      vector_split_residuals(RiccatiCandidate::user(field(2, {{"e1", "x2"}, {"e2", "-x1"}}), scalar(2, "0")), grid);
  CHECK(rot.bivector.sup_norm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(rot.bivector.pass);
  CHECK(rot.recombination_error <= 1e-14);

  CHECK_THROWS_AS(vector_split_residuals(RiccatiCandidate::user(scalar(2, "x1"), scalar(2, "0")), grid),
                  InvalidArgument);
}

TEST_CASE("vector split recombines on random grade-1 fields") {
  Rng rng(41);
  Signature sig(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = RiccatiCandidate::user(random_field(rng, sig, 1), MultivectorField::scalar(sig, random_smooth(rng, 3)));
    auto s = vector_split_residuals(c, GridSpec::cube(3, -1, 1, 5));
    CHECK(s.recombination_error <= 1e-12 * (1.0 + s.scalar.sup_norm + s.bivector.sup_norm));
  }
}

TEST_CASE("anticommutator of vectors is the inner product") {
  Rng rng(3);
  Signature sig(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = grade_projection(random_multivector(rng, sig), 1);
    auto b = grade_projection(random_multivector(rng, sig), 1);
    CHECK(((a * b + b * a) + 2.0 * Multivector::scalar(sig, euclidean_inner(a, b))).norm() < 1e-14);
  }
}

TEST_CASE("one-dimensional reduction") {
  auto f = field(2, {{"e1", "sin(x1) + x1^2"}});
  auto v = scalar(2, "cos(3*x1)");
  auto c = RiccatiCandidate::user(f, v);
  for (double x : {-0.8, 0.1, 0.6}) {
    std::vector<double> p{x, 0.4};
    double fx = std::sin(x) + x * x;
    double dfx = std::cos(x) + 2 * x;
    double expected = -(dfx + fx * fx + std::cos(3 * x));
    auto r = riccati_sample(c, p).residual;
    CHECK(std::abs(r.scalar_part() - expected) < 1e-13);
    CHECK(grade_projection(r, 0) == r);
  }
}

TEST_CASE("scalar riccati ode") {
  auto plus = [](double) { return std::pair{-1.0, 0.0}; };
  auto s = solve_scalar_riccati(plus, 0, 0, -1, 1, 1);
  CHECK(s.value(1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
  for (double x : {-0.77, 0.0005, 0.31}) CHECK(std::abs(s.value(x) - std::tanh(x)) < 1e-9);
  auto tc = s.taylor(0.2, 5);
  double th = std::tanh(0.2);
  CHECK(std::abs(tc[1] - (1 - th * th)) < 1e-8);
  CHECK(std::abs(tc[2] - (-th * (1 - th * th))) < 1e-6);
  CHECK_THROWS_AS(s.value(1.5), DomainError);

  auto minus = [](double) { return std::pair{1.0, 0.0}; };
  auto t = solve_scalar_riccati(minus, 0, 0, 0, 1.2, 1);
  CHECK(std::abs(t.value(1.0) + std::tan(1.0)) < 1e-8);
  try {
    solve_scalar_riccati(minus, 0, 0, 0, 3, 2);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.axis() == 2);
    CHECK(e.location() > 1.4);
    CHECK(e.location() < std::numbers::pi / 2 + 0.01);
  }
}

TEST_CASE("separable solve") {
  Signature sig(3);
  std::vector<ScalarExpr> v(3, parse_expression("-1", 3));
  auto c = separable_solve(sig, v, {0, 0, 0}, {0, 0, 0});
  std::vector<double> p{1.0, 0.5, -0.25};
  auto f = c.f(p);
  CHECK(std::abs(f.coefficient(Blade::from_indices({1})).real() - 0.76159) < 1e-5);
  CHECK(std::abs(f.coefficient(Blade::from_indices({1})).real() - std::tanh(1.0)) < 1e-6);
  CHECK(c.f.mode() == DerivativeMode::finite_difference);
  CHECK(c.provenance == Provenance::separable);
  auto r = riccati_residual(c, GridSpec::cube(3, -1, 1, 7));
  CHECK(r.sup_norm <= 1e-6);
  CHECK(r.pass);

  std::vector<ScalarExpr> w{parse_expression("x1^2", 2), parse_expression("cos(x2)", 2)};
  auto d = separable_solve(Signature(2), w, {0, 0}, {0.5, -0.3}, {{-0.5, 0.5}, {-0.5, 0.5}});
  CHECK(riccati_residual(d, GridSpec::cube(2, -0.5, 0.5, 9)).sup_norm <= 1e-6);

  std::vector<ScalarExpr> bad{parse_expression("x2", 2), parse_expression("0", 2)};
  CHECK_THROWS_AS(separable_solve(Signature(2), bad, {0, 0}, {0, 0}), InvalidArgument);
  std::vector<ScalarExpr> up{parse_expression("1", 1)};
  CHECK_THROWS_AS(separable_solve(Signature(1), up, {0}, {0}, {{0, 3}}), BlowUpError);
}

TEST_CASE("homogeneous sum") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  std::vector<double> p{0.3, -0.6};
  auto a = homogeneous_sum(scalar(2, "x1"), scalar(2, "x2"), grid);
  CHECK(a.verification.pass());
  CHECK(a.verification.get("riccati(f)").sup_norm <= 1e-9);
  CHECK(std::abs(a.candidate.v(p).scalar_part()) < 1e-15);

  auto b = homogeneous_sum(scalar(2, "x1"), scalar(2, "x1"), grid);
  CHECK(b.verification.pass());
  CHECK(std::abs(b.candidate.v(p).scalar_part() + 2 / (0.3 * 0.3)) < 1e-12);
  CHECK((b.candidate.f(p) - field(2, {{"e1", "2/x1"}})(p)).norm() < 1e-14);

  auto c = homogeneous_sum(scalar(2, "x1"), scalar(2, "x1 + x2"), grid);
  CHECK(c.verification.pass());
  CHECK(c.verification.get("riccati(f)").sup_norm <= 1e-9);
  // -2 <e1/x1, (e1 + e2)/(x1 + x2)>
  CHECK(std::abs(c.candidate.v(p).scalar_part() - (-2 / (0.3 * (0.3 - 0.6)))) < 1e-12);

  CHECK_THROWS_AS(homogeneous_sum(scalar(2, "x1^2"), scalar(2, "x2"), grid), PreconditionError);
  try {
    homogeneous_sum(scalar(2, "x1^2"), scalar(2, "x2"), grid);
  } catch (const PreconditionError& e) {
    CHECK_FALSE(e.verification().get("harmonic(phi1)").pass);
    CHECK(e.verification().get("harmonic(phi2)").pass);
  }
}

TEST_CASE("euler shift") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  auto h = RiccatiCandidate::user(field(2, {{"e1", "1"}}), scalar(2, "-1"));
  std::vector<double> p{0.4, 0.9};

  auto a = euler_shift(h, scalar(2, "exp(-2*x1)"), grid);
  CHECK(a.verification.pass());
  CHECK((a.candidate.f(p) + field(2, {{"e1", "1"}})(p)).norm() < 1e-15);
  CHECK(a.verification.get("riccati(f)").sup_norm == 0.0);

  auto b = euler_shift(h, scalar(2, "1"), grid);
  CHECK((b.candidate.f(p) - field(2, {{"e1", "1"}})(p)).norm() == 0.0);

  auto c = euler_shift(h, scalar(2, "x2"), grid);
  CHECK(c.verification.pass());
  CHECK(c.verification.get("riccati(f)").sup_norm <= 1e-9);
  CHECK((c.candidate.f(p) - field(2, {{"e1", "1"}, {"e2", "1/x2"}})(p)).norm() < 1e-14);

  CHECK_THROWS_AS(euler_shift(h, scalar(2, "exp(x1)"), grid), PreconditionError);
  auto bad_h = RiccatiCandidate::user(field(2, {{"e1", "x1"}}), scalar(2, "-1"));
  CHECK_THROWS_AS(euler_shift(bad_h, scalar(2, "1"), grid), PreconditionError);
}

TEST_CASE("euler combine") {
  auto grid = GridSpec::cube(3, -1, 1, 9);
  auto v = scalar(3, "-1");
  std::vector<double> p{0.2, -0.5, 0.1};
  auto a = euler_combine(scalar(3, "x1"), scalar(3, "x2"), 2.0, v, grid);
  CHECK(a.verification.pass());
  CHECK(a.verification.get("riccati(f)").sup_norm <= 1e-9);
  double alpha = 2 * std::exp(0.2 + 0.5);
  auto expected = field(3, {{"e1", std::to_string(alpha / (alpha - 1))}})(p) +
                  field(3, {{"e2", std::to_string(-1 / (alpha - 1))}})(p);
  CHECK((a.candidate.f(p) - expected).norm() < 1e-5);

  auto zero = euler_combine(scalar(3, "x1"), scalar(3, "x2"), 0.0, v, grid);
  CHECK((zero.candidate.f(p) - field(3, {{"e2", "1"}})(p)).norm() < 1e-15);

  auto big = euler_combine(scalar(3, "x1"), scalar(3, "x2"), 1e6, v, grid);
  double worst = 0;
  for (const auto& q : grid.points()) worst = std::max(worst, (big.candidate.f(q) - field(3, {{"e1", "1"}})(q)).norm());
  CHECK(worst <= 1e-4);

  auto one = euler_combine(scalar(3, "x1"), scalar(3, "x2"), 1.0, v, grid);
  CHECK(one.verification.pass());
  CHECK(one.verification.get("riccati(f)").samples_used < grid.size());

  CHECK_THROWS_AS(euler_combine(scalar(3, "x1^2"), scalar(3, "x2"), 2.0, v, grid), PreconditionError);
}

TEST_CASE("euler combine on random admissible inputs") {
  Rng rng(77);
  auto v = scalar(3, "-1");
  auto grid = GridSpec::cube(3, -1, 1, 7);
  const char* axes[] = {"x1", "x2", "x3", "-x1", "-x2", "-x3"};
  for (int trial = 0; trial < 6; ++trial) {
    auto i = rng.integer(0, 5);
    auto j = rng.integer(0, 5);
    Complex K(rng.uniform(-3, 3), rng.uniform(-1, 1));
    auto c = euler_combine(scalar(3, axes[i]), scalar(3, axes[j]), K, v, grid);
    CHECK(c.verification.pass());
  }
}

TEST_CASE("e3 lies outside the two-gradient family") {
  auto grid = GridSpec::cube(3, -1, 1, 9);
  auto r = family_gap_demo(grid, {1.0, -3.0, 2.0, Complex(0, 1), 1e6});
  CHECK(r.verification.get("riccati(e3)").sup_norm == 0.0);
  CHECK(r.pass);
  CHECK(r.min_distance >= 0.1);
  REQUIRE(r.distances.size() == 5);
  for (const auto& d : r.distances) CHECK(d.distance >= 1.0 - 1e-12);
  CHECK_THROWS_AS(family_gap_demo(GridSpec::cube(2, -1, 1, 5), {1.0}), InvalidArgument);
}

TEST_CASE("provenance tags") {
  for (auto p : {Provenance::log_derivative, Provenance::separable, Provenance::euler_shift, Provenance::euler_combine,
                 Provenance::homogeneous_sum, Provenance::user}) {
    CHECK(parse_provenance(provenance_name(p)) == p);
  }
  CHECK_THROWS_AS(parse_provenance("nope"), InvalidArgument);
}
