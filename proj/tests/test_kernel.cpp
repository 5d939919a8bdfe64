#include <doctest.h>

#include <cmath>
#include <vector>

#include "cliffop/errors.hpp"
#include "cliffop/kernel.hpp"
#include "cliffop/random.hpp"

using namespace cliffop;

namespace {

MultivectorField field(int n, std::map<std::string, std::string> m) { return parse_field(Signature(n), m); }
MultivectorField scalar(int n, const char* e) { return field(n, {{"1", e}}); }

Multivector e(int n, std::initializer_list<int> idx) {
  return Multivector::blade(Signature(n), Blade::from_indices(idx));
}
Multivector one(int n) { return Multivector::scalar(Signature(n), 1.0); }
const Complex I(0.0, 1.0);

}  // namespace

TEST_CASE("mode check") {
  auto grid2 = GridSpec::cube(2, -1, 1, 5);
  auto f2 = field(2, {{"e1", "1"}});
  auto full = mode_check(PseudoscalarMode::full, f2, grid2);
  CHECK(full.iE == I * e(2, {1, 2}));
  CHECK(full.iE * full.iE == one(2));

  auto f4 = field(4, {{"e1", "1"}});
  CHECK_THROWS_AS(mode_check(PseudoscalarMode::full, f4, GridSpec::cube(4, -1, 1, 3)), ModeError);
  CHECK(mode_check(PseudoscalarMode::automatic, f4, GridSpec::cube(4, -1, 1, 3)).mode == PseudoscalarMode::last_axis);
  CHECK(mode_check(PseudoscalarMode::full, field(6, {{"e1", "1"}}), GridSpec::cube(6, -1, 1, 2)).mode ==
        PseudoscalarMode::full);

  auto f3 = field(3, {{"e1", "1"}});
  auto last = mode_check(PseudoscalarMode::last_axis, f3, GridSpec::cube(3, -1, 1, 3));
  CHECK(last.iE == I * e(3, {3}));
  CHECK_THROWS_AS(mode_check(PseudoscalarMode::last_axis, field(3, {{"e3", "x1"}}), GridSpec::cube(3, -1, 1, 3)),
                  ModeError);
  Signature sig(3);
  auto sampled = MultivectorField::black_box(sig, [](std::span<const double> p) {
    return Multivector::vector(Signature(3), std::vector<double>{1.0, 0.0, p[0]});
  });
  CHECK_THROWS_AS(mode_check(PseudoscalarMode::last_axis, sampled, GridSpec::cube(3, -1, 1, 3)), ModeError);
  CHECK(parse_mode(mode_name(PseudoscalarMode::last_axis)) == PseudoscalarMode::last_axis);
  CHECK_THROWS_AS(parse_mode("diagonal"), InvalidArgument);
}

TEST_CASE("A and B on constants") {
  auto grid = GridSpec::cube(2, -1, 1, 5);
  auto f = field(2, {{"e1", "1"}});
  auto frame = mode_check(PseudoscalarMode::full, f, grid);
  std::vector<double> p{0.3, 0.1};
  CHECK(apply_A(f, frame, scalar(2, "1"), p) == I * e(2, {2}));
  CHECK(apply_B(f, frame, scalar(2, "1"), p) == -I * e(2, {2}));
  auto A1 = kernel_operator_field(KernelOperator::A, f, frame, scalar(2, "1"));
  CHECK((apply_A(f, frame, A1, p) - one(2)).norm() < 1e-15);

  auto zero = MultivectorField::zero(Signature(2));
  auto g = field(2, {{"1", "sin(x1)*exp(x2)"}, {"e1^e2", "x1^3"}});
  auto zframe = mode_check(PseudoscalarMode::full, zero, grid);
  auto Ag = kernel_operator_field(KernelOperator::A, zero, zframe, g);
  CHECK((apply_A(zero, zframe, Ag, p) + laplacian(g, p)).norm() < 1e-13);
}

TEST_CASE("operator identities on random fields") {
  Rng rng(55);
  for (int n : {2, 3, 4, 6}) {
    Signature sig(n);
    for (int trial = 0; trial < 3; ++trial) {
      // last-axis mode needs f in span(e_1..e_{n-1})
      ExprMap fm;
      for (int j = 1; j < n; ++j) fm.emplace(Blade::from_indices({j}), random_smooth(rng, n, 2));
      auto f = MultivectorField::from_expressions(sig, fm);
      auto g = random_field(rng, sig);
      auto grid = GridSpec::cube(n, -1, 1, 2);
      auto frame = mode_check(PseudoscalarMode::automatic, f, grid);
      std::vector<double> p(static_cast<std::size_t>(n));
      for (auto& x : p) x = rng.uniform(-1, 1);
      const Multivector gv = g(p);
      CHECK(gv * frame.iE * frame.iE == gv);

      FactorizedOperator plus{f, OperatorSign::plus};
      FactorizedOperator minus{f, OperatorSign::minus};
      auto iE = MultivectorField::constant(frame.iE);
      // A = M^{iE} d^-f = d^f M^{iE}
      auto a1 = apply_A(f, frame, g, p);
      auto a2 = plus.apply(g * iE, p);
      CHECK((a1 - a2).norm() <= 1e-12 * (1.0 + a1.norm()));
      // M^{iE} d^-f M^{iE} = d^f
      auto conj = minus.apply(g * iE, p) * frame.iE;
      auto direct = plus.apply(g, p);
      CHECK((conj - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
      // A^2 = d^f d^-f and B^2 = d^-f d^f
      auto AA = apply_A(f, frame, kernel_operator_field(KernelOperator::A, f, frame, g), p);
      auto pm = plus.apply(minus.apply_field(g), p);
      CHECK((AA - pm).norm() <= 1e-10 * (1.0 + pm.norm()));
      auto BB = apply_B(f, frame, kernel_operator_field(KernelOperator::B, f, frame, g), p);
      auto mp = minus.apply(plus.apply_field(g), p);
      CHECK((BB - mp).norm() <= 1e-10 * (1.0 + mp.norm()));
    }
  }
}

TEST_CASE("first-order residuals") {
  auto grid = GridSpec::cube(2, -1, 1, 5);
  auto f = field(2, {{"e1", "1"}});
  auto frame = mode_check(PseudoscalarMode::full, f, grid);
  SpectralParam lam(1.0);
  auto gp = MultivectorField::constant(0.5 * (one(2) + I * e(2, {2})));
  auto r = first_order_residual(KernelOperator::A, f, frame, lam, -1, gp, grid);
  CHECK(r.residual.sup_norm == 0.0);
  auto zero = MultivectorField::zero(Signature(2));
  for (int s : {-1, 1}) {
    CHECK(first_order_residual(KernelOperator::A, f, frame, lam, s, zero, grid).residual.sup_norm == 0.0);
    CHECK(first_order_residual(KernelOperator::B, f, frame, lam, s, zero, grid).residual.sup_norm == 0.0);
  }
  auto bad = first_order_residual(KernelOperator::A, f, frame, lam, -1, scalar(2, "1"), grid);
  CHECK(bad.residual.sup_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(bad.norm_equivalence.pass);
  CHECK_THROWS_AS(first_order_residual(KernelOperator::A, f, frame, lam, 0, zero, grid), InvalidArgument);
}

TEST_CASE("norm equivalence holds at every sample") {
  Rng rng(12);
  Signature sig(3);
  auto f = field(3, {{"e1", "x2"}, {"e2", "sin(x1)"}});
  auto grid = GridSpec::cube(3, -1, 1, 5);
  auto frame = mode_check(PseudoscalarMode::last_axis, f, grid);
  for (int trial = 0; trial < 4; ++trial) {
    auto g = random_field(rng, sig);
    for (auto op : {KernelOperator::A, KernelOperator::B}) {
      for (int s : {-1, 1}) {
        auto r = first_order_residual(op, f, frame, SpectralParam(Complex(0.7, -0.4)), s, g, grid);
        CHECK(r.norm_equivalence.pass);
        CHECK(r.norm_equivalence.sup_norm <= 1e-12 * (1.0 + r.residual.sup_norm));
      }
    }
  }
}

TEST_CASE("split of the constant solution") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  auto c = RiccatiCandidate::user(field(2, {{"e1", "1"}}), scalar(2, "-1"));
  auto d = decompose_schrodinger_solution(c, PseudoscalarMode::automatic, SpectralParam(1.0), scalar(2, "1"), grid);
  std::vector<double> p{0.4, -0.2};
  CHECK(d.g_plus(p) == 0.5 * (one(2) + I * e(2, {2})));
  CHECK(d.g_minus(p) == 0.5 * (one(2) - I * e(2, {2})));
  CHECK(d.plus_kernel_report().sup_norm == 0.0);
  CHECK(d.minus_kernel_report().sup_norm == 0.0);
  CHECK(d.reassembly_residual == 0.0);
  CHECK(d.pass());
  CHECK(d.frame.mode == PseudoscalarMode::full);

  // g already in ker(A - lambda)
  auto frame = mode_check(PseudoscalarMode::full, c.f, grid);
  auto again = split_kernel(KernelOperator::A, c.f, frame, SpectralParam(1.0), d.g_plus, grid);
  CHECK((again.g_plus(p) - d.g_plus(p)).norm() < 1e-15);
  CHECK(again.g_minus(p).norm() < 1e-15);
}

TEST_CASE("split in last-axis mode") {
  auto grid = GridSpec::cube(3, -1, 1, 7);
  auto c = RiccatiCandidate::user(field(3, {{"e1", "1"}}), scalar(3, "-1"));
  auto d = decompose_schrodinger_solution(c, PseudoscalarMode::last_axis, SpectralParam(1.0), scalar(3, "1"), grid);
  CHECK(d.pass());
  CHECK(d.plus_kernel_report().sup_norm <= 1e-10);
  CHECK(d.minus_kernel_report().sup_norm <= 1e-10);
  std::vector<double> p{0.1, 0.2, 0.3};
  // A(1) = -e1 (i e3) = -i e1 e3
  CHECK((d.g_plus(p) - 0.5 * (one(3) - I * e(3, {1, 3}))).norm() < 1e-15);
}

TEST_CASE("split of a nonconstant eigenfunction") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  auto c = RiccatiCandidate::user(field(2, {{"e1", "1"}}), scalar(2, "-1"));
  auto d =
      decompose_schrodinger_solution(c, PseudoscalarMode::full, SpectralParam(0.8), scalar(2, "exp(0.6*x2)"), grid);
  CHECK(d.pass());
  CHECK(d.plus_kernel_report().sup_norm <= 1e-9);
  CHECK(d.minus_kernel_report().sup_norm <= 1e-9);

  auto z = decompose_schrodinger_solution(c, PseudoscalarMode::full, SpectralParam(1.0), scalar(2, "0"), grid);
  std::vector<double> p{0.5, 0.5};
  CHECK(z.g_plus(p).is_zero());
  CHECK(z.g_minus(p).is_zero());

  CHECK_THROWS_AS(
      decompose_schrodinger_solution(c, PseudoscalarMode::full, SpectralParam(2.0), scalar(2, "exp(0.6*x2)"), grid),
      PreconditionError);
  CHECK_THROWS_AS(decompose_schrodinger_solution(RiccatiCandidate::user(field(4, {{"e1", "1"}}), scalar(4, "-1")),
                                                 PseudoscalarMode::full, SpectralParam(1.0), scalar(4, "1"),
                                                 GridSpec::cube(4, -1, 1, 3)),
                  ModeError);
}

TEST_CASE("dual split") {
  auto grid = GridSpec::cube(2, -1, 1, 11);
  auto f = field(2, {{"e1", "1"}});
  auto d = decompose_dual_solution(f, PseudoscalarMode::full, SpectralParam(1.0), scalar(2, "1"), grid);
  std::vector<double> p{0.4, -0.2};
  CHECK(d.g_plus(p) == 0.5 * (one(2) - I * e(2, {2})));
  CHECK(d.g_minus(p) == 0.5 * (one(2) + I * e(2, {2})));
  CHECK(d.pass());
  CHECK(d.plus_kernel_report().sup_norm == 0.0);
  CHECK(d.op == KernelOperator::B);

  auto z = decompose_dual_solution(f, PseudoscalarMode::full, SpectralParam(1.0), scalar(2, "0"), grid);
  CHECK(z.g_plus(p).is_zero());

  auto six = decompose_dual_solution(field(6, {{"e1", "1"}}), PseudoscalarMode::full, SpectralParam(1.0),
                                     scalar(6, "1"), GridSpec::cube(6, -1, 1, 3));
  CHECK(six.pass());
  CHECK(six.plus_kernel_report().sup_norm <= 1e-10);
  CHECK(six.minus_kernel_report().sup_norm <= 1e-10);
}

TEST_CASE("split reassembles random eigenfunctions") {
  // f = e1 + e2 in n = 3 (last axis) has u = 2; exp(a.x) with |a|^2 = 2 - lambda^2.
  auto grid = GridSpec::cube(3, -1, 1, 5);
  auto f = field(3, {{"e1", "1"}, {"e2", "1"}});
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    double a = rng.uniform(-0.8, 0.8);
    double b = rng.uniform(-0.8, 0.8);
    double l2 = 2.0 - a * a - b * b;
    auto phi = parse_field(Signature(3), {{"1", "exp(" + format_double(a) + "*x1 + " + format_double(b) + "*x3)"}});
    auto d = decompose_dual_solution(f, PseudoscalarMode::last_axis, SpectralParam(std::sqrt(l2)), phi, grid);
    CHECK(d.pass());
    CHECK(d.reassembly_residual <= 1e-12 * 3.0);
  }
}
