#include "identities.hpp"

#include <functional>
#include <string>
#include <vector>

#include "cliffop/darboux.hpp"
#include "cliffop/kernel.hpp"
#include "cliffop/random.hpp"

namespace cliffop::cli {

namespace {

constexpr double kAlgebraTol = 1e-12;

struct Trial {
  std::vector<double> point;
  Sample sample;
};

ResidualReport collect(Rng& rng, int n, int trials, Tolerance tol,
                       const std::function<Sample(Rng&, std::span<const double>)>& draw) {
  std::vector<double> norms, mags;
  std::vector<std::vector<double>> points;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& x : p) x = rng.uniform(-1.0, 1.0);
    const Sample s = draw(rng, p);
    norms.push_back(s.residual.norm());
    mags.push_back(s.lhs_magnitude);
    points.push_back(std::move(p));
  }
  return summarize(norms, mags, points, tol);
}

Multivector random_vector(Rng& rng, Signature sig) {
  std::vector<Complex> c;
  for (int j = 0; j < sig.dimension(); ++j) c.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return Multivector::vector(sig, c);
}

/// Random 1-vector field; without an e_n component in last-axis mode.
MultivectorField random_vector_field(Rng& rng, Signature sig, bool drop_last) {
  ExprMap m;
  const int n = sig.dimension();
  for (int j = 1; j <= (drop_last ? n - 1 : n); ++j) m.emplace(Blade::basis(j), random_smooth(rng, n, 2));
  return MultivectorField::from_expressions(sig, std::move(m));
}

}  // namespace

Verification identity_suite(int n, std::uint64_t seed, int trials, const ResidualOptions& opts) {
  const Signature sig(n);
  const Tolerance alg = Tolerance::scaled(kAlgebraTol);
  const Tolerance exact = opts.resolve(DerivativeMode::exact);
  Rng rng(seed);
  Verification v;
  auto add = [&](const std::string& name, Tolerance tol,
                 const std::function<Sample(Rng&, std::span<const double>)>& d) {
    v.add(name, Role::conclusion, collect(rng, n, trials, tol, d));
  };

  add("associativity", alg, [&](Rng& r, std::span<const double>) {
    const Multivector a = random_multivector(r, sig), b = random_multivector(r, sig), c = random_multivector(r, sig);
    return compare((a * b) * c, a * (b * c));
  });
  add("distributivity", alg, [&](Rng& r, std::span<const double>) {
    const Multivector a = random_multivector(r, sig), b = random_multivector(r, sig), c = random_multivector(r, sig);
    return compare(a * (b + c), a * b + a * c);
  });
  add("anti-involution", alg, [&](Rng& r, std::span<const double>) {
    const Multivector a = random_multivector(r, sig), b = random_multivector(r, sig);
    return compare(conjugate(a * b), conjugate(b) * conjugate(a));
  });
  add("grade completeness", alg, [&](Rng& r, std::span<const double>) {
    const Multivector a = random_multivector(r, sig);
    Multivector sum(sig);
    for (int k = 0; k <= n; ++k) sum += grade_projection(a, k);
    return compare(sum, a);
  });
  add("vector square", alg, [&](Rng& r, std::span<const double>) {
    const Multivector x = random_vector(r, sig);
    return compare(x * x, Multivector::scalar(sig, -euclidean_inner(x, x)));
  });
  add("anticommutator", alg, [&](Rng& r, std::span<const double>) {
    const Multivector x = random_vector(r, sig), y = random_vector(r, sig);
    return compare(x * y + y * x, Multivector::scalar(sig, -2.0 * euclidean_inner(x, y)));
  });

  add("dirac squared", exact, [&](Rng& r, std::span<const double> p) {
    const MultivectorField F = random_field(r, sig);
    return compare(dirac(dirac_field(F), p), -laplacian(F, p));
  });
  add("leibniz scalar", exact, [&](Rng& r, std::span<const double> p) {
    const MultivectorField phi = MultivectorField::scalar(sig, random_smooth(r, n));
    const auto s = leibniz_scalar(phi, random_field(r, sig), p);
    return compare(s.lhs, s.rhs);
  });
  for (int k = 0; k <= n; ++k) {
    add("leibniz grade " + std::to_string(k), exact, [&, k](Rng& r, std::span<const double> p) {
      const auto s = leibniz_kvector(random_field(r, sig, k), random_field(r, sig), k, p);
      return compare(s.lhs, s.rhs);
    });
  }

  const std::pair<ClosedForm, std::string> forms[] = {{ClosedForm::plus_minus, "closed form d^f d^-f"},
                                                      {ClosedForm::minus_plus, "closed form d^-f d^f"}};
  for (const auto& [which, label] : forms) {
    for (int k = 0; k <= n; ++k) {
      add(label + " grade " + std::to_string(k), exact, [&, which, k](Rng& r, std::span<const double> p) {
        const auto s = closed_form_sides(random_field(r, sig, 1), random_field(r, sig, k), k, which, p);
        return compare(s.lhs, s.rhs);
      });
    }
  }
  add("closed form scalar", exact, [&](Rng& r, std::span<const double> p) {
    const MultivectorField phi = MultivectorField::scalar(sig, random_smooth(r, n));
    const auto s = closed_form_sides(random_field(r, sig, 1), phi, 0, ClosedForm::scalar_minus_plus, p);
    return compare(s.lhs, s.rhs);
  });

  if (n >= 2) {
    const PseudoscalarMode mode = resolve_mode(PseudoscalarMode::automatic, n);
    const bool drop_last = mode == PseudoscalarMode::last_axis;
    const GridSpec probe = GridSpec::cube(n, -1.0, 1.0, 2);
    // A^2 = d^f d^-f and B^2 = d^-f d^f
    const std::pair<KernelOperator, std::string> ops[] = {{KernelOperator::A, "A squared"},
                                                          {KernelOperator::B, "B squared"}};
    for (const auto& [op, label] : ops) {
      add(label, exact, [&, op](Rng& r, std::span<const double> p) {
        const MultivectorField f = random_vector_field(r, sig, drop_last);
        const MultivectorField g = random_field(r, sig);
        const PseudoscalarFrame frame = mode_check(mode, f, probe);
        const MultivectorField once = kernel_operator_field(op, f, frame, g);
        const Multivector lhs = op == KernelOperator::A ? apply_A(f, frame, once, p) : apply_B(f, frame, once, p);
        const OperatorSign inner = op == KernelOperator::A ? OperatorSign::minus : OperatorSign::plus;
        const OperatorSign outer = op == KernelOperator::A ? OperatorSign::plus : OperatorSign::minus;
        const Multivector rhs = FactorizedOperator{f, outer}.apply(FactorizedOperator{f, inner}.apply_field(g), p);
        return compare(lhs, rhs);
      });
    }
  }
  return v;
}

}  // namespace cliffop::cli
