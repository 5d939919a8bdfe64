#include "cliffop/darboux.hpp"

#include <algorithm>
#include <initializer_list>

#include "cliffop/errors.hpp"
#include "field_util.hpp"

namespace cliffop {

namespace {

using detail::largest;
using detail::mode_of;
using detail::require_preconditions;
using detail::scalar_check;
using detail::smooth;

struct Local {
  Multivector value;
  std::vector<Multivector> d;
  Multivector lap;
};

Local local(const MultivectorField& F, std::span<const double> p, int order) {
  const MultivectorJet j = F.jet(p, order);
  Local out{j.value(), {}, Multivector(F.signature())};
  for (int k = 1; k <= F.dimension(); ++k) {
    const MultivectorJet dk = j.derivative(k);
    out.d.push_back(dk.value());
    if (order >= 2) out.lap += dk.derivative(k).value();
  }
  return out;
}

Local project(const Local& L, int k) {
  Local out{grade_projection(L.value, k), {}, grade_projection(L.lap, k)};
  for (const auto& d : L.d) out.d.push_back(grade_projection(d, k));
  return out;
}

Local sum(const Local& a, const Local& b) {
  Local out{a.value + b.value, {}, a.lap + b.lap};
  for (std::size_t j = 0; j < a.d.size(); ++j) out.d.push_back(a.d[j] + b.d[j]);
  return out;
}

Multivector dirac_of(const Local& L) {
  Multivector out(L.value.signature());
  for (std::size_t j = 0; j < L.d.size(); ++j) {
    out += Multivector::basis(L.value.signature(), static_cast<int>(j) + 1) * L.d[j];
  }
  return out;
}

/// sum_j [e_j G]_{k-1} d_j f
Multivector cross(const Multivector& G, int k, const Local& f) {
  Multivector out(G.signature());
  for (std::size_t j = 0; j < f.d.size(); ++j) {
    out += grade_projection(Multivector::basis(G.signature(), static_cast<int>(j) + 1) * G, k - 1) * f.d[j];
  }
  return out;
}

bool is_scalar_field(const MultivectorField& g, std::span<const double> p) {
  if (auto e = g.expressions()) {
    return std::all_of(e->begin(), e->end(), [](const auto& kv) { return kv.first.grade() == 0; });
  }
  const Multivector v = g(p);
  return v.is_homogeneous(0, 1e-12 * (1.0 + v.norm()));
}

void check_pair(const MultivectorField& a, const MultivectorField& b) {
  if (a.signature() != b.signature()) throw SignatureMismatch(a.dimension(), b.dimension());
}

struct ClosedFormEval {
  Multivector direct;
  Multivector closed;
  double scale;
};

ClosedFormEval closed_form_eval(const MultivectorField& f, const MultivectorField& G, int k, ClosedForm which,
                                std::span<const double> p) {
  check_pair(f, G);
  if (k < 0 || k > G.dimension()) throw InvalidArgument("grade out of range");
  if (which == ClosedForm::scalar_minus_plus && k != 0) {
    throw InvalidArgument("the scalar closed form needs a grade-0 field");
  }
  require_grade(f, 1, p);
  require_grade(G, k, p);
  const FactorizedOperator plus{f, OperatorSign::plus};
  const FactorizedOperator minus{f, OperatorSign::minus};
  const bool plus_outer = which == ClosedForm::plus_minus;
  const Multivector direct = plus_outer ? plus.apply(minus.apply_field(G), p) : minus.apply(plus.apply_field(G), p);

  const Local g = local(G, p, 2);
  const Local fl = local(f, p, 1);
  const Multivector df = dirac_of(fl);
  const Multivector f2 = fl.value * fl.value;
  const double s = k % 2 == 0 ? -1.0 : 1.0;
  const Multivector c2 = 2.0 * cross(g.value, k, fl);
  Multivector middle(f.signature());
  Multivector closed(f.signature());
  switch (which) {
    case ClosedForm::plus_minus:
      middle = g.value * (s * df - f2);
      closed = -g.lap + middle - c2;
      break;
    case ClosedForm::minus_plus:
      middle = g.value * (s * df + f2);
      closed = -g.lap - middle + c2;
      break;
    case ClosedForm::scalar_minus_plus:
      middle = g.value * (df - f2);
      closed = -g.lap + middle;
      break;
  }
  return {direct, closed, largest({direct, g.lap, middle, c2})};
}

}  // namespace

SpectralParam::SpectralParam(Complex lambda) : lambda_(lambda) {
  if (lambda == Complex{}) throw InvalidArgument("spectral parameter must be nonzero");
}

Multivector FactorizedOperator::apply(const MultivectorField& g, std::span<const double> p) const {
  check_pair(f, g);
  const Multivector gf = g(p) * f(p);
  return sign == OperatorSign::plus ? dirac(g, p) + gf : dirac(g, p) - gf;
}

MultivectorField FactorizedOperator::apply_field(const MultivectorField& g) const {
  check_pair(f, g);
  return sign == OperatorSign::plus ? dirac_field(g) + g * f : dirac_field(g) - g * f;
}

ResidualReport scalar_schrodinger_residual(const MultivectorField& v, const MultivectorField& phi, SpectralParam lambda,
                                           const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(v, phi);
  const Complex l2 = lambda.squared();
  return grid_residual(
      [&](std::span<const double> p) {
        const Multivector lap = laplacian(phi, p);
        const Multivector vphi = v(p) * phi(p);
        const Multivector eig = l2 * phi(p);
        return Sample{-lap - vphi - eig, largest({lap, vphi, eig})};
      },
      grid, opts.resolve(mode_of({&v, &phi})));
}

Sample schrodinger_sample(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                          std::span<const double> p) {
  const FactorizedOperator plus{f, OperatorSign::plus};
  const FactorizedOperator minus{f, OperatorSign::minus};
  const Multivector lhs = plus.apply(minus.apply_field(g), p);
  const Multivector rhs = lambda.squared() * g(p);
  return {lhs - rhs, std::max(lhs.norm(), rhs.norm())};
}

ResidualReport gen_schrodinger_residual(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                                        const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(f, g);
  return grid_residual([&](std::span<const double> p) { return schrodinger_sample(f, g, lambda, p); }, grid,
                       opts.resolve(mode_of({&f, &g})));
}

Verification gen_schrodinger_check(const RiccatiCandidate& c, const MultivectorField& g, SpectralParam lambda,
                                   const GridSpec& grid, const ResidualOptions& opts) {
  const GridSpec cg = candidate_grid(c, grid, opts);
  const Tolerance tol = opts.resolve(mode_of({&c.f, &c.v, &g}));
  Verification v;
  v.add("riccati(f)", Role::precondition, riccati_residual(c, grid, opts));
  v.add("schrodinger(g)", Role::conclusion, gen_schrodinger_residual(c.f, g, lambda, cg, opts));
  if (is_scalar_field(g, cg.point(0))) {
    const FactorizedOperator plus{c.f, OperatorSign::plus};
    const FactorizedOperator minus{c.f, OperatorSign::minus};
    v.add("factorization(g)", Role::conclusion,
          grid_residual(
              [&](std::span<const double> p) {
                const Multivector lhs = plus.apply(minus.apply_field(g), p);
                const Multivector rhs = -laplacian(g, p) - c.v(p) * g(p);
                return Sample{lhs - rhs, std::max(lhs.norm(), rhs.norm())};
              },
              cg, tol));
  }
  return v;
}

TransformResult darboux_transform(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                                  const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(f, g);
  Verification v;
  v.add("schrodinger(g)", Role::precondition, gen_schrodinger_residual(f, g, lambda, grid, opts));
  require_preconditions(v);

  const FactorizedOperator plus{f, OperatorSign::plus};
  const FactorizedOperator minus{f, OperatorSign::minus};
  const MultivectorField h = minus.apply_field(g);
  const MultivectorField hs = smooth(h, 2);
  const MultivectorField plus_h = plus.apply_field(hs);
  v.add("darboux(h)", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Multivector lhs = minus.apply(plus_h, p);
              const Multivector rhs = lambda.squared() * hs(p);
              return Sample{lhs - rhs, std::max(lhs.norm(), rhs.norm())};
            },
            grid, opts.resolve(mode_of({&f, &hs}))));
  return {h, v};
}

IdentitySides closed_form_sides(const MultivectorField& f, const MultivectorField& G, int k, ClosedForm which,
                                std::span<const double> p) {
  auto e = closed_form_eval(f, G, k, which, p);
  return {e.direct, e.closed};
}

ResidualReport closed_form_residual(const MultivectorField& f, const MultivectorField& G, int k, ClosedForm which,
                                    const GridSpec& grid, const ResidualOptions& opts) {
  return grid_residual(
      [&](std::span<const double> p) {
        auto e = closed_form_eval(f, G, k, which, p);
        return Sample{e.direct - e.closed, e.scale};
      },
      grid, opts.resolve(mode_of({&f, &G})));
}

TransformResult vector_transform(const RiccatiCandidate& c, const MultivectorField& phi, SpectralParam lambda,
                                 const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(c.f, phi);
  const GridSpec cg = candidate_grid(c, grid, opts);
  require_grade(c.f, 1, cg.point(0));
  require_grade(phi, 0, cg.point(0));
  const Tolerance tol = opts.resolve(mode_of({&c.f, &c.v, &phi}));
  const Complex l2 = lambda.squared();

  Verification v;
  v.add("riccati(f)", Role::precondition, riccati_residual(c, grid, opts));
  v.add("schrodinger(phi)", Role::precondition, scalar_schrodinger_residual(c.v, phi, lambda, cg, opts));
  require_preconditions(v);

  const MultivectorField h = FactorizedOperator{c.f, OperatorSign::minus}.apply_field(phi);
  const MultivectorField hs = smooth(h, 2);
  v.add("vector(h)", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Local H = local(hs, p, 2);
              const Local F = local(c.f, p, 1);
              const Multivector vh = H.value * c.v(p);
              Multivector coupling(c.f.signature());
              for (int j = 1; j <= c.f.dimension(); ++j) {
                coupling += H.value.coefficient(Blade::from_indices({j})) * F.d[j - 1];
              }
              coupling *= 2.0;
              const Multivector eig = l2 * H.value;
              return Sample{-H.lap - vh - coupling - eig, largest({H.lap, vh, coupling, eig})};
            },
            cg, tol));
  return {h, v};
}

TransformResult even_transform(const MultivectorField& f, const MultivectorField& g, SpectralParam lambda,
                               const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(f, g);
  require_grade(f, 1, grid.point(0));
  require_grade(g, 1, grid.point(0));
  const Tolerance tol = opts.resolve(mode_of({&f, &g}));
  const Complex l2 = lambda.squared();
  const MultivectorField u = dirac_field(f) - f * f;

  Verification v;
  v.add("u scalar", Role::precondition, scalar_check(u, grid, tol));
  v.add("eigen(g)", Role::precondition,
        grid_residual(
            [&](std::span<const double> p) {
              const Local G = local(g, p, 2);
              const Local F = local(f, p, 1);
              const Multivector up = dirac_of(F) - F.value * F.value;
              const Multivector gu = G.value * up;
              Multivector coupling(f.signature());
              for (int j = 1; j <= f.dimension(); ++j) {
                coupling += G.value.coefficient(Blade::from_indices({j})) * F.d[j - 1];
              }
              coupling *= 2.0;
              const Multivector eig = l2 * G.value;
              return Sample{-G.lap + gu + coupling - eig, largest({G.lap, gu, coupling, eig})};
            },
            grid, tol));
  require_preconditions(v);

  const MultivectorField S = FactorizedOperator{f, OperatorSign::minus}.apply_field(g);
  const MultivectorField Ss = smooth(S, 2);
  v.add("even(phi+H2)", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Local L = local(Ss, p, 2);
              const Local F = local(f, p, 1);
              const Local P = sum(project(L, 0), project(L, 2));
              const Multivector H2 = grade_projection(L.value, 2);
              const Multivector up = dirac_of(F) - F.value * F.value;
              const Multivector pu = P.value * up;
              const Multivector coupling = 2.0 * cross(H2, 2, F);
              const Multivector eig = l2 * P.value;
              return Sample{-P.lap + pu + coupling - eig, largest({P.lap, pu, coupling, eig})};
            },
            grid, tol));
  v.add("grade split", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Multivector s = Ss(p);
              return Sample{s - grade_projection(s, 0) - grade_projection(s, 2), s.norm()};
            },
            grid, tol));
  return {grade_field(S, 0) + grade_field(S, 2), v};
}

TransformResult grade_pair_transform(const MultivectorField& f, const MultivectorField& G, int k, SpectralParam lambda,
                                     const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(f, G);
  if (k < 0 || k > G.dimension()) throw InvalidArgument("grade out of range");
  require_grade(f, 1, grid.point(0));
  require_grade(G, k, grid.point(0));
  const Tolerance tol = opts.resolve(mode_of({&f, &G}));
  const Complex l2 = lambda.squared();
  const double s = k % 2 == 0 ? -1.0 : 1.0;
  const MultivectorField w = s * dirac_field(f) - f * f;
  auto w_at = [s](const Local& F) { return s * dirac_of(F) - F.value * F.value; };

  Verification v;
  v.add("w scalar", Role::precondition, scalar_check(w, grid, tol));
  v.add("eigen(G)", Role::precondition,
        grid_residual(
            [&](std::span<const double> p) {
              const Local Gl = local(G, p, 2);
              const Local F = local(f, p, 1);
              const Multivector gw = Gl.value * w_at(F);
              const Multivector coupling = 2.0 * cross(Gl.value, k, F);
              const Multivector eig = l2 * Gl.value;
              return Sample{-Gl.lap + gw - coupling - eig, largest({Gl.lap, gw, coupling, eig})};
            },
            grid, tol));
  require_preconditions(v);

  const MultivectorField H = FactorizedOperator{f, OperatorSign::minus}.apply_field(G);
  const MultivectorField Hs = smooth(H, 2);
  v.add("grade pair(H)", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Local L = local(Hs, p, 2);
              const Local F = local(f, p, 1);
              const Local P = sum(project(L, k - 1), project(L, k + 1));
              const Multivector lower = grade_projection(L.value, k - 1);
              const Multivector upper = grade_projection(L.value, k + 1);
              const Multivector hw = P.value * w_at(F);
              const Multivector coupling = 2.0 * (cross(lower, k - 1, F) + cross(upper, k + 1, F));
              const Multivector eig = l2 * P.value;
              return Sample{-P.lap + hw + coupling - eig, largest({P.lap, hw, coupling, eig})};
            },
            grid, tol));
  v.add("grade split", Role::conclusion,
        grid_residual(
            [&](std::span<const double> p) {
              const Multivector h = Hs(p);
              return Sample{h - grade_projection(h, k - 1) - grade_projection(h, k + 1), h.norm()};
            },
            grid, tol));
  return {grade_field(H, k - 1) + grade_field(H, k + 1), v};
}

}  // namespace cliffop
