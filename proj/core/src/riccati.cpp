#include "cliffop/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cliffop/errors.hpp"

namespace cliffop {

namespace {

constexpr std::pair<Provenance, std::string_view> kProvenanceNames[] = {
    {Provenance::log_derivative, "log_derivative"},   {Provenance::separable, "separable"},
    {Provenance::euler_shift, "euler_shift"},         {Provenance::euler_combine, "euler_combine"},
    {Provenance::homogeneous_sum, "homogeneous_sum"}, {Provenance::user, "user"},
};

std::optional<std::vector<int>> symbolic_grades(const MultivectorField& f) {
  auto e = f.expressions();
  if (!e) return std::nullopt;
  std::vector<int> g;
  for (const auto& [b, x] : *e) g.push_back(b.grade());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

void require_scalar_field(const MultivectorField& s, std::string_view what) {
  if (auto g = symbolic_grades(s)) {
    if (!g->empty() && *g != std::vector<int>{0}) {
      throw InvalidArgument(std::string(what) + " must be scalar-valued");
    }
  }
}

void require_vector(const RiccatiCandidate& c, std::string_view what) {
  if (c.is_vector()) return;
  if (auto g = symbolic_grades(c.f); g && (g->empty() || *g == std::vector<int>{1})) return;
  throw InvalidArgument(std::string(what) + " must be a pure 1-vector field");
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  return render(Multivector::scalar(Signature(1), z));
}

Sample scalar_identity(const Multivector& residual, double scale) { return {residual, scale}; }

}  // namespace

std::string_view provenance_name(Provenance p) {
  for (const auto& [k, name] : kProvenanceNames) {
    if (k == p) return name;
  }
  return "user";
}

Provenance parse_provenance(std::string_view tag) {
  for (const auto& [k, name] : kProvenanceNames) {
    if (name == tag) return k;
  }
  throw InvalidArgument("unknown provenance '" + std::string(tag) + "'");
}

RiccatiCandidate RiccatiCandidate::user(MultivectorField f, MultivectorField v) {
  if (f.signature() != v.signature()) throw SignatureMismatch(f.dimension(), v.dimension());
  require_scalar_field(v, "potential");
  RiccatiCandidate c{std::move(f), std::move(v), Provenance::user, {}, {}};
  c.grade_support = symbolic_grades(c.f).value_or(std::vector<int>{});
  return c;
}

GridSpec candidate_grid(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts) {
  GridSpec g = grid;
  for (const auto& s : c.singular) {
    if (opts.mask_singular) {
      g.exclude_near_zero.push_back(s);
    } else {
      const double radius = grid.exclusion_radius;
      g.exclude.push_back([s, radius](std::span<const double> p) {
        bool hit = false;
        try {
          hit = std::abs(s(p).scalar_part()) < radius;
        } catch (const DomainError&) {
          hit = true;
        }
        if (hit) {
          std::string where;
          for (double x : p) where += (where.empty() ? "" : ", ") + format_double(x);
          throw SingularityError("sample (" + where + ") lies on an unmasked singular set");
        }
        return false;
      });
    }
  }
  return g;
}

Sample riccati_sample(const RiccatiCandidate& c, std::span<const double> p) {
  const MultivectorJet j = c.f.jet(p, 1);
  const Signature sig = c.f.signature();
  const Multivector fv = j.value();
  Multivector lhs = fv * fv;
  for (int k = 1; k <= sig.dimension(); ++k) lhs += Multivector::basis(sig, k) * j.derivative(k).value();
  return compare(lhs, c.v(p));
}

ResidualReport riccati_residual(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts) {
  return grid_residual([&c](std::span<const double> p) { return riccati_sample(c, p); }, candidate_grid(c, grid, opts),
                       opts.resolve(c.f.mode()));
}

RiccatiCandidate log_derivative(const MultivectorField& phi) {
  require_scalar_field(phi, "phi");
  RiccatiCandidate c{
      divide(dirac_field(phi), phi), divide(-laplacian_field(phi), phi), Provenance::log_derivative, {}, {}};
  c.singular.push_back(phi);
  c.grade_support = {1};
  return c;
}

VectorSplit vector_split_residuals(const RiccatiCandidate& c, const GridSpec& grid, const ResidualOptions& opts) {
  require_vector(c, "candidate");
  const Signature sig = c.f.signature();
  const int n = sig.dimension();
  const GridSpec g = candidate_grid(c, grid, opts);
  const Tolerance tol = opts.resolve(c.f.mode());

  struct Row {
    double scalar, scalar_lhs, bivector, bivector_lhs, recombination;
  };
  const std::function<Row(std::span<const double>)> eval = [&](std::span<const double> p) {
    const MultivectorJet j = c.f.jet(p, 1);
    Complex div{}, inner{};
    for (int k = 1; k <= n; ++k) {
      div += j.derivative(k).component(Blade::basis(k)).value();
      const Complex fk = j.component(Blade::basis(k)).value();
      inner += fk * fk;
    }
    Multivector curl(sig);
    for (int a = 1; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        const Complex w =
            j.derivative(a).component(Blade::basis(b)).value() - j.derivative(b).component(Blade::basis(a)).value();
        curl += Multivector::blade(sig, Blade{Blade::basis(a).mask | Blade::basis(b).mask}, w);
      }
    }
    const Complex scalar_lhs = -div - inner;
    const Multivector scalar = Multivector::scalar(sig, scalar_lhs - c.v(p).scalar_part());
    const Multivector full = riccati_sample(c, p).residual;
    return Row{scalar.norm(), std::abs(scalar_lhs), curl.norm(), curl.norm(), (scalar + curl - full).norm()};
  };
  const auto pts = g.points();
  const auto rows = grid_map(eval, pts, g.threads);
  std::vector<double> sn, sl, bn, bl;
  VectorSplit out;
  for (const auto& r : rows) {
    sn.push_back(r.scalar);
    sl.push_back(r.scalar_lhs);
    bn.push_back(r.bivector);
    bl.push_back(r.bivector_lhs);
    out.recombination_error = std::max(out.recombination_error, r.recombination);
  }
  out.scalar = summarize(sn, sl, pts, tol);
  out.bivector = summarize(bn, bl, pts, tol);
  return out;
}

// ---- separable potentials ---------------------------------------------------

ScalarRiccatiSolution::ScalarRiccatiSolution(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("a scalar Riccati solution needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i - 1].x < nodes_[i].x)) throw InvalidArgument("solution nodes must be strictly increasing");
  }
}

std::array<double, 6> ScalarRiccatiSolution::taylor(double x, int order) const {
  if (order < 0 || order > 5) throw InvalidArgument("interpolant supports derivatives up to order 5");
  if (!(x >= lo() && x <= hi())) {
    throw DomainError("point " + format_double(x) + " outside the integration interval [" + format_double(lo()) + ", " +
                          format_double(hi()) + "]",
                      "separable solution");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x, [](double v, const Node& nd) { return v < nd.x; });
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double H = b.x - a.x;
  const double d = b.f - a.f;
  const double m0 = H * a.df, m1 = H * b.df;
  const double c0 = H * H * a.d2f, c1 = H * H * b.d2f;
  // quintic Hermite on t in [0, 1], re-expanded around t below
  const double poly[6] = {a.f,
                          m0,
                          c0 / 2,
                          10 * d - 6 * m0 - 4 * m1 - (3 * c0 - c1) / 2,
                          -15 * d + 8 * m0 + 7 * m1 + (3 * c0 - 2 * c1) / 2,
                          6 * d - 3 * m0 - 3 * m1 - (c0 - c1) / 2};
  const double t = (x - a.x) / H;
  static constexpr double binom[6][6] = {{1, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0}, {1, 2, 1, 0, 0, 0},
                                         {1, 3, 3, 1, 0, 0}, {1, 4, 6, 4, 1, 0}, {1, 5, 10, 10, 5, 1}};
  std::array<double, 6> out{};
  double scale = 1.0;
  for (int m = 0; m <= order; ++m) {
    double s = 0.0;
    for (int k = 5; k >= m; --k) s = s * t + binom[k][m] * poly[k];
    out[m] = s / scale;
    scale *= H;
  }
  return out;
}

double ScalarRiccatiSolution::value(double x) const { return taylor(x, 0)[0]; }

ScalarRiccatiSolution solve_scalar_riccati(const std::function<std::pair<double, double>(double)>& potential, double x0,
                                           double f0, double lo, double hi, int axis, const SeparableOptions& opts) {
  if (!(lo < hi)) throw InvalidArgument("integration interval needs lo < hi");
  if (!(x0 >= lo && x0 <= hi)) throw InvalidArgument("initial point outside the integration interval");
  if (!(opts.step > 0.0)) throw InvalidArgument("ODE step must be positive");
  if (!(opts.blow_up_bound > 0.0)) throw InvalidArgument("blow-up bound must be positive");

  auto node_at = [&](double x, double f) {
    const auto [v, dv] = potential(x);
    const double df = -v - f * f;
    return ScalarRiccatiSolution::Node{x, f, df, -dv - 2.0 * f * df};
  };
  auto rhs = [&](double x, double f) { return -potential(x).first - f * f; };
  auto guard = [&](double x, double f) {
    if (!std::isfinite(f) || std::abs(f) > opts.blow_up_bound) {
      throw BlowUpError(axis, x, std::isfinite(f) ? std::abs(f) : std::numeric_limits<double>::infinity());
    }
  };

  auto march = [&](double direction, double end) {
    std::vector<ScalarRiccatiSolution::Node> out;
    double x = x0;
    double f = f0;
    while (direction * (end - x) > 0.0) {
      const double remaining = std::abs(end - x);
      // last step absorbs any remainder under 1.5 steps
      const double h = direction * (remaining < 1.5 * opts.step ? remaining : opts.step);
      const double x_next = remaining < 1.5 * opts.step ? end : x + h;
      const double k1 = rhs(x, f);
      guard(x + h / 2, f + h / 2 * k1);
      const double k2 = rhs(x + h / 2, f + h / 2 * k1);
      guard(x + h / 2, f + h / 2 * k2);
      const double k3 = rhs(x + h / 2, f + h / 2 * k2);
      guard(x_next, f + h * k3);
      const double k4 = rhs(x_next, f + h * k3);
      f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      x = x_next;
      guard(x, f);
      out.push_back(node_at(x, f));
    }
    return out;
  };

  guard(x0, f0);
  std::vector<ScalarRiccatiSolution::Node> nodes = march(-1.0, lo);
  std::reverse(nodes.begin(), nodes.end());
  nodes.push_back(node_at(x0, f0));
  const auto forward = march(1.0, hi);
  nodes.insert(nodes.end(), forward.begin(), forward.end());
  return ScalarRiccatiSolution(std::move(nodes));
}

RiccatiCandidate separable_solve(Signature sig, const std::vector<ScalarExpr>& v_list, const std::vector<double>& x0,
                                 const std::vector<double>& f0, std::vector<std::pair<double, double>> intervals,
                                 const SeparableOptions& opts) {
  const int n = sig.dimension();
  const auto un = static_cast<std::size_t>(n);
  if (v_list.size() != un || x0.size() != un || f0.size() != un) {
    throw InvalidArgument("separable_solve needs one potential, x0 and f0 per axis");
  }
  if (intervals.empty()) {
    for (double a : x0) intervals.emplace_back(a - 1.0, a + 1.0);
  }
  if (intervals.size() != un) throw InvalidArgument("separable_solve needs one interval per axis");

  std::vector<ScalarRiccatiSolution> solutions;
  ScalarExpr v_sum = make_constant(0.0);
  for (int k = 1; k <= n; ++k) {
    const ScalarExpr& vk = v_list[static_cast<std::size_t>(k - 1)];
    for (int var : vk.variables()) {
      if (var != k) {
        throw InvalidArgument("potential for axis " + std::to_string(k) + " depends on x" + std::to_string(var));
      }
    }
    v_sum = v_sum + vk;
    auto potential = [&vk, n, k](double x) {
      std::vector<double> p(static_cast<std::size_t>(n), 0.0);
      p[static_cast<std::size_t>(k - 1)] = x;
      const Jet j = evaluate(vk, p, 1);
      if (j.value().imag() != 0.0) throw InvalidArgument("separable potentials must be real");
      return std::pair{j.value().real(), j.partial(k).real()};
    };
    const auto [lo, hi] = intervals[static_cast<std::size_t>(k - 1)];
    solutions.push_back(solve_scalar_riccati(potential, x0[static_cast<std::size_t>(k - 1)],
                                             f0[static_cast<std::size_t>(k - 1)], lo, hi, k, opts));
  }

  auto provider = [sig, solutions](std::span<const double> p, int order) {
    MultivectorJet out(sig, order);
    const int n = sig.dimension();
    for (int k = 1; k <= n; ++k) {
      const double xk = p[static_cast<std::size_t>(k - 1)];
      const auto t = solutions[static_cast<std::size_t>(k - 1)].taylor(xk, std::min(order, 5));
      std::vector<Complex> coeffs(static_cast<std::size_t>(order) + 1);
      for (int m = 0; m <= std::min(order, 5); ++m)
        coeffs[static_cast<std::size_t>(m)] = t[static_cast<std::size_t>(m)];
      out.add(Blade::basis(k), Jet::variable(n, order, k, xk).compose(coeffs));
    }
    return out;
  };
  RiccatiCandidate c{MultivectorField::custom(sig, provider, 5, DerivativeMode::finite_difference),
                     MultivectorField::scalar(sig, v_sum),
                     Provenance::separable,
                     {},
                     {}};
  c.grade_support = {1};
  return c;
}

// ---- constructors built on known solutions ------------------------------------

namespace {

Sample harmonic_sample(const MultivectorField& phi, std::span<const double> p) {
  return scalar_identity(laplacian(phi, p), phi(p).norm());
}

void append_masks(RiccatiCandidate& c, const std::vector<MultivectorField>& extra) {
  c.singular.insert(c.singular.end(), extra.begin(), extra.end());
}

bool same_field(const MultivectorField& a, const MultivectorField& b) {
  if (a.node() == b.node()) return true;
  auto ea = a.expressions();
  auto eb = b.expressions();
  return ea && eb && *ea == *eb;
}

}  // namespace

Construction homogeneous_sum(const MultivectorField& phi1, const MultivectorField& phi2, const GridSpec& grid,
                             const ResidualOptions& opts) {
  if (phi1.signature() != phi2.signature()) throw SignatureMismatch(phi1.dimension(), phi2.dimension());
  require_scalar_field(phi1, "phi1");
  require_scalar_field(phi2, "phi2");
  Construction out{RiccatiCandidate{phi1, phi1, Provenance::homogeneous_sum, {}, {}}, {}};
  out.verification.add("harmonic(phi1)", Role::precondition,
                       grid_residual([&](std::span<const double> p) { return harmonic_sample(phi1, p); }, grid,
                                     opts.resolve(phi1.mode())));
  out.verification.add("harmonic(phi2)", Role::precondition,
                       grid_residual([&](std::span<const double> p) { return harmonic_sample(phi2, p); }, grid,
                                     opts.resolve(phi2.mode())));
  if (!out.verification.preconditions_pass()) throw PreconditionError(out.verification);

  const MultivectorField a = divide(dirac_field(phi1), phi1);
  RiccatiCandidate& c = out.candidate;
  if (same_field(phi1, phi2)) {
    c.f = Complex(2.0) * a;
    c.v = Complex(2.0) * scalar_part(a * a);
    c.singular = {phi1};
  } else {
    const MultivectorField b = divide(dirac_field(phi2), phi2);
    c.f = a + b;
    c.v = Complex(-2.0) * euclidean_inner(a, b);
    c.singular = {phi1, phi2};
  }
  c.provenance = Provenance::homogeneous_sum;
  c.grade_support = {1};
  out.verification.add("riccati(f)", Role::conclusion, riccati_residual(c, grid, opts));
  return out;
}

Construction euler_shift(const RiccatiCandidate& h, const MultivectorField& phi, const GridSpec& grid,
                         const ResidualOptions& opts) {
  if (h.f.signature() != phi.signature()) throw SignatureMismatch(h.f.dimension(), phi.dimension());
  require_vector(h, "h");
  require_scalar_field(phi, "phi");
  Construction out{h, {}};
  out.verification.add("riccati(h)", Role::precondition, riccati_residual(h, grid, opts));
  const MultivectorField dphi = dirac_field(phi);
  const GridSpec hgrid = candidate_grid(h, grid, opts);
  const auto phi_equation = [&](std::span<const double> p) {
    const Multivector lap = laplacian(phi, p);
    const Multivector inner = Multivector::scalar(phi.signature(), 2.0 * euclidean_inner(dphi(p), h.f(p)));
    return Sample{lap + inner, std::max(lap.norm(), inner.norm())};
  };
  out.verification.add("phi_equation", Role::precondition,
                       grid_residual(phi_equation, hgrid, opts.resolve(phi.mode())));
  if (!out.verification.preconditions_pass()) throw PreconditionError(out.verification);

  RiccatiCandidate& c = out.candidate;
  c.f = divide(dphi, phi) + h.f;
  c.provenance = Provenance::euler_shift;
  c.grade_support = {1};
  append_masks(c, {phi});
  out.verification.add("riccati(f)", Role::conclusion, riccati_residual(c, grid, opts));
  return out;
}

Construction euler_combine(const MultivectorField& phi1, const MultivectorField& phi2, Complex K,
                           const MultivectorField& v, const GridSpec& grid, const ResidualOptions& opts) {
  if (phi1.signature() != phi2.signature()) throw SignatureMismatch(phi1.dimension(), phi2.dimension());
  require_scalar_field(phi1, "phi1");
  require_scalar_field(phi2, "phi2");
  const RiccatiCandidate g = RiccatiCandidate::user(dirac_field(phi1), v);
  const RiccatiCandidate h = RiccatiCandidate::user(dirac_field(phi2), v);
  Construction out{g, {}};
  out.verification.add("riccati(g)", Role::precondition, riccati_residual(g, grid, opts));
  out.verification.add("riccati(h)", Role::precondition, riccati_residual(h, grid, opts));
  if (!out.verification.preconditions_pass()) throw PreconditionError(out.verification);

  const Signature sig = phi1.signature();
  const MultivectorField alpha = K * apply_function(Function::exp, phi1 - phi2);
  const MultivectorField denominator = alpha - MultivectorField::constant(Multivector::scalar(sig, 1.0));
  RiccatiCandidate& c = out.candidate;
  c.f = divide(alpha * g.f - h.f, denominator);
  c.v = v;
  c.provenance = Provenance::euler_combine;
  c.grade_support = {1};
  c.singular = {denominator};
  out.verification.add("riccati(f)", Role::conclusion, riccati_residual(c, grid, opts));
  return out;
}

FamilyGapReport family_gap_demo(const GridSpec& grid, const std::vector<Complex>& K_samples, double margin,
                                const ResidualOptions& opts) {
  const int n = grid.dimension();
  if (n < 3) throw InvalidArgument("the remark needs n >= 3");
  if (K_samples.empty()) throw InvalidArgument("no K samples");
  const Signature sig(n);
  const Multivector e3 = Multivector::basis(sig, 3);
  const MultivectorField minus_one = MultivectorField::constant(Multivector::scalar(sig, -1.0));

  FamilyGapReport out;
  out.margin = margin;
  out.verification.add("riccati(e3)", Role::conclusion,
                       riccati_residual(RiccatiCandidate::user(MultivectorField::constant(e3), minus_one), grid, opts));
  out.min_distance = std::numeric_limits<double>::infinity();
  for (Complex K : K_samples) {
    const std::string tag = "K=" + format_complex(K);
    const Construction member =
        euler_combine(MultivectorField::scalar(sig, make_variable(1)), MultivectorField::scalar(sig, make_variable(2)),
                      K, minus_one, grid, opts);
    for (const auto& r : member.verification.reports) out.verification.add(tag + " " + r.name, r.role, r.report);
    const GridSpec g = candidate_grid(member.candidate, grid, opts);
    const std::function<double(std::span<const double>)> gap = [&](std::span<const double> p) {
      return (member.candidate.f(p) - e3).norm();
    };
    double d = 0.0;
    for (double x : grid_map(gap, g)) d = std::max(d, x);
    out.distances.push_back({K, d});
    out.min_distance = std::min(out.min_distance, d);
  }
  out.pass = out.verification.pass() && out.min_distance >= margin;
  return out;
}

}  // namespace cliffop
