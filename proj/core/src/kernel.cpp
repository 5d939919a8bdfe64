#include "cliffop/kernel.hpp"

#include <cmath>
#include <string>

#include "cliffop/errors.hpp"
#include "field_util.hpp"

namespace cliffop {

namespace {

using detail::largest;
using detail::mode_of;
using detail::require_preconditions;

constexpr double kNormEquivalenceTol = 1e-12;
constexpr double kAnticommuteTol = 1e-12;

constexpr std::pair<PseudoscalarMode, std::string_view> kModeNames[] = {
    {PseudoscalarMode::automatic, "auto"},
    {PseudoscalarMode::full, "full"},
    {PseudoscalarMode::last_axis, "last_axis"},
};

void check_pair(const MultivectorField& a, const MultivectorField& b) {
  if (a.signature() != b.signature()) throw SignatureMismatch(a.dimension(), b.dimension());
}

Multivector apply_op(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                     const MultivectorField& g, std::span<const double> p) {
  return op == KernelOperator::A ? apply_A(f, frame, g, p) : apply_B(f, frame, g, p);
}

std::string point_text(std::span<const double> p) {
  std::string s;
  for (double x : p) s += (s.empty() ? "" : ", ") + format_double(x);
  return "(" + s + ")";
}

}  // namespace

std::string_view mode_name(PseudoscalarMode m) {
  for (const auto& [k, name] : kModeNames) {
    if (k == m) return name;
  }
  return "auto";
}

PseudoscalarMode parse_mode(std::string_view name) {
  for (const auto& [k, n] : kModeNames) {
    if (n == name) return k;
  }
  throw InvalidArgument("unknown pseudoscalar mode '" + std::string(name) + "'");
}

PseudoscalarMode resolve_mode(PseudoscalarMode m, int n) {
  if (m != PseudoscalarMode::automatic) return m;
  return n % 4 == 2 ? PseudoscalarMode::full : PseudoscalarMode::last_axis;
}

PseudoscalarFrame mode_check(PseudoscalarMode mode, const MultivectorField& f, const GridSpec& grid) {
  const Signature sig = f.signature();
  const int n = sig.dimension();
  const Complex i(0.0, 1.0);
  const PseudoscalarMode resolved = resolve_mode(mode, n);
  if (resolved == PseudoscalarMode::full && n % 4 != 2) {
    throw ModeError("full pseudoscalar mode needs n = 2 mod 4, got n = " + std::to_string(n) + " where (i e_N)^2 = -1");
  }
  if (resolved == PseudoscalarMode::last_axis) {
    if (auto e = f.expressions(); e && e->count(Blade::from_indices({n}))) {
      throw ModeError("last-axis mode needs f without an e" + std::to_string(n) + " component");
    }
  }
  const PseudoscalarFrame frame{
      resolved, i * (resolved == PseudoscalarMode::full ? pseudoscalar(sig) : Multivector::basis(sig, n))};
  if (!(frame.iE * frame.iE == Multivector::scalar(sig, 1.0))) throw ModeError("(iE)^2 != 1");

  const auto points = grid.points();
  const auto gaps = grid_map<double>(
      [&](std::span<const double> p) {
        const Multivector fv = f(p);
        return (frame.iE * fv + fv * frame.iE).norm() / (1.0 + fv.norm());
      },
      points, grid.threads);
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (!(gaps[k] <= kAnticommuteTol)) {
      throw ModeError("iE does not anticommute with f at " + point_text(points[k]));
    }
  }
  return frame;
}

Multivector apply_A(const MultivectorField& f, const PseudoscalarFrame& frame, const MultivectorField& g,
                    std::span<const double> p) {
  check_pair(f, g);
  return (dirac(g, p) - g(p) * f(p)) * frame.iE;
}

Multivector apply_B(const MultivectorField& f, const PseudoscalarFrame& frame, const MultivectorField& g,
                    std::span<const double> p) {
  check_pair(f, g);
  return (dirac(g, p) + g(p) * f(p)) * frame.iE;
}

MultivectorField kernel_operator_field(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                       const MultivectorField& g) {
  const OperatorSign s = op == KernelOperator::A ? OperatorSign::minus : OperatorSign::plus;
  return FactorizedOperator{f, s}.apply_field(g) * MultivectorField::constant(frame.iE);
}

FirstOrderReport first_order_residual(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                      SpectralParam lambda, int sign, const MultivectorField& g, const GridSpec& grid,
                                      const ResidualOptions& opts) {
  check_pair(f, g);
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const Complex sl = static_cast<double>(sign) * lambda.value();
  const Signature sig = f.signature();
  // (op + s lambda) g (iE) = d g - g(f - s lambda iE) for A, d g + g(f + s lambda iE) for B
  auto first_order = [&](std::span<const double> p) {
    const Multivector dg = dirac(g, p);
    if (op == KernelOperator::A) {
      const Multivector tail = g(p) * (f(p) - sl * frame.iE);
      return std::pair{dg - tail, largest({dg, tail})};
    }
    const Multivector tail = g(p) * (f(p) + sl * frame.iE);
    return std::pair{dg + tail, largest({dg, tail})};
  };

  FirstOrderReport out;
  out.residual = grid_residual(
      [&](std::span<const double> p) {
        auto [r, scale] = first_order(p);
        return Sample{r, scale};
      },
      grid, opts.resolve(mode_of({&f, &g})));
  out.norm_equivalence = grid_residual(
      [&](std::span<const double> p) {
        const Multivector shifted = apply_op(op, f, frame, g, p) + sl * g(p);
        const double a = shifted.norm();
        const double b = first_order(p).first.norm();
        return Sample{Multivector::scalar(sig, a - b), std::max(a, b)};
      },
      grid, Tolerance::scaled(kNormEquivalenceTol));
  return out;
}

DecompositionResult split_kernel(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                 SpectralParam lambda, const MultivectorField& g, const GridSpec& grid,
                                 const ResidualOptions& opts) {
  check_pair(f, g);
  const Complex l = lambda.value();
  const Tolerance tol = opts.resolve(mode_of({&f, &g}));
  const MultivectorField opg = kernel_operator_field(op, f, frame, g);

  Verification ver;
  ver.add("square(g)", Role::precondition,
          grid_residual(
              [&](std::span<const double> p) {
                const Multivector lhs = apply_op(op, f, frame, opg, p);
                const Multivector rhs = lambda.squared() * g(p);
                return Sample{lhs - rhs, std::max(lhs.norm(), rhs.norm())};
              },
              grid, tol));
  require_preconditions(ver);

  const Complex c = 1.0 / (2.0 * l);
  DecompositionResult out{c * opg + 0.5 * g, -c * opg + 0.5 * g, l, op, frame, 0.0, std::move(ver)};

  auto plus = first_order_residual(op, f, frame, lambda, -1, out.g_plus, grid, opts);
  auto minus = first_order_residual(op, f, frame, lambda, 1, out.g_minus, grid, opts);
  out.verification.add("kernel(g_plus)", Role::conclusion, plus.residual);
  out.verification.add("kernel(g_minus)", Role::conclusion, minus.residual);
  out.verification.add("norm equivalence(g_plus)", Role::conclusion, plus.norm_equivalence);
  out.verification.add("norm equivalence(g_minus)", Role::conclusion, minus.norm_equivalence);
  auto reassembly = grid_residual(
      [&](std::span<const double> p) {
        const Multivector gv = g(p);
        return Sample{out.g_plus(p) + out.g_minus(p) - gv, gv.norm()};
      },
      grid, tol);
  out.reassembly_residual = reassembly.sup_norm;
  out.verification.add("reassembly", Role::conclusion, reassembly);
  return out;
}

DecompositionResult decompose_schrodinger_solution(const RiccatiCandidate& c, PseudoscalarMode mode,
                                                   SpectralParam lambda, const MultivectorField& phi,
                                                   const GridSpec& grid, const ResidualOptions& opts) {
  check_pair(c.f, phi);
  const GridSpec cg = candidate_grid(c, grid, opts);
  require_grade(c.f, 1, cg.point(0));
  require_grade(phi, 0, cg.point(0));
  const PseudoscalarFrame frame = mode_check(mode, c.f, cg);

  Verification v;
  v.add("riccati(f)", Role::precondition, riccati_residual(c, grid, opts));
  v.add("schrodinger(phi)", Role::precondition, scalar_schrodinger_residual(c.v, phi, lambda, cg, opts));
  require_preconditions(v);
  DecompositionResult out = split_kernel(KernelOperator::A, c.f, frame, lambda, phi, cg, opts);
  v.append(out.verification);
  out.verification = std::move(v);
  return out;
}

DecompositionResult decompose_dual_solution(const MultivectorField& f, PseudoscalarMode mode, SpectralParam lambda,
                                            const MultivectorField& phi, const GridSpec& grid,
                                            const ResidualOptions& opts) {
  check_pair(f, phi);
  require_grade(f, 1, grid.point(0));
  require_grade(phi, 0, grid.point(0));
  const PseudoscalarFrame frame = mode_check(mode, f, grid);
  const Tolerance tol = opts.resolve(mode_of({&f, &phi}));
  const MultivectorField u = dirac_field(f) - f * f;
  const Complex l2 = lambda.squared();

  Verification v;
  v.add("u scalar", Role::precondition, detail::scalar_check(u, grid, tol));
  v.add("eigen(phi)", Role::precondition,
        grid_residual(
            [&](std::span<const double> p) {
              const Multivector lap = laplacian(phi, p);
              const Multivector phiu = phi(p) * u(p);
              const Multivector eig = l2 * phi(p);
              return Sample{-lap + phiu - eig, largest({lap, phiu, eig})};
            },
            grid, tol));
  require_preconditions(v);
  DecompositionResult out = split_kernel(KernelOperator::B, f, frame, lambda, phi, grid, opts);
  v.append(out.verification);
  out.verification = std::move(v);
  return out;
}

}  // namespace cliffop
