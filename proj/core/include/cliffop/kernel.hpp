#pragma once

// Splitting eigenfunctions of A^2 = d^f d^-f (resp. B^2 = d^-f d^f) into the
// kernels of two first-order operators, with A = M^{iE} d^-f and
// B = M^{iE} d^f. E is the pseudoscalar e_1...e_n (n = 2 mod 4) or, in
// last-axis mode, e_n with f confined to e_1..e_{n-1}.

#include "cliffop/darboux.hpp"

namespace cliffop {

enum class PseudoscalarMode { automatic, full, last_axis };

std::string_view mode_name(PseudoscalarMode m);
/// Throws InvalidArgument for an unknown name.
PseudoscalarMode parse_mode(std::string_view name);
/// full when n = 2 mod 4, else last_axis.
PseudoscalarMode resolve_mode(PseudoscalarMode m, int n);

struct PseudoscalarFrame {
  PseudoscalarMode mode = PseudoscalarMode::full;
  /// i E; squares to 1 and anticommutes with f.
  Multivector iE;
};

/// Throws ModeError when n != 2 mod 4 in full mode, when f has an e_n
/// component in last-axis mode, or when iE fails to anticommute with f at a
/// grid sample.
PseudoscalarFrame mode_check(PseudoscalarMode mode, const MultivectorField& f, const GridSpec& grid);

enum class KernelOperator { A, B };

/// (d g - g f)(iE)
Multivector apply_A(const MultivectorField& f, const PseudoscalarFrame& frame, const MultivectorField& g,
                    std::span<const double> p);
/// (d g + g f)(iE)
Multivector apply_B(const MultivectorField& f, const PseudoscalarFrame& frame, const MultivectorField& g,
                    std::span<const double> p);
MultivectorField kernel_operator_field(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                       const MultivectorField& g);

struct FirstOrderReport {
  /// d g - g(f -+ lambda iE) for A, d g + g(f +- lambda iE) for B.
  ResidualReport residual;
  /// ||(op +- lambda) g| - |first-order residual|| per sample.
  ResidualReport norm_equivalence;
};

/// Membership of g in ker(op + sign * lambda), sign = +1 or -1.
FirstOrderReport first_order_residual(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                      SpectralParam lambda, int sign, const MultivectorField& g, const GridSpec& grid,
                                      const ResidualOptions& opts = {});

struct DecompositionResult {
  /// (1/2 lambda)(op + lambda) g, in ker(op - lambda).
  MultivectorField g_plus;
  /// -(1/2 lambda)(op - lambda) g, in ker(op + lambda).
  MultivectorField g_minus;
  Complex lambda;
  KernelOperator op = KernelOperator::A;
  PseudoscalarFrame frame;
  /// sup |g_plus + g_minus - g| over the grid.
  double reassembly_residual = 0.0;
  Verification verification;

  const ResidualReport& plus_kernel_report() const { return verification.get("kernel(g_plus)"); }
  const ResidualReport& minus_kernel_report() const { return verification.get("kernel(g_minus)"); }
  bool pass() const { return verification.pass(); }
};

/// Throws PreconditionError unless (op^2 - lambda^2) g vanishes on the grid.
DecompositionResult split_kernel(KernelOperator op, const MultivectorField& f, const PseudoscalarFrame& frame,
                                 SpectralParam lambda, const MultivectorField& g, const GridSpec& grid,
                                 const ResidualOptions& opts = {});

/// phi with (-lap - v) phi = lambda^2 phi split by A; c must solve the
/// Riccati equation for v.
DecompositionResult decompose_schrodinger_solution(const RiccatiCandidate& c, PseudoscalarMode mode,
                                                   SpectralParam lambda, const MultivectorField& phi,
                                                   const GridSpec& grid, const ResidualOptions& opts = {});

/// phi with (-lap + u) phi = lambda^2 phi, u = df - f^2 scalar, split by B.
DecompositionResult decompose_dual_solution(const MultivectorField& f, PseudoscalarMode mode, SpectralParam lambda,
                                            const MultivectorField& phi, const GridSpec& grid,
                                            const ResidualOptions& opts = {});

}  // namespace cliffop
