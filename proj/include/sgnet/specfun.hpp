#pragma once

// Special functions used by the interference and coverage expressions.
// All routines are pure and thread-safe.

namespace sgnet::specfun {

struct FnEvalPolicy {
  /// Below this |x| the Kummer function is summed directly; above it the
  /// incomplete-gamma identity takes over.
  double series_cutoff = 1.0;
  double abs_tol = 1e-12;
  int max_terms = 500;
};

/// Throws DomainError unless abs_tol > 0 and max_terms >= 50.
void validate(const FnEvalPolicy& policy);

/// Gamma(a) for a > 0. Throws DomainError at and left of the pole at 0.
double gamma_fn(double a);

/// Lower incomplete gamma  gamma(a, x) = int_0^x t^(a-1) e^(-t) dt,
/// for 0 < a < 1 and x >= 0 (x may be +inf).
double lower_inc_gamma(double a, double x, const FnEvalPolicy& policy = {});

/// 1F1(-delta; 1 - delta; -x) for 0 < delta < 1, x >= 0.
///
/// Uses  1F1(-d, 1-d, -x) = e^(-x) + x^d * gamma(1-d, x)  away from the
/// origin; the raw alternating series cancels badly for large x.
double kummer_1f1_neg(double delta, double x, const FnEvalPolicy& policy = {});

/// Direct summation of the Kummer series 1F1(a; b; z). Throws
/// ConvergenceError when max_terms is exhausted.
double kummer_1f1_series(double a, double b, double z, const FnEvalPolicy& policy = {});

/// Gauss hypergeometric 2F1(a, b; c; z) for -1 <= z < 1.
///
/// For z < -1/2 the Pfaff transformation maps the argument into [0, 1/2],
/// so z = -1 is accepted. Throws ConvergenceError for z outside [-1, 1)
/// and DomainError when c is a non-positive integer.
double gauss_2f1(double a, double b, double c, double z, const FnEvalPolicy& policy = {});

}  // namespace sgnet::specfun
