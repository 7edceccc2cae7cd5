#include "sgnet/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sgnet/errors.hpp"

namespace sgnet::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// gamma(a, x) by its power series; valid and fast for x < a + 1.
double lower_gamma_series(double a, double x, const FnEvalPolicy& policy) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= policy.max_terms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum)) {
      return sum * std::exp(-x + a * std::log(x));
    }
  }
  throw ConvergenceError("lower_inc_gamma: series exhausted max_terms", std::abs(term));
}

// Gamma(a, x) by the Legendre continued fraction (modified Lentz); x >= a + 1.
double upper_gamma_fraction(double a, double x, const FnEvalPolicy& policy) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= policy.max_terms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= kEps) return std::exp(-x + a * std::log(x)) * h;
  }
  throw ConvergenceError("lower_inc_gamma: continued fraction exhausted max_terms", h);
}

}  // namespace

void validate(const FnEvalPolicy& policy) {
  if (!(policy.abs_tol > 0.0)) throw DomainError("FnEvalPolicy: abs_tol must be > 0");
  if (policy.max_terms < 50) throw DomainError("FnEvalPolicy: max_terms must be >= 50");
}

double gamma_fn(double a) {
  if (!(a > 0.0)) throw DomainError("gamma_fn: pole or negative argument (a <= 0)");
  return std::tgamma(a);
}

double lower_inc_gamma(double a, double x, const FnEvalPolicy& policy) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("lower_inc_gamma: a must lie in (0, 1)");
  if (!(x >= 0.0)) throw DomainError("lower_inc_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(a);
  if (x < a + 1.0) return lower_gamma_series(a, x, policy);
  return std::tgamma(a) - upper_gamma_fraction(a, x, policy);
}

double kummer_1f1_series(double a, double b, double z, const FnEvalPolicy& policy) {
  if (is_nonpositive_integer(b)) throw DomainError("kummer_1f1_series: b is a non-positive integer");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < policy.max_terms; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum)) return sum;
  }
  throw ConvergenceError("kummer_1f1_series: exhausted max_terms", std::abs(term));
}

double kummer_1f1_neg(double delta, double x, const FnEvalPolicy& policy) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("kummer_1f1_neg: delta must lie in (0, 1)");
  if (!(x >= 0.0)) throw DomainError("kummer_1f1_neg: x must be >= 0");
  if (x <= policy.series_cutoff) return kummer_1f1_series(-delta, 1.0 - delta, -x, policy);
  if (std::isinf(x)) return x;
  return std::exp(-x) + std::pow(x, delta) * lower_inc_gamma(1.0 - delta, x, policy);
}

double gauss_2f1(double a, double b, double c, double z, const FnEvalPolicy& policy) {
  if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
  if (!(z >= -1.0 && z < 1.0)) {
    throw ConvergenceError("gauss_2f1: series diverges for |z| >= 1", std::abs(z));
  }
  double prefactor = 1.0;
  if (z < -0.5) {
    // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)).
    prefactor = std::pow(1.0 - z, -a);
    b = c - b;
    z = z / (z - 1.0);
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < policy.max_terms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum)) return prefactor * sum;
  }
  throw ConvergenceError("gauss_2f1: exhausted max_terms", std::abs(term));
}

}  // namespace sgnet::specfun
