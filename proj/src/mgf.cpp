#include "sgnet/mgf.hpp"

#include <cmath>
#include <numbers>

#include "sgnet/errors.hpp"
#include "sgnet/quadrature.hpp"
#include "sgnet/roots.hpp"
#include "sgnet/specfun.hpp"

namespace sgnet::mgf {
namespace {

// Exponential marks beyond this are below 1e-10 in probability.
const double kMarkTail = -std::log(1e-10);

void check_query(const MgfQuery& q) {
  if (!(q.s >= 0.0)) throw DomainError("MgfQuery: s must be >= 0");
  if (!(q.l0 > 0.0)) throw DomainError("MgfQuery: l0 must be > 0");
}

void check_p_active(double p_active) {
  if (!(p_active > 0.0 && p_active <= 1.0)) throw DomainError("p_active must lie in (0, 1]");
}

double normalized_argument(const MgfQuery& q, const NetworkParams& p) { return q.s * p.p_tx / q.l0; }

template <class M>
const M& require_mode(const MgfQuery& q, const char* op) {
  const M* m = std::get_if<M>(&q.mode);
  if (m == nullptr) throw DomainError(std::string(op) + ": query mode does not match operation");
  return *m;
}

// delta/(1-delta) * int_0^1 expm1(-a u)/u dv  with u = v^(1/(1-delta)).
// Equals delta * int_0^1 (e^(-a u) - 1) u^(-1-delta) du, the inner integral
// over path loss after y = l0/u; the power substitution removes the
// u^(-delta) endpoint singularity.
double inner_pathloss_integral(double a, double delta) {
  if (a == 0.0) return 0.0;
  const double power = 1.0 / (1.0 - delta);
  auto integrand = [a, power](double v) {
    const double u = std::pow(v, power);
    if (u == 0.0) return -a;
    return std::expm1(-a * u) / u;
  };
  quad::Options opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-13;
  const auto r = quad::integrate(integrand, 0.0, 1.0, opt);
  quad::require_converged(r, "mgf: inner path-loss integral");
  return delta / (1.0 - delta) * r.value;
}

}  // namespace

double c_fit(double beta) { return 0.06662 * std::log(beta - 1.528) + 1.227; }

double c_residual(double c, double beta) {
  const double delta = delta_of(beta);
  return -2.0 * c / (beta - 2.0) + c * c / (2.0 * beta - 2.0) +
         std::pow(c, delta) * specfun::gamma_fn(1.0 - delta) - 1.0;
}

IntersectionConstant solve_c(double beta) {
  check_beta(beta);
  const auto root = roots::brent([beta](double c) { return c_residual(c, beta); }, 1.0, 1.5, 1e-13);
  return {beta, root.root, c_fit(beta)};
}

double exact_bracket(double x, double beta) {
  check_beta(beta);
  return 1.0 - specfun::kummer_1f1_neg(delta_of(beta), x);
}

double taylor_bracket(double x, double beta, int n_terms) {
  check_beta(beta);
  if (n_terms < 1) throw DomainError("taylor_bracket: n_terms must be >= 1");
  double power_over_factorial = 1.0;  // (-x)^n / n!
  double sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    power_over_factorial *= -x / n;
    sum += 2.0 * power_over_factorial / (n * beta - 2.0);
  }
  return sum;
}

double upper_bracket(double x, double beta) {
  check_beta(beta);
  const double delta = delta_of(beta);
  return 1.0 - std::pow(x, delta) * specfun::gamma_fn(1.0 - delta);
}

double two_term_bracket(double x, double beta, double c) {
  return x <= c ? taylor_bracket(x, beta, 2) : upper_bracket(x, beta);
}

double rayleigh_bracket(double x, double beta) {
  check_beta(beta);
  if (!(x >= 0.0)) throw DomainError("rayleigh_bracket: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double delta = delta_of(beta);
  auto outer = [x, delta](double m) { return std::exp(-m) * inner_pathloss_integral(x * m, delta); };
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  const auto r = quad::integrate(outer, 0.0, kMarkTail, opt);
  quad::require_converged(r, "mgf: fading expectation");
  return r.value;
}

double degenerate_mark_bracket(double x, double beta) {
  check_beta(beta);
  if (!(x >= 0.0)) throw DomainError("degenerate_mark_bracket: x must be >= 0");
  return inner_pathloss_integral(x, delta_of(beta));
}

double prefactor(double l0, const NetworkParams& p) {
  return std::numbers::pi * p.lambda_bs * std::pow(l0 / p.kappa, delta_of(p.beta));
}

double mgf_exact(const MgfQuery& q, const NetworkParams& p) {
  require_mode<Exact>(q, "mgf_exact");
  check_query(q);
  p.validate();
  if (q.s == 0.0) return 1.0;
  return std::exp(prefactor(q.l0, p) * exact_bracket(normalized_argument(q, p), p.beta));
}

double mgf_approx(const MgfQuery& q, const NetworkParams& p, const IntersectionConstant& c) {
  require_mode<ApproxTwoTerm>(q, "mgf_approx");
  check_query(q);
  p.validate();
  if (q.s == 0.0) return 1.0;
  return std::exp(prefactor(q.l0, p) * two_term_bracket(normalized_argument(q, p), p.beta, c.c_exact));
}

double mgf_taylor_full(const MgfQuery& q, const NetworkParams& p, int n_terms,
                       const IntersectionConstant& c) {
  const auto& mode = require_mode<ApproxTaylor>(q, "mgf_taylor_full");
  check_query(q);
  p.validate();
  if (n_terms < 2) throw DomainError("mgf_taylor_full: n_terms must be >= 2");
  if (q.s == 0.0) return 1.0;
  const double x = normalized_argument(q, p);
  double bracket;
  if (x <= c.c_exact) {
    bracket = taylor_bracket(x, p.beta, n_terms);
  } else if (mode.force_lower_branch) {
    throw ConvergenceError("mgf_taylor_full: truncated series forced above the branch point", x);
  } else {
    bracket = upper_bracket(x, p.beta);
  }
  return std::exp(prefactor(q.l0, p) * bracket);
}

double mgf_rayleigh_marked(const MgfQuery& q, const NetworkParams& p) {
  require_mode<RayleighMarked>(q, "mgf_rayleigh_marked");
  check_query(q);
  p.validate();
  if (q.s == 0.0) return 1.0;
  return std::exp(prefactor(q.l0, p) * rayleigh_bracket(normalized_argument(q, p), p.beta));
}

double mgf_thinned(const MgfQuery& q, const NetworkParams& p, double p_active,
                   const IntersectionConstant& c) {
  const auto& mode = require_mode<Thinned>(q, "mgf_thinned");
  check_query(q);
  p.validate();
  check_p_active(p_active);
  if (q.s == 0.0) return 1.0;
  const double x = normalized_argument(q, p);
  const double bracket = mode.exact ? exact_bracket(x, p.beta) : two_term_bracket(x, p.beta, c.c_exact);
  return std::exp(prefactor(q.l0, p) * p_active * bracket);
}

double evaluate(const MgfQuery& q, const NetworkParams& p, const IntersectionConstant& c) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Exact>) return mgf_exact(q, p);
        else if constexpr (std::is_same_v<M, ApproxTwoTerm>) return mgf_approx(q, p, c);
        else if constexpr (std::is_same_v<M, ApproxTaylor>) return mgf_taylor_full(q, p, m.n_terms, c);
        else if constexpr (std::is_same_v<M, RayleighMarked>) return mgf_rayleigh_marked(q, p);
        else return mgf_thinned(q, p, m.p_active, c);
      },
      q.mode);
}

}  // namespace sgnet::mgf
