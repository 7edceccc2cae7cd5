#pragma once

// Moment generating function of the aggregate other-cell interference seen
// by a user at the origin whose serving path loss is l0.
//
// Every mode has the form  exp(pi * lambda * (l0/kappa)^delta * bracket(x)),
// with x = s * p_tx / l0. The bracket depends on x and beta only, which is
// why approximation quality does not depend on the BS density.

#include <variant>

#include "sgnet/network.hpp"

namespace sgnet::mgf {

struct Exact {};
struct ApproxTwoTerm {};
struct ApproxTaylor {
  int n_terms = 2;
  /// Insist on the series above the branch point. The truncated series is
  /// not a valid bracket there, so such queries throw ConvergenceError.
  bool force_lower_branch = false;
};
struct RayleighMarked {};
struct Thinned {
  double p_active = 1.0;
  bool exact = false;  ///< thin the exact MGF instead of the two-term one
};

using Mode = std::variant<Exact, ApproxTwoTerm, ApproxTaylor, RayleighMarked, Thinned>;

struct MgfQuery {
  double s = 0.0;   ///< MGF argument (1/W), s >= 0
  double l0 = 1.0;  ///< serving path loss, > 0
  Mode mode = Exact{};
};

/// Branch point of the piecewise approximation for one path-loss exponent.
struct IntersectionConstant {
  double beta = 4.0;
  double c_exact = 0.0;  ///< root of the branch-equality equation
  double c_fit = 0.0;    ///< 0.06662 log(beta - 1.528) + 1.227
};

/// Solves the branch-equality equation on [1.0, 1.5] with Brent's method.
/// Throws NoRootError when the residual does not change sign there.
IntersectionConstant solve_c(double beta);

/// The logarithmic fit of c against beta.
double c_fit(double beta);

/// Residual of the branch-equality equation at c (zero at the root).
double c_residual(double c, double beta);

// Bracket functions at unit prefactor. All are <= 0 for x >= 0.

/// 1 - 1F1(-delta; 1 - delta; -x).
double exact_bracket(double x, double beta);
/// sum_{n=1}^{n_terms} 2 (-x)^n / (n! (n beta - 2)).
double taylor_bracket(double x, double beta, int n_terms);
/// 1 - x^delta Gamma(1 - delta), the large-x asymptote.
double upper_bracket(double x, double beta);
/// Two-term series for x <= c, asymptote above.
double two_term_bracket(double x, double beta, double c);
/// E_m[1 - 1F1(-delta; 1 - delta; -x m)] for unit-mean exponential m,
/// computed by nested adaptive quadrature.
double rayleigh_bracket(double x, double beta);
/// The same nested quadrature with a degenerate mark m = 1.
double degenerate_mark_bracket(double x, double beta);

/// pi * lambda * (l0 / kappa)^delta.
double prefactor(double l0, const NetworkParams& p);

double mgf_exact(const MgfQuery& q, const NetworkParams& p);
double mgf_approx(const MgfQuery& q, const NetworkParams& p, const IntersectionConstant& c);
double mgf_taylor_full(const MgfQuery& q, const NetworkParams& p, int n_terms,
                       const IntersectionConstant& c);
double mgf_rayleigh_marked(const MgfQuery& q, const NetworkParams& p);
double mgf_thinned(const MgfQuery& q, const NetworkParams& p, double p_active,
                   const IntersectionConstant& c);

/// Dispatches on q.mode.
double evaluate(const MgfQuery& q, const NetworkParams& p, const IntersectionConstant& c);

}  // namespace sgnet::mgf
