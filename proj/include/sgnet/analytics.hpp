#pragma once

// Coverage probability and ergodic rate of the typical user, fully loaded
// and with idle-mode thinning. Rates are in nats/s/Hz.

#include <span>
#include <string>
#include <vector>

#include "sgnet/mgf.hpp"
#include "sgnet/network.hpp"

namespace sgnet::analytics {

enum class PcovKind { Exact, Approx };

// ---------------------------------------------------------------------------
// Coverage

/// 1 / 1F1(-2/beta; 1 - 2/beta; -gamma). Interference limited, fully loaded.
double pcov_exact_full(double gamma, double beta);

/// Piecewise approximation: quadratic denominator up to c, power law above.
double pcov_approx_full(double gamma, double beta, const mgf::IntersectionConstant& c);

struct PartialLoadCoverage {
  double exact;
  double approx;
};

/// Coverage when only a fraction p_active of the BSs transmit.
PartialLoadCoverage pcov_partial_load(double gamma, double beta, double p_active,
                                      const mgf::IntersectionConstant& c);

/// Coverage of one kind at load p_active; the integrand of the rate integral.
double pcov(double gamma, double beta, double p_active, PcovKind kind,
            const mgf::IntersectionConstant& c);

/// Coverage through the path-loss integral  int exp(-gamma y sigma^2 / p_tx)
/// M_g(gamma y / p_tx; y) f_L(y) dy  evaluated by quadrature. This is the
/// only route that accounts for noise; with sigma_n2 = 0 it must reproduce
/// the closed forms for any lambda.
double pcov_integral(double gamma, const NetworkParams& p, double p_active, PcovKind kind,
                     const mgf::IntersectionConstant& c);

struct CoverageCurve {
  std::vector<double> gamma_grid;
  std::vector<double> pcov_exact;
  std::vector<double> pcov_approx;
  double p_active = 1.0;
};

CoverageCurve coverage_curve(std::span<const double> gamma_grid, double beta, double p_active,
                             const mgf::IntersectionConstant& c);

// ---------------------------------------------------------------------------
// Load

struct LoadModel {
  double ratio = 0.0;  ///< lambda_ue / lambda_bs
  double p_inactive = 1.0;
  double p_active = 0.0;
  double p_selection = 1.0;
};

/// Idle probability (1 + ratio/3.5)^-3.5 of a BS with an empty Voronoi cell,
/// its complement, and the probability that a UE holds the resource.
LoadModel load_model(double lambda_ue, double lambda_bs);

// ---------------------------------------------------------------------------
// Serving path loss

struct PathLossPdf {
  double lambda_bs;
  double beta;
  double kappa;

  double pdf(double y) const;
  double cdf(double y) const;
  /// y with cdf(y) = q.
  double quantile(double q) const;
};

// ---------------------------------------------------------------------------
// Rate

enum class RateMethod { ClosedFormGeneral, ClosedFormTabulated, Quadrature, MonteCarlo };
enum class RateRegime { Normal, NoInterference };

std::string to_string(RateMethod m);

struct RateResult {
  double value = 0.0;
  RateMethod method = RateMethod::Quadrature;
  double std_error = 0.0;    ///< standard error, Monte Carlo only
  double abs_error = 0.0;    ///< quadrature error estimate, when applicable
  bool quarantined = false;  ///< a closed form was rejected by its audit
  RateRegime regime = RateRegime::Normal;
};

/// Below this p_active the rate integral is treated as divergent.
inline constexpr double kMinActiveProbability = 1e-6;

/// int_0^inf pcov(w) / (1 + w) dw by adaptive quadrature with a log-mapped
/// upper range and an analytic power-law tail. Ground truth for every
/// closed form. Throws DomainError for p_active < 1e-6.
RateResult rate_quadrature(double beta, double p_active, PcovKind kind,
                           const mgf::IntersectionConstant& c);

/// Half-width of the beta window around the roots of 2 beta^2 - 11 beta + 10
/// in which the general closed form is not evaluated.
inline constexpr double kSingularWindow = 0.02;

/// The general-beta closed form of the fully loaded approximate rate, as an
/// expression. Throws NearSingularityError inside the singular window.
double closed_form_rate_expression(double beta, const mgf::IntersectionConstant& c);

/// Closed-form rate, substituting quadrature inside the singular window.
RateResult rate_closed_general(double beta, const mgf::IntersectionConstant& c);

/// Tabulated peak-rate closed forms for beta = 3 and beta = 4, evaluated as
/// printed. May return NaN where the printed expression leaves the reals.
double tabulated_peak_rate(int beta, double p_active, double c);

inline constexpr double kTabulatedFormTolerance = 1e-6;

struct TabulatedFormAudit {
  int beta = 0;
  std::vector<double> p_active;
  std::vector<double> closed_form;
  std::vector<double> quadrature;
  double max_abs_discrepancy = 0.0;
  bool quarantined = false;
  std::string report() const;
};

/// Compares the tabulated closed form against quadrature on
/// p_active = 0.1, 0.2, ..., 1.0. Quarantined when any point differs by
/// more than kTabulatedFormTolerance or is not finite.
TabulatedFormAudit audit_tabulated_forms(int beta, const mgf::IntersectionConstant& c);

/// Peak rate at load p_active for beta in {3, 4}: the tabulated closed form
/// when it passes its audit, the quadrature otherwise.
RateResult rate_peak_partial_load(double beta, double p_active, const mgf::IntersectionConstant& c);

/// Peak rate at any beta and load (closed form where available).
RateResult rate_peak(double beta, double p_active, const mgf::IntersectionConstant& c);

/// Peak rate times p_selection. For p_active below 1e-6 no interferer is
/// active; the result is +inf flagged RateRegime::NoInterference.
RateResult rate_actual(double beta, double lambda_ue, double lambda_bs,
                       const mgf::IntersectionConstant& c);

}  // namespace sgnet::analytics
