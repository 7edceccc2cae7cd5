#include "sgnet/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "sgnet/errors.hpp"
#include "sgnet/quadrature.hpp"
#include "sgnet/specfun.hpp"

namespace sgnet::analytics {
namespace {

constexpr double kPi = std::numbers::pi;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("SIR threshold gamma must be >= 0");
}

void check_p_active(double p_active) {
  if (!(p_active > 0.0 && p_active <= 1.0)) throw DomainError("p_active must lie in (0, 1]");
}

double bracket(double gamma, double beta, PcovKind kind, const mgf::IntersectionConstant& c) {
  return kind == PcovKind::Exact ? mgf::exact_bracket(gamma, beta)
                                 : mgf::two_term_bracket(gamma, beta, c.c_exact);
}

bool near_singular_root(double beta) {
  const double disc = std::sqrt(41.0);
  const double r1 = (11.0 - disc) / 4.0;
  const double r2 = (11.0 + disc) / 4.0;
  return std::abs(beta - r1) < kSingularWindow || std::abs(beta - r2) < kSingularWindow;
}

double tabulated_beta3(double p, double c) {
  const double g = std::tgamma(1.0 / 3.0);
  const double b = 2.0 * std::sqrt(4.0 + 1.0 / p);
  const double c3 = std::cbrt(c);
  const double pg = p * g;
  const double sq3 = std::sqrt(3.0);

  double r = -4.0 / p *
             (std::log((c - 4.0 + b) / (-4.0 + b)) / (2.0 * b * (-5.0 + b)) +
              std::log((c - 4.0 - b) / (-4.0 - b)) / (2.0 * b * (5.0 + b)) -
              std::log(c + 1.0) / ((-5.0 + b) * (5.0 + b)));
  r -= sq3 * p * std::atan((-1.0 + 2.0 * c3) / sq3) * g /
       (1.0 + p * (-2.0 + p + (p - 1.0) * g + p * g * g));

  const double inner =
      sq3 * pg * pg * kPi - 2.0 * pg * (-1.0 + p * (1.0 + g)) * std::log(1.0 + c3) +
      pg * (-1.0 + p * (1.0 + g)) * std::log(1.0 - c3 + c3 * c3) +
      (p - 1.0) * (p - 1.0) *
          (-2.0 * std::log(1.0 + c) - 3.0 * std::log(pg) +
           3.0 * std::log(1.0 - p * (-1.0 + c3 * c3 * g)));
  const double numer = -std::pow(1.0 - p, 1.5) * p * kPi * (-sq3 + 3.0 * std::sqrt(-pg / (p - 1.0))) * g -
                       6.0 * (p - 1.0) * std::pow(pg, 1.5) * std::atan(std::sqrt(pg / (1.0 - p)) * c3) +
                       std::sqrt(1.0 - p) * inner;
  const double denom = 2.0 * std::sqrt(1.0 - p) * (-std::pow(p - 1.0, 3) + std::pow(pg, 3));
  return r + numer / denom;
}

double tabulated_beta4(double p, double c) {
  const double b = std::sqrt(9.0 + 6.0 / p);
  double r = -6.0 / p *
             (std::log((c - 3.0 + b) / (-3.0 + b)) / (2.0 * b * (-4.0 + b)) +
              std::log((c - 3.0 - b) / (-3.0 - b)) / (2.0 * b * (4.0 + b)) -
              std::log(c + 1.0) / ((-4.0 + b) * (4.0 + b)));
  const double denom = 1.0 + p * (-2.0 + p * (1.0 + kPi));
  r += (-2.0 * std::log(p) * (1.0 + p) + (p - 1.0) * std::log((1.0 + c) * kPi)) / denom;
  r += (std::pow(kPi, 1.5) * p - 2.0 * std::sqrt(kPi) * p * std::atan(std::sqrt(c)) -
        2.0 * (p - 1.0) * std::log(1.0 - p + std::sqrt(kPi * c) * p)) /
       denom;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

double pcov_exact_full(double gamma, double beta) {
  check_beta(beta);
  check_gamma(gamma);
  return 1.0 / specfun::kummer_1f1_neg(delta_of(beta), gamma);
}

double pcov_approx_full(double gamma, double beta, const mgf::IntersectionConstant& c) {
  check_beta(beta);
  check_gamma(gamma);
  const double delta = delta_of(beta);
  if (gamma <= c.c_exact) {
    return 1.0 / (-gamma * gamma / (2.0 * beta - 2.0) + 2.0 * gamma / (beta - 2.0) + 1.0);
  }
  return 1.0 / (std::pow(gamma, delta) * specfun::gamma_fn(1.0 - delta));
}

double pcov(double gamma, double beta, double p_active, PcovKind kind,
            const mgf::IntersectionConstant& c) {
  check_p_active(p_active);
  if (p_active == 1.0) {
    return kind == PcovKind::Exact ? pcov_exact_full(gamma, beta) : pcov_approx_full(gamma, beta, c);
  }
  check_beta(beta);
  check_gamma(gamma);
  return 1.0 / (1.0 - p_active * bracket(gamma, beta, kind, c));
}

PartialLoadCoverage pcov_partial_load(double gamma, double beta, double p_active,
                                      const mgf::IntersectionConstant& c) {
  return {pcov(gamma, beta, p_active, PcovKind::Exact, c),
          pcov(gamma, beta, p_active, PcovKind::Approx, c)};
}

double pcov_integral(double gamma, const NetworkParams& p, double p_active, PcovKind kind,
                     const mgf::IntersectionConstant& c) {
  p.validate();
  check_gamma(gamma);
  check_p_active(p_active);
  const double delta = delta_of(p.beta);
  const PathLossPdf law{p.lambda_bs, p.beta, p.kappa};
  const double y_scale = law.quantile(0.5);
  const double b = bracket(gamma, p.beta, kind, c);

  // y = y_scale * u^(1/delta) cancels the y^(delta - 1) factor of the pdf.
  auto integrand = [&](double u) {
    if (u == 0.0) u = std::numeric_limits<double>::min();
    const double y = y_scale * std::pow(u, 1.0 / delta);
    const double dy_du = y_scale / delta * std::pow(u, 1.0 / delta - 1.0);
    const double noise = std::exp(-gamma * y * p.sigma_n2 / p.p_tx);
    const double mgf_value = std::exp(mgf::prefactor(y, p) * p_active * b);
    return noise * mgf_value * law.pdf(y) * dy_du;
  };
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  const auto r = quad::integrate_to_infinity(integrand, 0.0, 1.0, opt);
  quad::require_converged(r, "pcov_integral");
  return r.value;
}

CoverageCurve coverage_curve(std::span<const double> gamma_grid, double beta, double p_active,
                             const mgf::IntersectionConstant& c) {
  CoverageCurve curve;
  curve.p_active = p_active;
  curve.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
  curve.pcov_exact.reserve(gamma_grid.size());
  curve.pcov_approx.reserve(gamma_grid.size());
  for (double g : gamma_grid) {
    const auto v = pcov_partial_load(g, beta, p_active, c);
    curve.pcov_exact.push_back(v.exact);
    curve.pcov_approx.push_back(v.approx);
  }
  return curve;
}

// ---------------------------------------------------------------------------

LoadModel load_model(double lambda_ue, double lambda_bs) {
  if (!(lambda_bs > 0.0)) throw DomainError("load_model: lambda_bs must be > 0");
  if (!(lambda_ue >= 0.0)) throw DomainError("load_model: lambda_ue must be >= 0");
  LoadModel m;
  m.ratio = lambda_ue / lambda_bs;
  // log1p/expm1 keep p_active accurate as ratio -> 0.
  const double log_inactive = -3.5 * std::log1p(m.ratio / 3.5);
  m.p_inactive = std::exp(log_inactive);
  m.p_active = -std::expm1(log_inactive);
  m.p_selection = m.ratio > 0.0 ? m.p_active / m.ratio : 1.0;
  return m;
}

// ---------------------------------------------------------------------------

double PathLossPdf::pdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  const double delta = delta_of(beta);
  const double z = kPi * lambda_bs * std::pow(y / kappa, delta);
  return delta * z / y * std::exp(-z);
}

double PathLossPdf::cdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  return -std::expm1(-kPi * lambda_bs * std::pow(y / kappa, delta_of(beta)));
}

double PathLossPdf::quantile(double q) const {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("PathLossPdf::quantile: q must lie in [0, 1)");
  return kappa * std::pow(-std::log1p(-q) / (kPi * lambda_bs), 1.0 / delta_of(beta));
}

// ---------------------------------------------------------------------------

std::string to_string(RateMethod m) {
  switch (m) {
    case RateMethod::ClosedFormGeneral: return "closed_form_general";
    case RateMethod::ClosedFormTabulated: return "closed_form_tabulated";
    case RateMethod::Quadrature: return "quadrature";
    case RateMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

RateResult rate_quadrature(double beta, double p_active, PcovKind kind,
                           const mgf::IntersectionConstant& c) {
  check_beta(beta);
  if (!(p_active >= kMinActiveProbability && p_active <= 1.0)) {
    throw DomainError("rate_quadrature: p_active must lie in [1e-6, 1]; the rate diverges as p_active -> 0");
  }
  const double delta = delta_of(beta);
  const double gamma_c = specfun::gamma_fn(1.0 - delta);
  const double w_split = c.c_exact;

  quad::Options opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-13;

  auto head = [&](double w) { return pcov(w, beta, p_active, kind, c) / (1.0 + w); };
  const auto near = quad::integrate(head, 0.0, w_split, opt);
  quad::require_converged(near, "rate_quadrature (near range)");

  // Leading-order tail beyond W: int_W^inf dw / (p Gamma w^(1+delta)).
  // W is chosen so the tail is below 5e-11.
  const double tail_target = 5e-11;
  const double log_w_max = std::max(std::log(w_split) + 1.0,
                                    -std::log(tail_target * delta * p_active * gamma_c) / delta);
  auto far_integrand = [&](double t) {
    const double w = std::exp(t);
    return pcov(w, beta, p_active, kind, c) * w / (1.0 + w);
  };
  const auto far = quad::integrate(far_integrand, std::log(w_split), log_w_max, opt);
  quad::require_converged(far, "rate_quadrature (far range)");
  const double tail = std::exp(-delta * log_w_max) / (delta * p_active * gamma_c);

  RateResult out;
  out.value = near.value + far.value + tail;
  out.method = RateMethod::Quadrature;
  out.abs_error = near.abs_error + far.abs_error + tail;
  return out;
}

double closed_form_rate_expression(double beta, const mgf::IntersectionConstant& c) {
  check_beta(beta);
  if (near_singular_root(beta)) {
    throw NearSingularityError("closed-form rate: beta within 0.02 of a root of 2 beta^2 - 11 beta + 10");
  }
  const double cc = c.c_exact;
  const double delta = delta_of(beta);
  const double k = (2.0 * beta - 2.0) / (beta - 2.0);
  const double alpha = std::sqrt(k * k + 2.0 * beta - 2.0);
  const double d = 10.0 - 11.0 * beta + 2.0 * beta * beta;

  const double lower =
      (2.0 * beta - 2.0) *
      ((4.0 + 2.0 * alpha - 3.0 * beta - alpha * beta) / (2.0 * alpha * d) *
           std::log((cc + alpha - k) / (alpha - k)) +
       (-4.0 + 2.0 * alpha + 3.0 * beta - alpha * beta) / (2.0 * alpha * d) *
           std::log((cc - alpha - k) / (-alpha - k)) +
       (beta - 2.0) / d * std::log(cc + 1.0));
  const double upper = beta * std::pow(cc, -delta) / (2.0 * specfun::gamma_fn(1.0 - delta)) *
                       specfun::gauss_2f1(1.0, delta, (2.0 + beta) / beta, -1.0 / cc);
  return lower + upper;
}

RateResult rate_closed_general(double beta, const mgf::IntersectionConstant& c) {
  try {
    RateResult r;
    r.value = closed_form_rate_expression(beta, c);
    r.method = RateMethod::ClosedFormGeneral;
    return r;
  } catch (const NearSingularityError&) {
    return rate_quadrature(beta, 1.0, PcovKind::Approx, c);
  }
}

double tabulated_peak_rate(int beta, double p_active, double c) {
  if (!(p_active > 0.0 && p_active <= 1.0)) throw DomainError("tabulated form: p_active must lie in (0, 1]");
  if (beta == 3) return tabulated_beta3(p_active, c);
  if (beta == 4) return tabulated_beta4(p_active, c);
  throw DomainError("tabulated form: closed forms exist for beta = 3 and beta = 4 only");
}

std::string TabulatedFormAudit::report() const {
  std::ostringstream os;
  os << "beta=" << beta << (quarantined ? " QUARANTINED" : " accepted")
     << " max|closed-quadrature|=" << max_abs_discrepancy << "\n";
  os << "p_active,closed_form,quadrature,abs_diff\n";
  for (std::size_t i = 0; i < p_active.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "%.1f,%.10g,%.10g,%.3g\n", p_active[i], closed_form[i], quadrature[i],
                  std::abs(closed_form[i] - quadrature[i]));
    os << line;
  }
  return os.str();
}

TabulatedFormAudit audit_tabulated_forms(int beta, const mgf::IntersectionConstant& c) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, TabulatedFormAudit> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({beta, c.c_exact});
    if (it != cache.end()) return it->second;
  }
  TabulatedFormAudit audit;
  audit.beta = beta;
  for (int i = 1; i <= 10; ++i) {
    const double p = i / 10.0;
    const double closed = tabulated_peak_rate(beta, p, c.c_exact);
    const double reference = rate_quadrature(beta, p, PcovKind::Approx, c).value;
    audit.p_active.push_back(p);
    audit.closed_form.push_back(closed);
    audit.quadrature.push_back(reference);
    const double diff = std::abs(closed - reference);
    if (!std::isfinite(closed) || !(diff <= kTabulatedFormTolerance)) audit.quarantined = true;
    audit.max_abs_discrepancy = std::isfinite(diff) ? std::max(audit.max_abs_discrepancy, diff)
                                                    : std::numeric_limits<double>::infinity();
  }
  std::lock_guard lock(mu);
  cache.emplace(std::pair{beta, c.c_exact}, audit);
  return audit;
}

RateResult rate_peak_partial_load(double beta, double p_active, const mgf::IntersectionConstant& c) {
  if (beta != 3.0 && beta != 4.0) throw DomainError("rate_peak_partial_load: beta must be 3 or 4");
  if (!(p_active >= kMinActiveProbability && p_active <= 1.0)) {
    throw DomainError("rate_peak_partial_load: p_active must lie in [1e-6, 1]");
  }
  const int b = static_cast<int>(beta);
  const TabulatedFormAudit audit = audit_tabulated_forms(b, c);
  if (!audit.quarantined) {
    const double value = tabulated_peak_rate(b, p_active, c.c_exact);
    if (std::isfinite(value)) {
      RateResult r;
      r.value = value;
      r.method = RateMethod::ClosedFormTabulated;
      return r;
    }
  }
  RateResult r = rate_quadrature(beta, p_active, PcovKind::Approx, c);
  r.quarantined = audit.quarantined;
  return r;
}

RateResult rate_peak(double beta, double p_active, const mgf::IntersectionConstant& c) {
  if (p_active == 1.0) return rate_closed_general(beta, c);
  if (beta == 3.0 || beta == 4.0) return rate_peak_partial_load(beta, p_active, c);
  return rate_quadrature(beta, p_active, PcovKind::Approx, c);
}

RateResult rate_actual(double beta, double lambda_ue, double lambda_bs,
                       const mgf::IntersectionConstant& c) {
  check_beta(beta);
  const LoadModel load = load_model(lambda_ue, lambda_bs);
  if (load.p_active < kMinActiveProbability) {
    RateResult r;
    r.value = std::numeric_limits<double>::infinity();
    r.method = RateMethod::Quadrature;
    r.regime = RateRegime::NoInterference;
    return r;
  }
  RateResult r = rate_peak(beta, load.p_active, c);
  r.value *= load.p_selection;
  r.abs_error *= load.p_selection;
  return r;
}

}  // namespace sgnet::analytics
