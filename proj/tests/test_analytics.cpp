#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "sgnet/analytics.hpp"
#include "sgnet/errors.hpp"

using namespace sgnet;
using doctest::Approx;
using analytics::PcovKind;

// High-precision reference rates (nats/s/Hz) from an independent
// arbitrary-precision quadrature of int pcov(w) / (1 + w) dw.
namespace {
struct RateRef {
  double beta, p_active, exact, approx;
};
constexpr RateRef kRates[] = {
    {3.0, 1.0, 0.8294890130053, 0.8326528647630},
    {4.0, 1.0, 1.3914206086732, 1.3969605404066},
    {5.0, 1.0, 1.9168477749040, 1.9233692112590},
    {4.0, 0.5, 2.0203411912791, 2.0253092051982},
    {3.0, 0.3, 1.6019258711109, 1.6052897327476},
    {5.0, 0.7, 2.3234093450887, 2.3293328813934},
};
}  // namespace

TEST_CASE("fully loaded coverage") {
  const auto c4 = mgf::solve_c(4.0);
  CHECK(analytics::pcov_exact_full(10.0, 4.0) == Approx(0.178412).epsilon(1e-5));
  CHECK(analytics::pcov_approx_full(1.0, 4.0, c4) == Approx(6.0 / 11.0).epsilon(1e-15));
  for (double beta : {2.5, 3.0, 4.0, 5.0}) {
    const double d = 2.0 / beta;
    for (double g : {0.1, 1.0, 7.0, 100.0}) {
      CHECK(analytics::pcov_exact_full(g, beta) ==
            Approx(1.0 / static_cast<double>(oracle::kummer_neg_integral(d, g))).epsilon(1e-10));
    }
    CHECK(analytics::pcov_exact_full(0.0, beta) == 1.0);
  }
  CHECK_THROWS_AS(analytics::pcov_exact_full(-1.0, 4.0), DomainError);
}

TEST_CASE("partial-load coverage") {
  const auto c4 = mgf::solve_c(4.0);
  const auto load = analytics::load_model(1.0, 1.0);
  CHECK(load.p_active == Approx(0.585051349019).epsilon(1e-11));
  const auto pc = analytics::pcov_partial_load(1.0, 4.0, load.p_active, c4);
  CHECK(pc.exact == Approx(0.664876841666).epsilon(1e-10));
  CHECK(pc.approx == Approx(0.672249568988).epsilon(1e-10));
  // p = 1 reduces to the fully loaded forms.
  const auto full = analytics::pcov_partial_load(3.0, 4.0, 1.0, c4);
  CHECK(full.exact == analytics::pcov_exact_full(3.0, 4.0));
  CHECK(full.approx == analytics::pcov_approx_full(3.0, 4.0, c4));
  // Fewer active interferers, better coverage.
  CHECK(analytics::pcov(3.0, 4.0, 0.2, PcovKind::Exact, c4) > analytics::pcov(3.0, 4.0, 0.8, PcovKind::Exact, c4));
  CHECK_THROWS_AS(analytics::pcov(1.0, 4.0, 0.0, PcovKind::Exact, c4), DomainError);
}

TEST_CASE("coverage through the path-loss integral") {
  for (double beta : {3.0, 4.0}) {
    const auto c = mgf::solve_c(beta);
    for (double lambda : {1.27e-6, 1e-3}) {
      NetworkParams p;
      p.beta = beta;
      p.lambda_bs = lambda;
      for (double g : {0.3, 2.0, 20.0}) {
        CHECK(analytics::pcov_integral(g, p, 1.0, PcovKind::Exact, c) ==
              Approx(analytics::pcov_exact_full(g, beta)).epsilon(1e-8));
        CHECK(analytics::pcov_integral(g, p, 0.4, PcovKind::Approx, c) ==
              Approx(analytics::pcov(g, beta, 0.4, PcovKind::Approx, c)).epsilon(1e-8));
      }
    }
  }
  NetworkParams noisy;
  noisy.sigma_n2 = 1e-13;
  const auto c = mgf::solve_c(noisy.beta);
  CHECK(analytics::pcov_integral(1.0, noisy, 1.0, PcovKind::Exact, c) < analytics::pcov_exact_full(1.0, noisy.beta));
}

TEST_CASE("coverage curve") {
  const auto c = mgf::solve_c(3.0);
  const double grid[] = {0.1, 1.0, 10.0};
  const auto curve = analytics::coverage_curve(grid, 3.0, 0.5, c);
  REQUIRE(curve.pcov_exact.size() == 3);
  CHECK(curve.pcov_exact[1] == analytics::pcov(1.0, 3.0, 0.5, PcovKind::Exact, c));
  CHECK(curve.pcov_approx[2] == analytics::pcov(10.0, 3.0, 0.5, PcovKind::Approx, c));
}

TEST_CASE("load model") {
  const auto at = [](double r) { return analytics::load_model(r, 1.0); };
  CHECK(at(3.5).p_inactive == Approx(0.0883883476483).epsilon(1e-12));
  CHECK(at(0.0).p_inactive == 1.0);
  CHECK(at(0.0).p_selection == 1.0);
  CHECK(at(1e-12).p_selection == Approx(1.0).epsilon(1e-9));
  double prev = 1.0;
  for (double r = 0.1; r < 20.0; r += 0.1) {
    const auto m = at(r);
    CHECK(m.p_active + m.p_inactive == Approx(1.0).epsilon(1e-15));
    CHECK(m.p_selection == Approx(m.p_active / r).epsilon(1e-14));
    CHECK(m.p_inactive < prev);
    prev = m.p_inactive;
  }
  CHECK_THROWS_AS(analytics::load_model(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(analytics::load_model(1.0, 0.0), DomainError);
}

TEST_CASE("serving path-loss law") {
  const analytics::PathLossPdf law{1.27e-6, 4.0, 1.0};
  for (double q : {0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(law.cdf(law.quantile(q)) == Approx(q).epsilon(1e-12));
  // pdf is the derivative of the cdf.
  const double y = law.quantile(0.4);
  const double h = y * 1e-5;
  CHECK(law.pdf(y) == Approx((law.cdf(y + h) - law.cdf(y - h)) / (2.0 * h)).epsilon(1e-7));
  CHECK(law.cdf(0.0) == 0.0);
}

TEST_CASE("rate quadrature against reference values") {
  for (const auto& r : kRates) {
    const auto c = mgf::solve_c(r.beta);
    CHECK(analytics::rate_quadrature(r.beta, r.p_active, PcovKind::Exact, c).value == Approx(r.exact).epsilon(1e-9));
    CHECK(analytics::rate_quadrature(r.beta, r.p_active, PcovKind::Approx, c).value ==
          Approx(r.approx).epsilon(1e-9));
  }
  CHECK_THROWS_AS(analytics::rate_quadrature(4.0, 1e-7, PcovKind::Exact, mgf::solve_c(4.0)), DomainError);
}

TEST_CASE("general closed-form rate") {
  for (double beta = 2.55; beta <= 5.0; beta += 0.15) {
    const auto c = mgf::solve_c(beta);
    const auto closed = analytics::rate_closed_general(beta, c);
    CHECK(closed.value ==
          Approx(analytics::rate_quadrature(beta, 1.0, PcovKind::Approx, c).value).epsilon(1e-9));
  }
  const auto cs = mgf::solve_c(4.35);
  CHECK_THROWS_AS(analytics::closed_form_rate_expression(4.35, cs), NearSingularityError);
  const auto fallback = analytics::rate_closed_general(4.35, cs);
  CHECK(fallback.method == analytics::RateMethod::Quadrature);
  CHECK(fallback.value == Approx(analytics::rate_quadrature(4.35, 1.0, PcovKind::Approx, cs).value).epsilon(1e-12));
  CHECK(analytics::rate_closed_general(4.0, mgf::solve_c(4.0)).method == analytics::RateMethod::ClosedFormGeneral);
}

TEST_CASE("tabulated peak-rate forms are audited") {
  for (int beta : {3, 4}) {
    const auto audit = analytics::audit_tabulated_forms(beta, mgf::solve_c(beta));
    CHECK(audit.p_active.size() == 10);
    CHECK(audit.quarantined);
    CHECK(!audit.report().empty());
    const auto r = analytics::rate_peak_partial_load(beta, 0.5, mgf::solve_c(beta));
    CHECK(r.quarantined);
    CHECK(r.method == analytics::RateMethod::Quadrature);
  }
  // The printed beta = 3 form leaves the reals for large loads.
  CHECK(std::isnan(analytics::tabulated_peak_rate(3, 0.9, mgf::solve_c(3.0).c_exact)));
  CHECK_THROWS_AS(analytics::rate_peak_partial_load(5.0, 0.5, mgf::solve_c(5.0)), DomainError);
}

TEST_CASE("peak and actual rate") {
  const auto c = mgf::solve_c(4.0);
  CHECK(analytics::rate_peak(4.0, 1.0, c).value == Approx(1.3969605404066).epsilon(1e-9));
  CHECK(analytics::rate_peak(4.0, 0.5, c).value == Approx(2.0253092051982).epsilon(1e-9));
  const auto load = analytics::load_model(2.0e-6, 1.0e-6);
  const auto actual = analytics::rate_actual(4.0, 2.0e-6, 1.0e-6, c);
  CHECK(actual.value == Approx(analytics::rate_peak(4.0, load.p_active, c).value * load.p_selection).epsilon(1e-14));
  CHECK(actual.regime == analytics::RateRegime::Normal);
  const auto none = analytics::rate_actual(4.0, 0.0, 1.0e-6, c);
  CHECK(none.regime == analytics::RateRegime::NoInterference);
  CHECK(std::isinf(none.value));
  CHECK(analytics::to_string(analytics::RateMethod::MonteCarlo) == "monte_carlo");
}
