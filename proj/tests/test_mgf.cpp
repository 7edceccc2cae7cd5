#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sgnet/errors.hpp"
#include "sgnet/mgf.hpp"

using namespace sgnet;
using doctest::Approx;

namespace {

NetworkParams unit_params(double beta) {
  NetworkParams p;
  p.lambda_bs = 1.0 / std::numbers::pi;
  p.beta = beta;
  return p;
}

}  // namespace

TEST_CASE("intersection constant") {
  for (double beta : {2.5, 3.0, 3.7, 4.0, 4.5, 5.0}) {
    const auto c = mgf::solve_c(beta);
    CHECK(c.c_exact == Approx(oracle::intersection_bisect(beta)).epsilon(1e-11));
    CHECK(std::abs(mgf::c_residual(c.c_exact, beta)) < 1e-12);
    CHECK(c.c_fit == Approx(0.06662 * std::log(beta - 1.528) + 1.227).epsilon(1e-15));
  }
  CHECK(mgf::solve_c(3.0).c_exact == Approx(1.252622).epsilon(1e-6));
  CHECK(mgf::solve_c(4.0).c_exact == Approx(1.287762).epsilon(1e-6));
  CHECK(mgf::solve_c(5.0).c_exact == Approx(1.308635).epsilon(1e-6));
  CHECK_THROWS_AS(mgf::solve_c(2.0), DomainError);
  CHECK_THROWS_AS(mgf::solve_c(5.5), DomainError);
}

TEST_CASE("brackets") {
  for (double beta : {2.5, 3.0, 4.0, 5.0}) {
    const double d = 2.0 / beta;
    const auto c = mgf::solve_c(beta);
    for (double x : {0.0, 0.3, 1.0, 2.5, 12.0}) {
      CHECK(mgf::exact_bracket(x, beta) ==
            Approx(1.0 - static_cast<double>(oracle::kummer_neg_integral(d, x))).epsilon(1e-10));
      CHECK(mgf::exact_bracket(x, beta) <= 0.0);
    }
    // Lower branch is the two-term series, bit for bit.
    for (double x : {0.1, 0.7, c.c_exact}) {
      CHECK(mgf::two_term_bracket(x, beta, c.c_exact) == mgf::taylor_bracket(x, beta, 2));
    }
    for (double x : {1.5, 4.0}) {
      CHECK(mgf::two_term_bracket(x, beta, c.c_exact) == mgf::upper_bracket(x, beta));
    }
    // The branches meet at c.
    CHECK(std::abs(mgf::taylor_bracket(c.c_exact, beta, 2) - mgf::upper_bracket(c.c_exact, beta)) < 1e-9);
    // Long Taylor sums converge to the exact bracket for small x.
    CHECK(mgf::taylor_bracket(0.5, beta, 40) == Approx(mgf::exact_bracket(0.5, beta)).epsilon(1e-13));
    // Upper branch is the large-x asymptote.
    CHECK(mgf::upper_bracket(1e5, beta) / mgf::exact_bracket(1e5, beta) == Approx(1.0).epsilon(1e-9));
    CHECK(mgf::degenerate_mark_bracket(2.0, beta) == Approx(mgf::exact_bracket(2.0, beta)).epsilon(1e-9));
  }
}

TEST_CASE("rayleigh-marked bracket") {
  // E_m[1 - 1F1(-d; 1-d; -x m)] = -d x / (1 - d) 2F1(1, 1-d; 2-d; -x) for x <= 1,
  // the 2F1 summed here directly.
  for (double beta : {2.5, 3.0, 4.0, 5.0}) {
    const double d = 2.0 / beta;
    for (double x : {0.1, 0.5, 0.9}) {
      long double term = 1.0L, sum = 1.0L;
      for (int n = 0; n < 4000; ++n) {
        term *= (1.0L + n) * (1.0L - d + n) / ((2.0L - d + n) * (n + 1)) * (-x);
        sum += term;
      }
      const double expect = static_cast<double>(-d * x / (1.0 - d) * sum);
      CHECK(mgf::rayleigh_bracket(x, beta) == Approx(expect).epsilon(1e-8));
    }
  }
  // Sampled marks, +-3 standard errors.
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> exp1(1.0);
  const double beta = 4.0, x = 3.0;
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = mgf::exact_bracket(x * exp1(rng), beta);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / (n - 1));
  CHECK(std::abs(mgf::rayleigh_bracket(x, beta) - mean) < 3.0 * se);
}

TEST_CASE("mgf evaluators") {
  NetworkParams p;
  const auto c = mgf::solve_c(p.beta);
  const mgf::Mode modes[] = {mgf::Exact{}, mgf::ApproxTwoTerm{}, mgf::ApproxTaylor{3, false}, mgf::RayleighMarked{},
                             mgf::Thinned{0.3, false}, mgf::Thinned{0.3, true}};
  for (const auto& m : modes) {
    CHECK(mgf::evaluate({0.0, 5.0, m}, p, c) == 1.0);
    double prev = 1.0;
    for (double s : {1e-3, 1.0, 10.0, 1e3}) {
      const double v = mgf::evaluate({s, 1e6, m}, p, c);
      CHECK(v > 0.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(mgf::evaluate({-1.0, 1.0, mgf::Exact{}}, p, c), DomainError);
  CHECK_THROWS_AS(mgf::evaluate({1.0, 0.0, mgf::Exact{}}, p, c), DomainError);
  CHECK_THROWS_AS(mgf::mgf_exact({1.0, 1.0, mgf::ApproxTwoTerm{}}, p), DomainError);
}

TEST_CASE("prefactor and density scaling") {
  for (double beta : {3.0, 4.0}) {
    auto p = unit_params(beta);
    CHECK(mgf::prefactor(1.0, p) == Approx(1.0).epsilon(1e-15));
    const auto c = mgf::solve_c(beta);
    for (double x : {0.4, 2.0, 9.0}) {
      CHECK(std::log(mgf::mgf_exact({x, 1.0, mgf::Exact{}}, p)) == Approx(mgf::exact_bracket(x, beta)).epsilon(1e-13));
      NetworkParams q = p;
      q.lambda_bs *= 7.0;
      CHECK(std::log(mgf::mgf_approx({x, 1.0, mgf::ApproxTwoTerm{}}, q, c)) / mgf::prefactor(1.0, q) ==
            Approx(mgf::two_term_bracket(x, beta, c.c_exact)).epsilon(1e-12));
    }
  }
}

TEST_CASE("thinning") {
  // Thinning by p scales the exponent by p: M_p = M^p.
  NetworkParams p;
  const auto c = mgf::solve_c(p.beta);
  for (double s : {1e-6, 1e-3, 0.1}) {
    const double l0 = 1e5;
    const double full = mgf::mgf_approx({s, l0, mgf::ApproxTwoTerm{}}, p, c);
    CHECK(mgf::mgf_thinned({s, l0, mgf::Thinned{0.5, false}}, p, 0.5, c) == Approx(std::sqrt(full)).epsilon(1e-13));
    const double exact = mgf::mgf_exact({s, l0, mgf::Exact{}}, p);
    CHECK(mgf::evaluate({s, l0, mgf::Thinned{0.25, true}}, p, c) == Approx(std::pow(exact, 0.25)).epsilon(1e-13));
    CHECK(mgf::evaluate({s, l0, mgf::Thinned{1.0, true}}, p, c) == Approx(exact).epsilon(1e-15));
  }
  CHECK_THROWS_AS(mgf::evaluate({1.0, 1.0, mgf::Thinned{0.0, false}}, p, c), DomainError);
  CHECK_THROWS_AS(mgf::evaluate({1.0, 1.0, mgf::Thinned{1.5, false}}, p, c), DomainError);
}

TEST_CASE("taylor mode") {
  auto p = unit_params(4.0);
  const auto c = mgf::solve_c(4.0);
  const double below = 0.5;
  CHECK(mgf::mgf_taylor_full({below, 1.0, mgf::ApproxTaylor{2, false}}, p, 2, c) ==
        mgf::mgf_approx({below, 1.0, mgf::ApproxTwoTerm{}}, p, c));
  CHECK_THROWS_AS(mgf::mgf_taylor_full({3.0, 1.0, mgf::ApproxTaylor{2, true}}, p, 2, c), ConvergenceError);
}
