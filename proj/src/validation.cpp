#include "sgnet/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sgnet/analytics.hpp"
#include "sgnet/mgf.hpp"
#include "sgnet/simulator.hpp"

namespace sgnet::validation {

namespace {

using analytics::PcovKind;

struct Outcome {
  bool pass;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  const int n = std::snprintf(nullptr, 0, f, args...);
  std::string s(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(s.data(), s.size(), f, args...);
  s.pop_back();
  return s;
}

std::vector<double> db_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(std::pow(10.0, (lo + i * step) / 10.0));
  return g;
}

const std::vector<double> kBetaSweep = {2.5, 3.0, 3.5, 4.0, 4.5, 5.0};

Outcome intersection_constants(const Options&) {
  const double betas[] = {3.0, 4.0, 5.0};
  const double reference[] = {1.2528, 1.2873, 1.3099};
  double worst_exact = 0.0, worst_fit = 0.0;
  std::string exact_list, fit_list;
  for (int i = 0; i < 3; ++i) {
    const auto c = mgf::solve_c(betas[i]);
    worst_exact = std::max(worst_exact, std::abs(c.c_exact - reference[i]));
    worst_fit = std::max(worst_fit, std::abs(c.c_fit - reference[i]));
    exact_list += fmt("%s%.6f", i ? "," : "", c.c_exact);
    fit_list += fmt("%s%.6f", i ? "," : "", c.c_fit);
  }
  double worst_gap = 0.0, worst_gap_beta = 0.0;
  for (int i = 1; i <= 250; ++i) {
    const double b = 2.5 + 2.5 * i / 250.0;
    const auto c = mgf::solve_c(b);
    const double gap = std::abs(c.c_fit - c.c_exact);
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_gap_beta = b;
    }
  }
  const bool pass = worst_exact <= 5e-4 && worst_gap <= 5e-4;
  return {pass, fmt("solved c=%s max|c-ref|=%.2e; fit c=%s max|fit-ref|=%.2e; max|fit-solved| on (2.5,5]=%.2e "
                    "at beta=%.2f (tol 5e-4)",
                    exact_list.c_str(), worst_exact, fit_list.c_str(), worst_fit, worst_gap, worst_gap_beta)};
}

Outcome mgf_tightness(const Options&) {
  NetworkParams unit;
  unit.lambda_bs = 1.0 / std::numbers::pi;  // unit prefactor at l0 = kappa = 1
  double worst = 0.0, worst_beta = 0.0, worst_x = 0.0, worst_scaling = 0.0;
  std::string per_beta;
  for (double beta : kBetaSweep) {
    unit.beta = beta;
    const auto c = mgf::solve_c(beta);
    double beta_worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = i * 0.01;
      const double exact = mgf::mgf_exact({x, 1.0, mgf::Exact{}}, unit);
      const double approx = mgf::mgf_approx({x, 1.0, mgf::ApproxTwoTerm{}}, unit, c);
      const double rel = std::abs(approx - exact) / exact;
      beta_worst = std::max(beta_worst, rel);
      if (rel > worst) {
        worst = rel;
        worst_beta = beta;
        worst_x = x;
      }
      // The bracket recovered from the MGF must not depend on lambda.
      const double reference = mgf::two_term_bracket(x, beta, c.c_exact);
      for (double scale : {0.1, 10.0}) {
        NetworkParams q = unit;
        q.lambda_bs *= scale;
        const double recovered =
            std::log(mgf::mgf_approx({x, 1.0, mgf::ApproxTwoTerm{}}, q, c)) / mgf::prefactor(1.0, q);
        const double d = std::abs(recovered - reference) / std::max(1e-300, std::abs(reference));
        if (x > 0.0) worst_scaling = std::max(worst_scaling, d);
      }
    }
    per_beta += fmt("%s%.1f:%.4f", per_beta.empty() ? "" : ",", beta, beta_worst);
  }
  const bool pass = worst <= 0.02 && worst_scaling <= 1e-9;
  return {pass, fmt("max rel error %.4f at beta=%.1f x=%.2f (tol 0.02) [%s]; bracket drift under lambda scaling %.1e "
                    "(tol 1e-9)",
                    worst, worst_beta, worst_x, per_beta.c_str(), worst_scaling)};
}

Outcome coverage_overlap(const Options&) {
  const auto gammas = db_grid(-10.0, 30.0, 0.5);
  double worst = 0.0;
  std::string per_beta;
  for (double beta : kBetaSweep) {
    const auto c = mgf::solve_c(beta);
    double m = 0.0;
    for (double g : gammas) {
      m = std::max(m, std::abs(analytics::pcov_approx_full(g, beta, c) - analytics::pcov_exact_full(g, beta)));
    }
    worst = std::max(worst, m);
    per_beta += fmt("%s%.1f:%.4f", per_beta.empty() ? "" : ",", beta, m);
  }
  return {worst <= 0.02, fmt("max |approx-exact| = %.4f (tol 0.02) [%s]", worst, per_beta.c_str())};
}

Outcome closed_form_rate(const Options&) {
  const double root = (11.0 + std::sqrt(41.0)) / 4.0;
  double worst = 0.0;
  int used = 0;
  for (int i = 1; used < 20; ++i) {
    const double beta = 2.5 + 2.5 * i / 20.0;
    if (beta > 5.0) break;
    if (std::abs(beta - root) < analytics::kSingularWindow) continue;
    const auto c = mgf::solve_c(beta);
    const double closed = analytics::closed_form_rate_expression(beta, c);
    const double quad = analytics::rate_quadrature(beta, 1.0, PcovKind::Approx, c).value;
    worst = std::max(worst, std::abs(closed - quad));
    ++used;
  }
  bool pass = worst <= 1e-6 && used == 20;
  std::string detail = fmt("general form: %d betas, max |closed-quad| = %.1e (tol 1e-6)", used, worst);
  for (int beta : {3, 4}) {
    const auto audit = analytics::audit_tabulated_forms(beta, mgf::solve_c(beta));
    const bool ok = audit.max_abs_discrepancy <= 1e-6 || audit.quarantined;
    pass = pass && ok;
    detail += fmt("; tabulated form beta=%d max discrepancy %.3g -> %s", beta, audit.max_abs_discrepancy,
                  audit.quarantined ? "quarantined" : "accepted");
  }
  return {pass, detail};
}

Outcome mc_fully_loaded(const Options& opt) {
  NetworkParams p;
  sim::SimConfig cfg;
  cfg.seed = opt.seed;
  const std::vector<double> betas = {3.0, 4.0, 5.0};
  const auto sets = sim::run_simulation(p, betas, cfg, opt.jobs);
  bool pass = true;
  std::string detail;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const auto est = sim::estimate_rates(sets[b]);
    const double ref = analytics::rate_quadrature(betas[b], 1.0, PcovKind::Exact, mgf::solve_c(betas[b])).value;
    const double z = (est.peak.value - ref) / est.peak.std_error;
    pass = pass && std::abs(z) <= 3.0;
    detail += fmt("%sbeta=%.0f mc=%.4f+-%.4f ref=%.4f z=%+.2f", b ? "; " : "", betas[b], est.peak.value,
                  est.peak.std_error, ref, z);
  }
  return {pass, detail};
}

Outcome density_invariance(const Options& opt) {
  const auto gammas = db_grid(-10.0, 30.0, 1.0);
  NetworkParams lo, hi;
  hi.lambda_bs = 10.0 * lo.lambda_bs;
  sim::SimConfig a, b;
  a.seed = opt.seed;
  b.seed = opt.seed + 1;  // independent draws, not a rescaled copy
  const auto sa = sim::run_simulation(lo, a, opt.jobs);
  const auto sb = sim::run_simulation(hi, b, opt.jobs);
  const auto ca = sim::empirical_coverage(sa, gammas);
  const auto cb = sim::empirical_coverage(sb, gammas);
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  double worst_z = 0.0, worst_g = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double pooled = (ca.pcov[i] * na + cb.pcov[i] * nb) / (na + nb);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
    const double diff = std::abs(ca.pcov[i] - cb.pcov[i]);
    const double z = se > 0.0 ? diff / se : (diff > 0.0 ? INFINITY : 0.0);
    if (z > worst_z) {
      worst_z = z;
      worst_g = 10.0 * std::log10(gammas[i]);
    }
  }
  return {worst_z < 3.0, fmt("beta=4, %zu gamma points, max |diff|/pooled se = %.2f at %.0f dB (tol 3)",
                             gammas.size(), worst_z, worst_g)};
}

Outcome idle_mode_curves(const Options& opt) {
  const std::vector<double> betas = {3.0, 4.0, 5.0};
  const double ratios[] = {0.17, 4.34, 8.51, 11.11};
  bool pass = true;
  std::string detail;
  int failures = 0;
  for (double ratio : ratios) {
    NetworkParams p;
    p.lambda_ue = ratio * p.lambda_bs;
    sim::SimConfig cfg;
    cfg.seed = opt.seed;
    cfg.idle_mode = true;
    cfg.n_bs_target = 2000;
    const auto sets = sim::run_simulation(p, betas, cfg, opt.jobs);
    const auto load = analytics::load_model(p.lambda_ue, p.lambda_bs);
    const auto idle = sim::mean_with_error(sets.front().inactive_fraction);
    const double zi = (idle.mean - load.p_inactive) / idle.std_error;
    std::string line = fmt("r=%.2f idle z=%+.2f", ratio, zi);
    if (std::abs(zi) > 3.0) ++failures;
    for (std::size_t b = 0; b < betas.size(); ++b) {
      const auto c = mgf::solve_c(betas[b]);
      const auto est = sim::estimate_rates(sets[b]);
      const double peak = analytics::rate_peak(betas[b], load.p_active, c).value;
      const double actual = analytics::rate_actual(betas[b], p.lambda_ue, p.lambda_bs, c).value;
      const double zp = (est.peak.value - peak) / est.peak.std_error;
      const double za = (est.actual.value - actual) / est.actual.std_error;
      if (std::abs(zp) > 3.0) ++failures;
      if (std::abs(za) > 3.0) ++failures;
      line += fmt(" b%.0f peak z=%+.2f actual z=%+.2f", betas[b], zp, za);
    }
    detail += (detail.empty() ? "" : "; ") + line;
  }
  pass = failures == 0;

  const auto load4 = analytics::load_model(4.0, 1.0);
  double worst_rel = 0.0;
  for (double beta : betas) {
    const auto c = mgf::solve_c(beta);
    const double full = analytics::rate_peak(beta, 1.0, c).value;
    const double at4 = analytics::rate_peak(beta, load4.p_active, c).value;
    worst_rel = std::max(worst_rel, std::abs(at4 - full) / full);
  }
  pass = pass && worst_rel <= 0.05;
  detail = fmt("%d of 28 checks beyond 3 se; ratio 4 peak vs fully loaded max rel diff %.4f (tol 0.05); ", failures,
               worst_rel) +
           detail;
  return {pass, detail};
}

Outcome property_suite(const Options& opt) {
  std::vector<std::string> broken;

  // MGF(0) = 1 in every mode.
  {
    NetworkParams p;
    const auto c = mgf::solve_c(p.beta);
    const mgf::Mode modes[] = {mgf::Exact{}, mgf::ApproxTwoTerm{}, mgf::ApproxTaylor{4, false},
                               mgf::RayleighMarked{}, mgf::Thinned{0.5, false}, mgf::Thinned{0.5, true}};
    for (const auto& m : modes) {
      if (mgf::evaluate({0.0, 1.0, m}, p, c) != 1.0) broken.push_back("mgf(0)");
    }
  }
  // Coverage is a probability and nonincreasing in gamma.
  {
    const auto gammas = db_grid(-20.0, 40.0, 0.25);
    for (double beta : kBetaSweep) {
      const auto c = mgf::solve_c(beta);
      for (double pa : {0.05, 0.5, 1.0}) {
        for (auto kind : {PcovKind::Exact, PcovKind::Approx}) {
          double prev = 1.0;
          for (double g : gammas) {
            const double v = analytics::pcov(g, beta, pa, kind, c);
            if (!(v >= 0.0 && v <= 1.0) || v > prev + 1e-15) {
              broken.push_back(fmt("pcov beta=%.1f p=%.2f", beta, pa));
              break;
            }
            prev = v;
          }
        }
      }
    }
  }
  // The two branches meet at c.
  double worst_jump = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double beta = 2.5 + 2.5 * i / 100.0;
    const auto c = mgf::solve_c(beta);
    worst_jump = std::max(worst_jump, std::abs(mgf::taylor_bracket(c.c_exact, beta, 2) -
                                               mgf::upper_bracket(c.c_exact, beta)));
  }
  if (worst_jump > 1e-9) broken.push_back(fmt("branch jump %.1e", worst_jump));

  // Serving path loss of the simulator against its analytical law.
  double ks = 0.0;
  {
    NetworkParams p;
    sim::SimConfig cfg;
    cfg.seed = opt.seed;
    const analytics::PathLossPdf law{p.lambda_bs, p.beta, p.kappa};
    const int n = 100000;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      const auto d = sim::sample_deployment(p, cfg, static_cast<std::uint64_t>(i));
      const double r2 = d.bs_x[d.serving_index] * d.bs_x[d.serving_index] +
                        d.bs_y[d.serving_index] * d.bs_y[d.serving_index];
      y[static_cast<std::size_t>(i)] = p.kappa * std::pow(r2, p.beta / 2.0);
    }
    std::sort(y.begin(), y.end());
    for (int i = 0; i < n; ++i) {
      const double f = law.cdf(y[static_cast<std::size_t>(i)]);
      ks = std::max({ks, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    if (!(ks < 0.01)) broken.push_back(fmt("path-loss KS %.4f", ks));
  }

  // Same samples whatever the worker count.
  {
    NetworkParams p;
    p.lambda_ue = 4.34 * p.lambda_bs;
    sim::SimConfig cfg;
    cfg.seed = opt.seed;
    cfg.idle_mode = true;
    cfg.n_realizations = 2000;
    const std::vector<double> betas = {3.0, 4.0, 5.0};
    const auto one = sim::run_simulation(p, betas, cfg, 1);
    for (int jobs : {2, 4, std::max(opt.jobs, 3)}) {
      const auto many = sim::run_simulation(p, betas, cfg, jobs);
      for (std::size_t b = 0; b < betas.size(); ++b) {
        if (one[b].sir_values != many[b].sir_values || one[b].rate_actual_samples != many[b].rate_actual_samples ||
            one[b].n_users_in_cell != many[b].n_users_in_cell || one[b].inactive_fraction != many[b].inactive_fraction) {
          broken.push_back(fmt("determinism jobs=%d", jobs));
          break;
        }
      }
    }
  }

  std::string detail = fmt("branch jump %.1e (tol 1e-9); path-loss KS %.4f (tol 0.01)", worst_jump, ks);
  if (broken.empty()) {
    detail += "; mgf(0), pcov range/monotonicity, jobs determinism ok";
  } else {
    detail += "; broken:";
    for (const auto& b : broken) detail += " [" + b + "]";
  }
  return {broken.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  Outcome (*run)(const Options&);
};

const Criterion kCriteria[] = {
    {1, "intersection constants", 1.0, intersection_constants},
    {2, "mgf approximation tightness", 5.0, mgf_tightness},
    {3, "coverage overlap", 5.0, coverage_overlap},
    {4, "closed-form rate", 10.0, closed_form_rate},
    {5, "monte carlo fully loaded", 120.0, mc_fully_loaded},
    {6, "density invariance", 120.0, density_invariance},
    {7, "idle-mode curves", 300.0, idle_mode_curves},
    {8, "property suite", 120.0, property_suite},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const Options& opt, std::ostream* progress) {
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run(opt);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget_seconds) {
      r.pass = false;
      r.detail += "; over runtime budget";
    }
    if (progress) *progress << format_line(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s  %d  %-28s %s  (%.2f s / %.0f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
             r.seconds, r.budget_seconds);
}

}  // namespace sgnet::validation
