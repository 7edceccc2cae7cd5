#include "sgnet/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <vector>

#include "sgnet/analytics.hpp"
#include "sgnet/mgf.hpp"
#include "sgnet/simulator.hpp"

namespace sgnet::experiments {

namespace {

using config::ExperimentKind;
using config::ExperimentSpec;

constexpr double kInf = std::numeric_limits<double>::infinity();

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }

  CsvWriter& num(double v) { return cell(format_number(v)); }
  CsvWriter& str(const std::string& s) { return cell(s); }
  void end() {
    os_ << '\n';
    fresh_ = true;
  }

 private:
  CsvWriter& cell(const std::string& s) {
    if (!fresh_) os_ << ',';
    os_ << s;
    fresh_ = false;
    return *this;
  }

  std::ostream& os_;
  bool fresh_ = true;
};

double to_db(double g) { return g > 0.0 ? 10.0 * std::log10(g) : -kInf; }

std::map<double, mgf::IntersectionConstant> constants(const std::vector<double>& betas) {
  std::map<double, mgf::IntersectionConstant> m;
  for (double b : betas) m.emplace(b, mgf::solve_c(b));
  return m;
}

std::vector<sim::SirSampleSet> simulate(const ExperimentSpec& spec, NetworkParams p,
                                        const std::vector<double>& betas, int jobs) {
  return sim::run_simulation(p, betas, *spec.sim, jobs);
}

double coverage(double gamma, const NetworkParams& p, double p_active, analytics::PcovKind kind,
                const mgf::IntersectionConstant& c) {
  if (p.sigma_n2 > 0.0) return analytics::pcov_integral(gamma, p, p_active, kind, c);
  return analytics::pcov(gamma, p.beta, p_active, kind, c);
}

void coverage_vs_gamma(const ExperimentSpec& spec, CsvWriter& w, int jobs) {
  const auto gammas = config::linear_grid(spec);
  const auto cs = constants(spec.betas);
  std::vector<sim::SirSampleSet> mc;
  if (spec.sim) mc = simulate(spec, spec.params, spec.betas, jobs);

  if (spec.sim) {
    w.header({"beta", "gamma_db", "gamma", "pcov_exact", "pcov_approx", "pcov_mc", "pcov_mc_stderr"});
  } else {
    w.header({"beta", "gamma_db", "gamma", "pcov_exact", "pcov_approx"});
  }
  for (std::size_t b = 0; b < spec.betas.size(); ++b) {
    NetworkParams p = spec.params;
    p.beta = spec.betas[b];
    const auto& c = cs.at(p.beta);
    sim::CoverageEstimate emp;
    if (spec.sim) emp = sim::empirical_coverage(mc[b], gammas);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      w.num(p.beta).num(to_db(gammas[i])).num(gammas[i]);
      w.num(coverage(gammas[i], p, 1.0, analytics::PcovKind::Exact, c));
      w.num(coverage(gammas[i], p, 1.0, analytics::PcovKind::Approx, c));
      if (spec.sim) w.num(emp.pcov[i]).num(emp.std_error[i]);
      w.end();
    }
  }
}

void rate_vs_beta(const ExperimentSpec& spec, CsvWriter& w, int jobs) {
  const auto& betas = spec.grid;
  std::vector<sim::SirSampleSet> mc;
  if (spec.sim) mc = simulate(spec, spec.params, betas, jobs);

  if (spec.sim) {
    w.header({"beta", "c", "rate_exact", "rate_approx", "rate_closed", "rate_closed_method", "rate_mc",
              "rate_mc_stderr"});
  } else {
    w.header({"beta", "c", "rate_exact", "rate_approx", "rate_closed", "rate_closed_method"});
  }
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const auto c = mgf::solve_c(betas[b]);
    const auto exact = analytics::rate_quadrature(betas[b], 1.0, analytics::PcovKind::Exact, c);
    const auto approx = analytics::rate_quadrature(betas[b], 1.0, analytics::PcovKind::Approx, c);
    const auto closed = analytics::rate_closed_general(betas[b], c);
    w.num(betas[b]).num(c.c_exact).num(exact.value).num(approx.value).num(closed.value);
    w.str(analytics::to_string(closed.method));
    if (spec.sim) {
      const auto est = sim::estimate_rates(mc[b]);
      w.num(est.peak.value).num(est.peak.std_error);
    }
    w.end();
  }
}

void coverage_partial_load(const ExperimentSpec& spec, CsvWriter& w, int jobs) {
  const auto gammas = config::linear_grid(spec);
  const auto cs = constants(spec.betas);
  if (spec.sim) {
    w.header({"beta", "ratio", "p_active", "gamma_db", "gamma", "pcov_exact", "pcov_approx", "pcov_mc",
              "pcov_mc_stderr"});
  } else {
    w.header({"beta", "ratio", "p_active", "gamma_db", "gamma", "pcov_exact", "pcov_approx"});
  }
  // Rows ordered by beta, then ratio; simulate each ratio once for all betas.
  std::vector<std::vector<sim::CoverageEstimate>> emp(spec.ratios.size());
  if (spec.sim) {
    for (std::size_t r = 0; r < spec.ratios.size(); ++r) {
      NetworkParams p = spec.params;
      p.lambda_ue = spec.ratios[r] * p.lambda_bs;
      for (const auto& s : simulate(spec, p, spec.betas, jobs)) emp[r].push_back(sim::empirical_coverage(s, gammas));
    }
  }
  for (std::size_t b = 0; b < spec.betas.size(); ++b) {
    NetworkParams p = spec.params;
    p.beta = spec.betas[b];
    const auto& c = cs.at(p.beta);
    for (std::size_t r = 0; r < spec.ratios.size(); ++r) {
      const auto load = analytics::load_model(spec.ratios[r] * p.lambda_bs, p.lambda_bs);
      for (std::size_t i = 0; i < gammas.size(); ++i) {
        w.num(p.beta).num(spec.ratios[r]).num(load.p_active).num(to_db(gammas[i])).num(gammas[i]);
        if (load.p_active < analytics::kMinActiveProbability) {
          w.num(1.0).num(1.0);
        } else {
          w.num(coverage(gammas[i], p, load.p_active, analytics::PcovKind::Exact, c));
          w.num(coverage(gammas[i], p, load.p_active, analytics::PcovKind::Approx, c));
        }
        if (spec.sim) w.num(emp[r][b].pcov[i]).num(emp[r][b].std_error[i]);
        w.end();
      }
    }
  }
}

void rate_vs_ratio(const ExperimentSpec& spec, CsvWriter& w, int jobs, bool actual) {
  const auto& ratios = spec.grid;
  const auto cs = constants(spec.betas);
  std::vector<std::vector<sim::SirSampleSet>> mc(ratios.size());
  if (spec.sim) {
    for (std::size_t r = 0; r < ratios.size(); ++r) {
      NetworkParams p = spec.params;
      p.lambda_ue = ratios[r] * p.lambda_bs;
      mc[r] = simulate(spec, p, spec.betas, jobs);
    }
  }
  if (actual) {
    if (spec.sim) {
      w.header({"beta", "ratio", "p_active", "p_selection", "rate_actual", "regime", "rate_actual_mc",
                "rate_actual_mc_stderr"});
    } else {
      w.header({"beta", "ratio", "p_active", "p_selection", "rate_actual", "regime"});
    }
  } else if (spec.sim) {
    w.header({"beta", "ratio", "p_inactive", "p_active", "rate_peak", "rate_peak_method", "quarantined",
              "rate_fully_loaded", "rate_peak_mc", "rate_peak_mc_stderr", "inactive_mc", "inactive_mc_stderr"});
  } else {
    w.header({"beta", "ratio", "p_inactive", "p_active", "rate_peak", "rate_peak_method", "quarantined",
              "rate_fully_loaded"});
  }

  for (std::size_t b = 0; b < spec.betas.size(); ++b) {
    const double beta = spec.betas[b];
    const auto& c = cs.at(beta);
    const double full = analytics::rate_peak(beta, 1.0, c).value;
    for (std::size_t r = 0; r < ratios.size(); ++r) {
      const double lambda_ue = ratios[r] * spec.params.lambda_bs;
      const auto load = analytics::load_model(lambda_ue, spec.params.lambda_bs);
      sim::RateEstimates est;
      if (spec.sim) est = sim::estimate_rates(mc[r][b]);
      w.num(beta).num(ratios[r]);
      if (actual) {
        const auto a = analytics::rate_actual(beta, lambda_ue, spec.params.lambda_bs, c);
        w.num(load.p_active).num(load.p_selection).num(a.value);
        w.str(a.regime == analytics::RateRegime::NoInterference ? "no_interference" : "normal");
        if (spec.sim) w.num(est.actual.value).num(est.actual.std_error);
      } else {
        w.num(load.p_inactive).num(load.p_active);
        if (load.p_active < analytics::kMinActiveProbability) {
          w.num(kInf).str("none").str("false");
        } else {
          const auto pk = analytics::rate_peak(beta, load.p_active, c);
          w.num(pk.value).str(analytics::to_string(pk.method)).str(pk.quarantined ? "true" : "false");
        }
        w.num(full);
        if (spec.sim) {
          const auto idle = sim::mean_with_error(mc[r][b].inactive_fraction);
          w.num(est.peak.value).num(est.peak.std_error).num(idle.mean).num(idle.std_error);
        }
      }
      w.end();
    }
  }
}

void mgf_profile(const ExperimentSpec& spec, CsvWriter& w) {
  const auto xs = config::linear_grid(spec);
  const auto cs = constants(spec.betas);
  w.header({"beta", "x", "s", "bracket_exact", "bracket_approx", "mgf_exact", "mgf_approx", "rel_error"});
  for (double beta : spec.betas) {
    NetworkParams p = spec.params;
    p.beta = beta;
    const auto& c = cs.at(beta);
    for (double x : xs) {
      const double s = x * spec.l0 / p.p_tx;
      const double exact = mgf::mgf_exact({s, spec.l0, mgf::Exact{}}, p);
      const double approx = mgf::mgf_approx({s, spec.l0, mgf::ApproxTwoTerm{}}, p, c);
      w.num(beta).num(x).num(s);
      w.num(mgf::exact_bracket(x, beta)).num(mgf::two_term_bracket(x, beta, c.c_exact));
      w.num(exact).num(approx).num(std::abs(approx - exact) / exact);
      w.end();
    }
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void run_experiment(const ExperimentSpec& spec, std::ostream& os, int jobs) {
  spec.validate();
  CsvWriter w(os);
  switch (spec.kind) {
    case ExperimentKind::CoverageVsGamma:
      coverage_vs_gamma(spec, w, jobs);
      break;
    case ExperimentKind::RateVsBeta:
      rate_vs_beta(spec, w, jobs);
      break;
    case ExperimentKind::CoveragePartialLoad:
      coverage_partial_load(spec, w, jobs);
      break;
    case ExperimentKind::PeakRateVsRatio:
      rate_vs_ratio(spec, w, jobs, false);
      break;
    case ExperimentKind::ActualRateVsRatio:
      rate_vs_ratio(spec, w, jobs, true);
      break;
    case ExperimentKind::MgfProfile:
      mgf_profile(spec, w);
      break;
    case ExperimentKind::Validate:
      throw config::ConfigError("validate is not a table experiment; use the validate command");
  }
}

}  // namespace sgnet::experiments
