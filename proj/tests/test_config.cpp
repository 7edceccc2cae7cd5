#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sgnet/config.hpp"
#include "sgnet/experiments.hpp"

using namespace sgnet;
using config::ConfigError;
using config::ExperimentKind;

namespace {

std::string error_of(const std::string& text) {
  try {
    config::parse_config_text(text, "t.ini");
  } catch (const ConfigError& e) {
    return std::string(e.what()) + " @" + std::to_string(e.line()) + " " + e.field();
  }
  return "no error";
}

std::string table(const config::ExperimentSpec& spec, int jobs = 1) {
  std::ostringstream os;
  experiments::run_experiment(spec, os, jobs);
  return os.str();
}

}  // namespace

TEST_CASE("minimal file takes defaults") {
  const auto spec = config::parse_config_text("[experiment]\nkind = rate_vs_beta\n");
  CHECK(spec.kind == ExperimentKind::RateVsBeta);
  CHECK(spec.params.lambda_bs == 1.27e-6);
  CHECK(spec.grid.size() == 26);
  CHECK(!spec.sim);

  const auto empty = config::parse_config_text("# nothing\n");
  CHECK(empty.kind == ExperimentKind::CoverageVsGamma);
  CHECK(empty.grid_unit == config::GridUnit::Db);
}

TEST_CASE("full file") {
  const auto spec = config::parse_config_text(R"(
[experiment]
kind = coverage_partial_load   # idle mode curves

[network]
lambda_bs = 2e-6
betas = 3, 4
ratios = 1, 4.34
sigma_n2 = 0

[grid]
start = -5
stop = 5
step = 2.5
unit = db

[simulation]
n_bs = 300
realizations = 1000
seed = 9

[output]
path = out.csv
)");
  CHECK(spec.kind == ExperimentKind::CoveragePartialLoad);
  CHECK(spec.params.lambda_bs == 2e-6);
  CHECK(spec.betas == std::vector<double>{3.0, 4.0});
  CHECK(spec.ratios == std::vector<double>{1.0, 4.34});
  CHECK(spec.grid == std::vector<double>{-5.0, -2.5, 0.0, 2.5, 5.0});
  REQUIRE(spec.sim);
  CHECK(spec.sim->n_bs_target == 300);
  CHECK(spec.sim->seed == 9);
  CHECK(spec.sim->idle_mode);
  CHECK(spec.output_path == "out.csv");
  const auto lin = config::linear_grid(spec);
  CHECK(lin[2] == 1.0);
  CHECK(lin[4] == doctest::Approx(std::pow(10.0, 0.5)));
}

TEST_CASE("strict parsing") {
  CHECK(error_of("[network]\nbeta = 4\nlambda = 1\n").find("unknown key 'lambda'") != std::string::npos);
  CHECK(error_of("[network]\nbeta = 4\nlambda = 1\n").find("@3 network.lambda") != std::string::npos);
  CHECK(error_of("[nework]\n").find("unknown section") != std::string::npos);
  CHECK(error_of("beta = 4\n").find("before any section") != std::string::npos);
  CHECK(error_of("[network]\nbeta = 4\nbeta = 3\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[network]\nbeta = four\n").find("@2 network.beta") != std::string::npos);
  CHECK(error_of("[network]\nbeta\n").find("expected key = value") != std::string::npos);
  CHECK(error_of("[experiment]\nkind = plot\n").find("unknown experiment kind") != std::string::npos);
  CHECK(error_of("[simulation]\nidle_mode = maybe\n").find("true or false") != std::string::npos);
  CHECK(error_of("[network]\nbeta = 4\nbetas = 3, 4\n").find("either beta or betas") != std::string::npos);
}

TEST_CASE("domain checks carry the offending line") {
  const std::string e = error_of("[experiment]\nkind = coverage_vs_gamma\n[network]\nbeta = 2.0\n");
  CHECK(e.find("open") != std::string::npos);
  CHECK(e.find("(2, 5]") != std::string::npos);
  CHECK(e.find("@4 network.beta") != std::string::npos);
  CHECK(error_of("[network]\nbetas = 3, 6\n").find("network.betas") != std::string::npos);
  CHECK(error_of("[network]\nlambda_bs = -1\n").find("lambda_bs") != std::string::npos);
  CHECK(error_of("[grid]\nvalues = 1, 3, 2\n").find("strictly increasing") != std::string::npos);
  CHECK(error_of("[grid]\nvalues = 1, 3, 2\n").find("@2") != std::string::npos);
  CHECK(error_of("[grid]\nstart = 1\nstop = 0\nstep = 1\n").find("grid.stop") != std::string::npos);
  CHECK(error_of("[grid]\nstart = 0\nstop = 1\n").find("exactly one of step or count") != std::string::npos);
  CHECK(error_of("[simulation]\nn_bs = 5\n").find("n_bs_target") != std::string::npos);
  CHECK(error_of("[experiment]\nkind = rate_vs_beta\n[grid]\nvalues = 1.5, 3\n").find("(2, 5]") !=
        std::string::npos);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(config::parse_config("/nonexistent/sgnet.ini"), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(experiments::format_number(0.0) == "0");
  CHECK(experiments::format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(experiments::format_number(INFINITY) == "inf");
  CHECK(experiments::format_number(-INFINITY) == "-inf");
  CHECK(experiments::format_number(NAN) == "nan");
  CHECK(experiments::format_number(1.27e-6) == "1.27e-06");
}

TEST_CASE("tables") {
  auto spec = config::default_spec(ExperimentKind::CoverageVsGamma);
  spec.betas = {4.0};
  spec.grid = {0.0};
  const std::string t = table(spec);
  CHECK(t == "beta,gamma_db,gamma,pcov_exact,pcov_approx\n4,0,1,0.5371931862,0.5454545455\n");

  auto rate = config::default_spec(ExperimentKind::RateVsBeta);
  rate.grid = {4.0};
  CHECK(table(rate).find("4,1.287761691,1.391420609") != std::string::npos);

  auto mgf = config::default_spec(ExperimentKind::MgfProfile);
  mgf.betas = {3.0};
  mgf.grid = {0.0, 1.0};
  const std::string m = table(mgf);
  CHECK(m.rfind("beta,x,s,bracket_exact,bracket_approx,mgf_exact,mgf_approx,rel_error\n", 0) == 0);
  CHECK(std::count(m.begin(), m.end(), '\n') == 3);

  auto actual = config::default_spec(ExperimentKind::ActualRateVsRatio);
  actual.betas = {4.0};
  actual.grid = {0.0, 1.0};
  const std::string a = table(actual);
  CHECK(a.find("4,0,0,1,inf,no_interference") != std::string::npos);

  auto peak = config::default_spec(ExperimentKind::PeakRateVsRatio);
  peak.betas = {4.0};
  peak.grid = {0.0, 1.0};
  const std::string pk = table(peak);
  CHECK(pk.find("4,0,1,0,inf,none,false") != std::string::npos);

  auto partial = config::default_spec(ExperimentKind::CoveragePartialLoad);
  partial.grid = {0.0};
  partial.ratios = {1.0};
  CHECK(table(partial) ==
        "beta,ratio,p_active,gamma_db,gamma,pcov_exact,pcov_approx\n4,1,0.585051349,0,1,0.6648768417,0.672249569\n");

  CHECK_THROWS_AS(table(config::default_spec(ExperimentKind::Validate)), ConfigError);
}

TEST_CASE("tables are byte-identical across runs and worker counts") {
  const auto spec = config::parse_config_text(R"(
[experiment]
kind = peak_rate_vs_ratio
[network]
betas = 3, 4
[grid]
values = 0.5, 4.34
[simulation]
n_bs = 100
realizations = 300
seed = 5
)");
  const std::string a = table(spec, 1);
  CHECK(a == table(spec, 1));
  CHECK(a == table(spec, 3));
  CHECK(a.rfind("beta,ratio,p_inactive,p_active,rate_peak,rate_peak_method,quarantined,rate_fully_loaded,"
                "rate_peak_mc,rate_peak_mc_stderr,inactive_mc,inactive_mc_stderr\n",
                0) == 0);

  auto cov = config::default_spec(ExperimentKind::CoverageVsGamma);
  cov.betas = {4.0};
  cov.grid = {-5.0, 0.0, 5.0};
  cov.sim = sim::SimConfig{};
  cov.sim->n_bs_target = 100;
  cov.sim->n_realizations = 200;
  const std::string c1 = table(cov, 1);
  CHECK(c1 == table(cov, 2));
  CHECK(c1.find("pcov_mc,pcov_mc_stderr") != std::string::npos);
}
