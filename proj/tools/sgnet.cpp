// sgnet: coverage, rate and load curves of Poisson cellular networks.
//
// Exit codes: 0 ok, 1 acceptance failures, 2 bad arguments or config,
// 3 numerical failure, 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "sgnet/config.hpp"
#include "sgnet/errors.hpp"
#include "sgnet/experiments.hpp"
#include "sgnet/kernels.hpp"
#include "sgnet/simulator.hpp"
#include "sgnet/validation.hpp"

namespace {

using sgnet::config::ExperimentKind;
using sgnet::config::ExperimentSpec;

constexpr int kExitAcceptance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  bool db = false;
};

struct Command {
  std::string name;
  ExperimentKind default_kind;
  std::set<ExperimentKind> allowed;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "experiment config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "base seed for the Monte Carlo streams");
  sub->add_option("--out", f.out, "output path (default: config output.path, else stdout)");
  sub->add_option("--jobs", f.jobs, "worker threads for the simulator")->check(CLI::PositiveNumber);
  sub->add_flag("--db", f.db, "interpret the gamma grid in dB");
}

ExperimentSpec load_spec(const Command& cmd, const CommonFlags& f) {
  ExperimentSpec spec =
      f.config.empty() ? sgnet::config::default_spec(cmd.default_kind) : sgnet::config::parse_config(f.config);
  if (f.config.empty()) spec.kind = cmd.default_kind;
  if (!cmd.allowed.empty() && !cmd.allowed.count(spec.kind)) {
    throw sgnet::config::ConfigError("experiment kind '" + sgnet::config::to_string(spec.kind) +
                                     "' cannot run under '" + cmd.name + "'");
  }
  if (f.db) {
    if (spec.kind != ExperimentKind::CoverageVsGamma && spec.kind != ExperimentKind::CoveragePartialLoad) {
      throw sgnet::config::ConfigError("--db applies to gamma grids only");
    }
    spec.grid_unit = sgnet::config::GridUnit::Db;
  }
  if (f.seed && spec.sim) spec.sim->seed = *f.seed;
  spec.validate();
  return spec;
}

template <typename Fn>
int with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return std::cout ? 0 : kExitIo;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitIo;
  }
  fn(os);
  os.close();
  if (!os) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return kExitIo;
  }
  return 0;
}

int run_table(const Command& cmd, const CommonFlags& f) {
  const ExperimentSpec spec = load_spec(cmd, f);
  const std::string out = f.out.empty() ? spec.output_path : f.out;
  return with_output(out, [&](std::ostream& os) { sgnet::experiments::run_experiment(spec, os, f.jobs); });
}

int run_simulate(const Command& cmd, const CommonFlags& f) {
  ExperimentSpec spec = load_spec(cmd, f);
  sgnet::sim::SimConfig cfg = spec.sim.value_or(sgnet::sim::SimConfig{});
  if (f.seed) cfg.seed = *f.seed;
  const auto sets = sgnet::sim::run_simulation(spec.params, spec.betas, cfg, f.jobs);
  const std::string out = f.out.empty() ? spec.output_path : f.out;
  return with_output(out, [&](std::ostream& os) { sgnet::sim::write_samples_csv(sets, os); });
}

int run_validate(const CommonFlags& f, const std::vector<int>& only) {
  if (!f.config.empty() || f.db) throw sgnet::config::ConfigError("validate takes no --config or --db");
  sgnet::validation::Options opt;
  opt.seed = f.seed.value_or(1);
  opt.jobs = f.jobs;
  opt.only = only;
  std::cout << "isa " << sgnet::kernels::to_string(sgnet::kernels::active_isa()) << ", seed " << opt.seed
            << ", jobs " << opt.jobs << '\n';
  const auto results = sgnet::validation::run_acceptance(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << " of " << results.size() << " criteria passed\n";
  if (!f.out.empty()) {
    const int rc = with_output(f.out, [&](std::ostream& os) {
      for (const auto& r : results) os << sgnet::validation::format_line(r) << '\n';
    });
    if (rc != 0) return rc;
  }
  return failed == 0 ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage, rate and load curves of Poisson cellular networks"};
  app.require_subcommand(1);

  const std::vector<Command> commands = {
      {"coverage", ExperimentKind::CoverageVsGamma,
       {ExperimentKind::CoverageVsGamma, ExperimentKind::CoveragePartialLoad}},
      {"rate", ExperimentKind::RateVsBeta, {ExperimentKind::RateVsBeta}},
      {"load-curves", ExperimentKind::PeakRateVsRatio,
       {ExperimentKind::PeakRateVsRatio, ExperimentKind::ActualRateVsRatio, ExperimentKind::CoveragePartialLoad}},
      {"mgf", ExperimentKind::MgfProfile, {ExperimentKind::MgfProfile}},
      {"simulate", ExperimentKind::CoverageVsGamma, {}},
  };
  const char* help[] = {
      "coverage probability against the SIR threshold",
      "ergodic rate against the path-loss exponent",
      "peak or actual rate against the UE/BS density ratio",
      "interference MGF, exact against the two-term approximation",
      "raw Monte Carlo samples",
  };

  CommonFlags flags;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, help[i]);
    add_common(sub, flags);
    subs.emplace_back(sub, &commands[i]);
  }
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
  add_common(validate, flags);
  std::vector<int> only;
  validate->add_option("--criterion", only, "run only these criteria (1-8)")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(flags, only);
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      return cmd->name == "simulate" ? run_simulate(*cmd, flags) : run_table(*cmd, flags);
    }
  } catch (const sgnet::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sgnet::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
