#pragma once

// Experiment description read from a sectioned key = value file. The
// schema is documented in docs/config.md.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgnet/network.hpp"
#include "sgnet/simulator.hpp"

namespace sgnet::config {

enum class ExperimentKind {
  CoverageVsGamma,
  RateVsBeta,
  CoveragePartialLoad,
  PeakRateVsRatio,
  ActualRateVsRatio,
  MgfProfile,
  Validate,
};

std::string to_string(ExperimentKind k);
std::optional<ExperimentKind> kind_from_string(const std::string& s);

enum class GridUnit { Linear, Db };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::CoverageVsGamma;
  NetworkParams params;
  /// Path-loss exponents swept as separate series. Defaults to {params.beta}.
  std::vector<double> betas;
  /// lambda_ue / lambda_bs values for coverage_partial_load.
  std::vector<double> ratios;
  /// Main axis: gamma, beta, density ratio or x depending on kind.
  std::vector<double> grid;
  GridUnit grid_unit = GridUnit::Linear;
  /// Serving path loss for mgf_profile.
  double l0 = 1.0;
  std::optional<sim::SimConfig> sim;
  std::string output_path;

  /// Throws ConfigError unless grid is nonempty and strictly increasing and
  /// every parameter is in range.
  void validate() const;
};

/// Parse or validation failure. line() is 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Defaults for a kind when no file is given.
ExperimentSpec default_spec(ExperimentKind kind);

ExperimentSpec parse_config_text(const std::string& text, const std::string& source = "<string>");
ExperimentSpec parse_config(const std::string& path);

/// Linear values of the grid (dB converted when grid_unit is Db).
std::vector<double> linear_grid(const ExperimentSpec& spec);

}  // namespace sgnet::config
