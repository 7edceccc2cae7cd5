#pragma once

// Monte Carlo oracle for the analytical layer. A realization drops a fixed
// number of BSs uniformly on a disc whose radius follows from the BS
// density, overlays a Poisson number of UEs on the same disc, pins the
// reference UE at the origin and attaches it to its nearest BS.
//
// Every realization draws from its own generator keyed by
// (seed, realization_id), so results do not depend on worker count.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "sgnet/analytics.hpp"
#include "sgnet/network.hpp"

namespace sgnet::sim {

struct SimConfig {
  int n_bs_target = 500;
  int n_realizations = 10000;
  std::uint64_t seed = 1;
  bool rayleigh_on_serving = true;
  bool fading_on_interferers = false;
  /// Switch off BSs whose Voronoi cell holds no UE.
  bool idle_mode = false;

  /// Throws DomainError; n_bs_target >= 50 guards against edge effects.
  void validate() const;
};

struct Deployment {
  std::vector<double> bs_x, bs_y;
  std::vector<double> ue_x, ue_y;  ///< overlay UEs; the reference UE is implicit
  std::vector<std::uint8_t> active_mask;
  std::vector<std::uint32_t> ue_per_bs;  ///< overlay UEs attached to each BS
  std::size_t serving_index = 0;
  double window_radius = 0.0;

  std::size_t bs_count() const { return bs_x.size(); }
  std::size_t active_count() const;
  /// Overlay UEs in the serving cell plus the reference UE.
  std::uint32_t users_in_serving_cell() const { return ue_per_bs[serving_index] + 1; }
  /// Idle share among non-serving BSs within interior_fraction * window_radius
  /// of the origin. Cells near the window edge lose UEs to the outside.
  double interior_idle_fraction(double interior_fraction = 0.5) const;
};

/// Generator stream keyed by (seed, realization_id, purpose).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t realization_id, std::uint64_t purpose);

inline constexpr std::uint64_t kGeometryStream = 0;
inline constexpr std::uint64_t kFadingStream = 1;

Deployment sample_deployment(const NetworkParams& p, const SimConfig& cfg, std::uint64_t realization_id);

/// Attaches every overlay UE to its nearest BS (fills ue_per_bs).
void assign_users(Deployment& d);

/// assign_users, then marks a BS active iff it serves a UE or is the
/// reference UE's server.
Deployment apply_idle_mode(Deployment d);

struct FadingDraw {
  double serving = 1.0;              ///< |h0|^2
  std::vector<double> interferers;   ///< per-BS marks; empty means all ones
};

FadingDraw draw_fading(const Deployment& d, const SimConfig& cfg, std::mt19937_64& rng);

/// SINR for a given fading draw. +inf when no interferer is active and
/// there is no noise.
double sir_from(const Deployment& d, const NetworkParams& p, const FadingDraw& fading);

double sample_sir(const Deployment& d, const NetworkParams& p, const SimConfig& cfg, std::mt19937_64& rng);

struct SirSampleSet {
  double beta = 0.0;
  std::vector<double> sir_values;
  std::vector<double> rate_peak_samples;    ///< log(1 + SIR)
  std::vector<double> rate_actual_samples;  ///< peak / users in the serving cell
  std::vector<std::uint32_t> n_users_in_cell;
  std::vector<std::uint32_t> n_active_bs;
  /// Deployment::interior_idle_fraction of each realization.
  std::vector<double> inactive_fraction;

  std::size_t size() const { return sir_values.size(); }
};

/// Runs cfg.n_realizations realizations on `jobs` threads and returns one
/// sample set per beta, all sharing the same deployments and fading.
std::vector<SirSampleSet> run_simulation(const NetworkParams& p, std::span<const double> betas,
                                         const SimConfig& cfg, int jobs = 1);

/// Single-beta convenience (uses p.beta).
SirSampleSet run_simulation(const NetworkParams& p, const SimConfig& cfg, int jobs = 1);

struct RateEstimates {
  analytics::RateResult peak;
  analytics::RateResult actual;
  double no_interference_fraction = 0.0;
  std::size_t used_samples = 0;
};

/// Sample means with standard errors. Infinite-SIR realizations are left
/// out and reported through no_interference_fraction. Throws
/// InsufficientSamplesError below 100 usable samples.
RateEstimates estimate_rates(const SirSampleSet& samples);

struct CoverageEstimate {
  std::vector<double> gamma;
  std::vector<double> pcov;
  std::vector<double> std_error;
};

CoverageEstimate empirical_coverage(const SirSampleSet& samples, std::span<const double> gamma_grid);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate mean_with_error(std::span<const double> values);

/// One row per (beta, realization): beta, realization_id, sir, rate_peak,
/// rate_actual, n_users, n_active_bs, inactive_fraction.
void write_samples_csv(std::span<const SirSampleSet> sets, std::ostream& os);

}  // namespace sgnet::sim
