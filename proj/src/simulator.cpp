#include "sgnet/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "sgnet/errors.hpp"
#include "sgnet/kernels.hpp"
#include "sgnet/spatial_grid.hpp"

namespace sgnet::sim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Squared distances and per-BS interference weights of one realization.
struct InterferenceField {
  std::vector<double> r2;
  std::vector<double> weights;
  double serving_r2 = 0.0;
  double serving_gain = 1.0;
};

InterferenceField build_field(const Deployment& d, const FadingDraw& fading) {
  InterferenceField f;
  const std::size_t n = d.bs_count();
  f.r2.resize(n);
  kernels::squared_norms(d.bs_x, d.bs_y, f.r2);
  f.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mark = fading.interferers.empty() ? 1.0 : fading.interferers[i];
    f.weights[i] = d.active_mask[i] != 0 ? mark : 0.0;
  }
  f.weights[d.serving_index] = 0.0;
  f.serving_r2 = f.r2[d.serving_index];
  f.serving_gain = fading.serving;
  return f;
}

double sinr(const InterferenceField& f, const NetworkParams& p, double beta) {
  const double half_beta = 0.5 * beta;
  // kappa and p_tx cancel against the interference unless there is noise.
  const double scale = p.p_tx / p.kappa;
  const double signal = scale * f.serving_gain * std::pow(f.serving_r2, -half_beta);
  const double interference = scale * kernels::weighted_power_sum(f.r2, f.weights, half_beta) + p.sigma_n2;
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return signal / interference;
}

}  // namespace

void SimConfig::validate() const {
  if (n_bs_target < 50) throw DomainError("n_bs_target must be >= 50");
  if (n_realizations < 1) throw DomainError("n_realizations must be >= 1");
}

std::size_t Deployment::active_count() const {
  return static_cast<std::size_t>(std::count(active_mask.begin(), active_mask.end(), std::uint8_t{1}));
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t realization_id, std::uint64_t purpose) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ realization_id) ^ purpose);
  return std::mt19937_64(key);
}

Deployment sample_deployment(const NetworkParams& p, const SimConfig& cfg, std::uint64_t realization_id) {
  p.validate();
  cfg.validate();
  auto rng = make_stream(cfg.seed, realization_id, kGeometryStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  Deployment d;
  const auto n = static_cast<std::size_t>(cfg.n_bs_target);
  d.window_radius = std::sqrt(static_cast<double>(n) / (std::numbers::pi * p.lambda_bs));
  const double radius = d.window_radius;
  auto drop = [&](std::vector<double>& xs, std::vector<double>& ys, std::size_t count) {
    xs.resize(count);
    ys.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double r = radius * std::sqrt(unit(rng));
      const double theta = kTwoPi * unit(rng);
      xs[i] = r * std::cos(theta);
      ys[i] = r * std::sin(theta);
    }
  };
  drop(d.bs_x, d.bs_y, n);

  const double mean_ue = p.lambda_ue * std::numbers::pi * radius * radius;
  std::size_t n_ue = 0;
  if (mean_ue > 0.0) n_ue = static_cast<std::size_t>(std::poisson_distribution<long long>(mean_ue)(rng));
  drop(d.ue_x, d.ue_y, n_ue);

  d.serving_index = kernels::nearest_site(0.0, 0.0, d.bs_x, d.bs_y).index;
  d.active_mask.assign(n, 1);
  d.ue_per_bs.assign(n, 0);
  return d;
}

double Deployment::interior_idle_fraction(double interior_fraction) const {
  const double r2 = interior_fraction * interior_fraction * window_radius * window_radius;
  std::size_t n = 0, idle = 0;
  for (std::size_t i = 0; i < bs_count(); ++i) {
    if (i == serving_index || bs_x[i] * bs_x[i] + bs_y[i] * bs_y[i] > r2) continue;
    ++n;
    idle += active_mask[i] == 0 ? 1 : 0;
  }
  return n == 0 ? 0.0 : static_cast<double>(idle) / static_cast<double>(n);
}

void assign_users(Deployment& d) {
  d.ue_per_bs.assign(d.bs_count(), 0);
  if (d.ue_x.empty()) return;
  const SpatialGrid grid(d.bs_x, d.bs_y, d.window_radius);
  for (std::size_t u = 0; u < d.ue_x.size(); ++u) ++d.ue_per_bs[grid.nearest(d.ue_x[u], d.ue_y[u])];
}

Deployment apply_idle_mode(Deployment d) {
  assign_users(d);
  for (std::size_t i = 0; i < d.bs_count(); ++i) d.active_mask[i] = d.ue_per_bs[i] > 0 ? 1 : 0;
  d.active_mask[d.serving_index] = 1;
  return d;
}

FadingDraw draw_fading(const Deployment& d, const SimConfig& cfg, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  FadingDraw f;
  f.serving = cfg.rayleigh_on_serving ? exp1(rng) : 1.0;
  if (cfg.fading_on_interferers) {
    f.interferers.resize(d.bs_count());
    for (double& m : f.interferers) m = exp1(rng);
  }
  return f;
}

double sir_from(const Deployment& d, const NetworkParams& p, const FadingDraw& fading) {
  return sinr(build_field(d, fading), p, p.beta);
}

double sample_sir(const Deployment& d, const NetworkParams& p, const SimConfig& cfg, std::mt19937_64& rng) {
  return sir_from(d, p, draw_fading(d, cfg, rng));
}

std::vector<SirSampleSet> run_simulation(const NetworkParams& p, std::span<const double> betas,
                                         const SimConfig& cfg, int jobs) {
  p.validate();
  cfg.validate();
  if (betas.empty()) throw DomainError("run_simulation: no path-loss exponent given");
  for (double b : betas) check_beta(b);

  const auto n = static_cast<std::size_t>(cfg.n_realizations);
  std::vector<SirSampleSet> out(betas.size());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    auto& s = out[b];
    s.beta = betas[b];
    s.sir_values.resize(n);
    s.rate_peak_samples.resize(n);
    s.rate_actual_samples.resize(n);
    s.n_users_in_cell.resize(n);
    s.n_active_bs.resize(n);
    s.inactive_fraction.resize(n);
  }

  auto realize = [&](std::size_t id) {
    Deployment d = sample_deployment(p, cfg, id);
    if (cfg.idle_mode) {
      d = apply_idle_mode(std::move(d));
    } else {
      assign_users(d);
    }
    auto rng = make_stream(cfg.seed, id, kFadingStream);
    const InterferenceField field = build_field(d, draw_fading(d, cfg, rng));
    const std::uint32_t users = d.users_in_serving_cell();
    const auto active = static_cast<std::uint32_t>(d.active_count());
    const double idle = d.interior_idle_fraction();
    for (std::size_t b = 0; b < betas.size(); ++b) {
      auto& s = out[b];
      const double sir = sinr(field, p, betas[b]);
      const double peak = std::log1p(sir);
      s.sir_values[id] = sir;
      s.rate_peak_samples[id] = peak;
      s.rate_actual_samples[id] = peak / users;
      s.n_users_in_cell[id] = users;
      s.n_active_bs[id] = active;
      s.inactive_fraction[id] = idle;
    }
  };

  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, n)));
  if (workers == 1) {
    for (std::size_t id = 0; id < n; ++id) realize(id);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t id = next.fetch_add(1); id < n; id = next.fetch_add(1)) realize(id);
    });
  }
  pool.clear();  // joins
  return out;
}

SirSampleSet run_simulation(const NetworkParams& p, const SimConfig& cfg, int jobs) {
  const double beta[] = {p.beta};
  return std::move(run_simulation(p, beta, cfg, jobs).front());
}

MeanEstimate mean_with_error(std::span<const double> values) {
  MeanEstimate m;
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  m.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return m;
}

RateEstimates estimate_rates(const SirSampleSet& samples) {
  if (samples.rate_peak_samples.size() != samples.size() || samples.rate_actual_samples.size() != samples.size()) {
    throw DomainError("estimate_rates: sample vectors differ in length");
  }
  std::vector<double> peak, actual;
  peak.reserve(samples.size());
  actual.reserve(samples.size());
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::isinf(samples.sir_values[i])) {
      ++infinite;
      continue;
    }
    peak.push_back(samples.rate_peak_samples[i]);
    actual.push_back(samples.rate_actual_samples[i]);
  }
  if (peak.size() < 100) {
    throw InsufficientSamplesError("estimate_rates: fewer than 100 finite SIR samples (" +
                                   std::to_string(peak.size()) + ")");
  }
  RateEstimates r;
  const auto pk = mean_with_error(peak);
  const auto ac = mean_with_error(actual);
  r.peak.value = pk.mean;
  r.peak.std_error = pk.std_error;
  r.peak.method = analytics::RateMethod::MonteCarlo;
  r.actual.value = ac.mean;
  r.actual.std_error = ac.std_error;
  r.actual.method = analytics::RateMethod::MonteCarlo;
  r.no_interference_fraction = static_cast<double>(infinite) / static_cast<double>(samples.size());
  r.used_samples = peak.size();
  return r;
}

CoverageEstimate empirical_coverage(const SirSampleSet& samples, std::span<const double> gamma_grid) {
  CoverageEstimate c;
  const auto n = static_cast<double>(samples.size());
  for (double g : gamma_grid) {
    const auto hits = std::count_if(samples.sir_values.begin(), samples.sir_values.end(),
                                    [g](double s) { return s >= g; });
    const double frac = n > 0 ? static_cast<double>(hits) / n : 0.0;
    c.gamma.push_back(g);
    c.pcov.push_back(frac);
    c.std_error.push_back(n > 0 ? std::sqrt(frac * (1.0 - frac) / n) : 0.0);
  }
  return c;
}

void write_samples_csv(std::span<const SirSampleSet> sets, std::ostream& os) {
  os << "beta,realization_id,sir,rate_peak,rate_actual,n_users,n_active_bs,inactive_fraction\n";
  char line[192];
  for (const auto& s : sets) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::snprintf(line, sizeof line, "%.10g,%zu,%.10g,%.10g,%.10g,%u,%u,%.10g\n", s.beta, i, s.sir_values[i],
                    s.rate_peak_samples[i], s.rate_actual_samples[i], s.n_users_in_cell[i], s.n_active_bs[i],
                    s.inactive_fraction[i]);
      os << line;
    }
  }
}

}  // namespace sgnet::sim
