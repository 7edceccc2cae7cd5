#pragma once

// Data-parallel inner loops of the Monte Carlo simulator.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The variant is picked once at startup from CPUID; tests
// check the two against each other.
//
//   nearest_site       bitwise identical across variants
//   squared_norms      bitwise identical across variants
//   weighted_power_sum relative difference below 1e-13 (vector exp/log)

#include <cstddef>
#include <span>

namespace sgnet::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// Best variant this CPU and build support.
Isa detected_isa();
/// Variant used by the dispatching entry points.
Isa active_isa();
/// Overrides the dispatch choice. Requests for an unsupported variant fall
/// back to Scalar. Not thread-safe; call before starting workers.
void force_isa(Isa isa);

struct NearestSite {
  std::size_t index;
  double dist2;
};

/// Site closest to (qx, qy); ties go to the lowest index. Empty input
/// returns {size, +inf}.
NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys);

/// out[i] = xs[i]^2 + ys[i]^2.
void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out);

/// sum_i weights[i] * r2[i]^(-half_beta), skipping zero weights.
/// r2 must be positive wherever the weight is non-zero.
double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta);

namespace scalar {
NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys);
void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out);
double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta);
}  // namespace scalar

namespace avx2 {
bool supported();
NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys);
void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out);
double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta);
}  // namespace avx2

}  // namespace sgnet::kernels
