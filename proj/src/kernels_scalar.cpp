#include <cmath>
#include <limits>

#include "sgnet/kernels.hpp"

namespace sgnet::kernels::scalar {

NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys) {
  NearestSite best{xs.size(), std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) best = {i, d2};
  }
  return best;
}

void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] * xs[i] + ys[i] * ys[i];
}

double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r2.size(); ++i) {
    if (weights[i] != 0.0) sum += weights[i] * std::pow(r2[i], -half_beta);
  }
  return sum;
}

}  // namespace sgnet::kernels::scalar
