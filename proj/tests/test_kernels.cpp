#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "sgnet/kernels.hpp"
#include "sgnet/spatial_grid.hpp"

using namespace sgnet;

namespace {

struct Points {
  std::vector<double> x, y;
};

Points random_points(std::size_t n, std::uint64_t seed, double extent = 1000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  Points p;
  for (std::size_t i = 0; i < n; ++i) {
    p.x.push_back(u(rng));
    p.y.push_back(u(rng));
  }
  return p;
}

std::size_t brute_nearest(const Points& p, double qx, double qy) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double dx = p.x[i] - qx, dy = p.y[i] - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("scalar kernels") {
  const Points p = random_points(37, 1);
  const auto hit = kernels::scalar::nearest_site(3.0, -4.0, p.x, p.y);
  CHECK(hit.index == brute_nearest(p, 3.0, -4.0));
  const auto empty = kernels::scalar::nearest_site(0.0, 0.0, {}, {});
  CHECK(empty.index == 0);
  CHECK(std::isinf(empty.dist2));

  std::vector<double> r2(p.x.size());
  kernels::scalar::squared_norms(p.x, p.y, r2);
  CHECK(r2[5] == p.x[5] * p.x[5] + p.y[5] * p.y[5]);

  const std::vector<double> rr = {1.0, 4.0, 9.0};
  const std::vector<double> w = {1.0, 0.0, 2.0};
  CHECK(kernels::scalar::weighted_power_sum(rr, w, 1.0) == doctest::Approx(1.0 + 2.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("ties go to the lowest index") {
  const std::vector<double> x = {1.0, -1.0, 1.0, 0.0, 1.0};
  const std::vector<double> y = {0.0, 0.0, 0.0, 5.0, 0.0};
  CHECK(kernels::scalar::nearest_site(0.0, 0.0, x, y).index == 0);
  CHECK(kernels::nearest_site(0.0, 0.0, x, y).index == 0);
  if (kernels::avx2::supported()) CHECK(kernels::avx2::nearest_site(0.0, 0.0, x, y).index == 0);
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kernels::avx2::supported()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> q(-1200.0, 1200.0);
  for (std::size_t n = 0; n <= 67; ++n) {
    const Points p = random_points(n, 100 + n);
    for (int k = 0; k < 20; ++k) {
      const double qx = q(rng), qy = q(rng);
      const auto a = kernels::scalar::nearest_site(qx, qy, p.x, p.y);
      const auto b = kernels::avx2::nearest_site(qx, qy, p.x, p.y);
      CHECK(a.index == b.index);
      CHECK((a.dist2 == b.dist2 || (std::isinf(a.dist2) && std::isinf(b.dist2))));
    }
    std::vector<double> ra(n), rb(n);
    kernels::scalar::squared_norms(p.x, p.y, ra);
    kernels::avx2::squared_norms(p.x, p.y, rb);
    CHECK(ra == rb);

    std::vector<double> w(n);
    std::bernoulli_distribution on(0.7);
    std::exponential_distribution<double> mark(1.0);
    for (auto& v : w) v = on(rng) ? mark(rng) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] == 0.0) ra[i] = 0.0;  // zero-weight lanes must be ignored even at r2 = 0
    }
    for (double half_beta : {1.25, 1.5, 2.0, 2.5}) {
      const double s = kernels::scalar::weighted_power_sum(ra, w, half_beta);
      const double v = kernels::avx2::weighted_power_sum(ra, w, half_beta);
      CHECK(std::abs(s - v) <= 1e-13 * std::abs(s));
    }
  }
}

TEST_CASE("power sum over a wide dynamic range") {
  if (!kernels::avx2::supported()) return;
  std::vector<double> r2 = {1e-6, 1.0, 1e6, 1e12, 1e18, 3.7e3, 2.2e9, 5.5};
  std::vector<double> w(r2.size(), 1.0);
  const double s = kernels::scalar::weighted_power_sum(r2, w, 2.0);
  const double v = kernels::avx2::weighted_power_sum(r2, w, 2.0);
  CHECK(std::abs(s - v) <= 1e-13 * s);
}

TEST_CASE("dispatch") {
  const auto detected = kernels::detected_isa();
  kernels::force_isa(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  kernels::force_isa(detected);
  CHECK(kernels::active_isa() == detected);
  CHECK(std::string(kernels::to_string(kernels::Isa::Avx2)) == "avx2");
}

TEST_CASE("spatial grid agrees with a linear scan") {
  for (std::size_t n : {1u, 2u, 5u, 50u, 500u, 3000u}) {
    const Points p = random_points(n, 7 * n);
    const sim::SpatialGrid grid(p.x, p.y, 1000.0);
    CHECK(grid.size() == n);
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> q(-1100.0, 1100.0);  // some queries fall outside
    for (int k = 0; k < 2000; ++k) {
      const double qx = q(rng), qy = q(rng);
      CHECK(grid.nearest(qx, qy) == brute_nearest(p, qx, qy));
    }
  }
}

TEST_CASE("spatial grid with duplicated sites") {
  Points p = random_points(200, 3);
  p.x.push_back(p.x[17]);
  p.y.push_back(p.y[17]);
  const sim::SpatialGrid grid(p.x, p.y, 1000.0);
  CHECK(grid.nearest(p.x[17], p.y[17]) == 17);
  CHECK_THROWS(sim::SpatialGrid({}, {}, 1.0));
}
