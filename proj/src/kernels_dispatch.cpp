#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sgnet/kernels.hpp"

namespace sgnet::kernels {
namespace {

bool avx2_available() {
#if defined(SGNET_HAVE_AVX2_KERNELS)
  return avx2::supported();
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("SGNET_FORCE_SCALAR");
  if (env != nullptr && *env != '\0' && std::strcmp(env, "0") != 0) return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  selected().store(isa, std::memory_order_relaxed);
}

#if defined(SGNET_HAVE_AVX2_KERNELS)
#define SGNET_DISPATCH(fn, ...) \
  (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define SGNET_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

NearestSite nearest_site(double qx, double qy, std::span<const double> xs, std::span<const double> ys) {
  return SGNET_DISPATCH(nearest_site, qx, qy, xs, ys);
}

void squared_norms(std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
  SGNET_DISPATCH(squared_norms, xs, ys, out);
}

double weighted_power_sum(std::span<const double> r2, std::span<const double> weights, double half_beta) {
  return SGNET_DISPATCH(weighted_power_sum, r2, weights, half_beta);
}

#undef SGNET_DISPATCH

}  // namespace sgnet::kernels
