#pragma once

// Reference values computed independently of the library: plain long
// double series, composite Simpson rules and bisection.

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson rule on [a, b] with n (even) panels.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b,
                           int n = 20000) {
  const long double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return s * h / 3.0L;
}

/// 1F1(-d; 1-d; -x) = 1 - d * int_0^1 t^(-d-1) (e^(-x t) - 1) dt, with
/// t = u^(1/(1-d)) to remove the endpoint singularity.
inline long double kummer_neg_integral(long double d, long double x) {
  const long double p = 1.0L / (1.0L - d);
  auto f = [&](long double u) -> long double {
    if (u == 0.0L) return -x * p;
    const long double t = std::pow(u, p);
    return p * std::expm1(-x * t) / t;
  };
  return 1.0L - d * simpson(f, 0.0L, 1.0L, 40000);
}

/// Direct Kummer series in long double, for moderate |z|.
inline long double kummer_series(long double a, long double b, long double z) {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) / (b + n) * z / (n + 1);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

/// Intersection constant by bisection on [1, 1.5].
inline double intersection_bisect(double beta) {
  const double d = 2.0 / beta;
  const double g = std::tgamma(1.0 - d);
  auto r = [&](double c) { return -2.0 * c / (beta - 2.0) + c * c / (2.0 * beta - 2.0) + std::pow(c, d) * g - 1.0; };
  double lo = 1.0, hi = 1.5;
  const bool lo_neg = r(lo) < 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((r(mid) < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
