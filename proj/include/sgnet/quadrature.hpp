#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with global error control.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "sgnet/errors.hpp"

namespace sgnet::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over the finite interval [a, b], bisecting the segment with
/// the largest error estimate until the total estimate meets the tolerance.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int intervals = 1;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (intervals >= opt.max_intervals) break;
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Segment can no longer be split in floating point.
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++intervals;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Final re-sum removes drift from the incremental updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  const bool ok = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return {total, error, intervals, ok};
}

/// Integrates f over [a, inf) through x = a + scale * t / (1 - t).
/// The integrand must decay fast enough for the mapped integral to be finite.
template <class F>
Result integrate_to_infinity(F&& f, double a, double scale, const Options& opt = {}) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double jac = scale / (one_minus * one_minus);
    const double v = f(x) * jac;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

/// Throws ConvergenceError when r did not meet its tolerance.
inline const Result& require_converged(const Result& r, const std::string& what) {
  if (!r.converged) throw ConvergenceError(what + ": quadrature did not converge", r.abs_error);
  return r;
}

}  // namespace sgnet::quad
