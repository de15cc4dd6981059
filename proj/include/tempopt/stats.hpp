#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "tempopt/errors.hpp"

namespace tempopt {

// Pairwise (recursive halving) summation. The reduction tree depends only
// on the element order, never on thread count or chunking, which is what
// makes pricing reductions reproducible between serial and parallel runs.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() == 1) return xs[0];
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) fail(Errc::too_few_points, "mean of empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

// Unbiased (n-1) sample variance, two-pass.
inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) fail(Errc::too_few_points, "variance needs >= 2 points");
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - m;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

inline double sample_stddev(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs));
}

// Linear-interpolation quantile on a sorted sample (R type 7), p in [0,1].
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(Errc::too_few_points, "quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> xs, double p) {
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, p);
}

namespace detail {

// Regularized lower incomplete gamma P(a, x), series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction
// (x >= a+1).
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    fail(Errc::config_error, "gamma_p requires a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    fail(Errc::config_error, "gamma_q requires a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-square distribution with dof degrees of
// freedom: P(X > x).
inline double chi2_survival(double x, int dof) {
  if (dof < 1) fail(Errc::config_error, "chi2_survival requires dof >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * static_cast<double>(dof), 0.5 * x);
}

// Sample autocorrelation at the given lag (denominator over the full
// mean-centered sum of squares).
inline double autocorrelation(std::span<const double> xs, std::size_t lag) {
  const std::size_t n = xs.size();
  if (n <= lag) fail(Errc::too_few_points, "autocorrelation lag >= length");
  const double m = mean(xs);
  double denom = 0.0;
  for (double v : xs) {
    const double d = v - m;
    denom += d * d;
  }
  if (denom == 0.0) {
    fail(Errc::too_few_points, "autocorrelation of zero-variance series");
  }
  double num = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) {
    num += (xs[i] - m) * (xs[i + lag] - m);
  }
  return num / denom;
}

}  // namespace tempopt
