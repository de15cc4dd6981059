#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tempopt/errors.hpp"

namespace tempopt {

struct LeastSquaresFit {
  std::vector<double> coef;
  double rss = 0.0;  // residual sum of squares
  double tss = 0.0;  // total sum of squares about the mean of y
};

// Ordinary least squares via normal equations and Cholesky. The designs in
// this project are tiny (<= a dozen columns) and well scaled, so the
// normal-equation route is adequate; rank loss surfaces as SingularDesign.
inline LeastSquaresFit least_squares(
    const std::vector<std::vector<double>>& columns,
    std::span<const double> y) {
  const std::size_t p = columns.size();
  const std::size_t n = y.size();
  if (p == 0) fail(Errc::singular_design, "no regressors");
  for (const auto& c : columns) {
    if (c.size() != n) fail(Errc::config_error, "column length mismatch");
  }
  if (n < p) fail(Errc::too_few_points, "fewer rows than regressors");

  // Normal equations G = X'X, v = X'y.
  std::vector<double> g(p * p, 0.0), v(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += columns[a][i] * columns[b][i];
      g[a * p + b] = s;
      g[b * p + a] = s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += columns[a][i] * y[i];
    v[a] = s;
  }

  // Cholesky G = L L'.
  double max_diag = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    max_diag = std::max(max_diag, g[a * p + a]);
  }
  std::vector<double> l(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double s = g[a * p + b];
      for (std::size_t k = 0; k < b; ++k) s -= l[a * p + k] * l[b * p + k];
      if (a == b) {
        if (s <= 1e-12 * max_diag) {
          fail(Errc::singular_design, "rank-deficient design matrix");
        }
        l[a * p + a] = std::sqrt(s);
      } else {
        l[a * p + b] = s / l[b * p + b];
      }
    }
  }

  // Forward/back substitution.
  std::vector<double> z(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    double s = v[a];
    for (std::size_t k = 0; k < a; ++k) s -= l[a * p + k] * z[k];
    z[a] = s / l[a * p + a];
  }
  LeastSquaresFit fit;
  fit.coef.assign(p, 0.0);
  for (std::size_t a = p; a-- > 0;) {
    double s = z[a];
    for (std::size_t k = a + 1; k < p; ++k) s -= l[k * p + a] * fit.coef[k];
    fit.coef[a] = s / l[a * p + a];
  }

  double ysum = 0.0;
  for (std::size_t i = 0; i < n; ++i) ysum += y[i];
  const double ymean = ysum / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t a = 0; a < p; ++a) fitted += fit.coef[a] * columns[a][i];
    const double r = y[i] - fitted;
    fit.rss += r * r;
    const double dy = y[i] - ymean;
    fit.tss += dy * dy;
  }
  return fit;
}

}  // namespace tempopt
