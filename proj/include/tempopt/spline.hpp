#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tempopt/errors.hpp"

namespace tempopt {

// Interpolating cubic spline with periodic boundary conditions: value,
// first and second derivative are continuous across the wrap point. Knot
// second derivatives come from the cyclic tridiagonal system solved with
// the Sherman-Morrison correction.
class PeriodicCubicSpline {
 public:
  PeriodicCubicSpline() = default;

  PeriodicCubicSpline(std::vector<double> xs, std::vector<double> ys,
                      double period)
      : xs_(std::move(xs)), ys_(std::move(ys)), period_(period) {
    const std::size_t n = xs_.size();
    if (n < 3) fail(Errc::too_few_points, "periodic spline needs >= 3 knots");
    if (ys_.size() != n) fail(Errc::config_error, "knot size mismatch");
    if (period_ <= 0.0) fail(Errc::config_error, "period must be positive");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(xs_[i] < xs_[i + 1])) {
        fail(Errc::config_error, "knots must be strictly increasing");
      }
    }
    if (!(xs_.back() - xs_.front() < period_)) {
      fail(Errc::config_error, "knot span must be shorter than the period");
    }

    // Interval widths; the last one wraps to the first knot.
    std::vector<double> h(n);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = xs_[i + 1] - xs_[i];
    h[n - 1] = xs_.front() + period_ - xs_.back();

    auto y_next = [&](std::size_t i) {
      return i + 1 < n ? ys_[i + 1] : ys_[0];
    };
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t prev = (i == 0) ? n - 1 : i - 1;
      sub[i] = h[prev] / 6.0;
      diag[i] = (h[prev] + h[i]) / 3.0;
      sup[i] = h[i] / 6.0;
      const double dnext = (y_next(i) - ys_[i]) / h[i];
      const double dprev = (ys_[i] - ys_[prev]) / h[prev];
      rhs[i] = dnext - dprev;
    }
    m2_ = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
    h_ = std::move(h);
  }

  double operator()(double x) const { return evaluate(x); }

  double evaluate(double x) const {
    const auto [i, t] = locate(x);
    const double h = h_[i];
    const double a = (h - t) / h;  // weight of left knot
    const double b = t / h;
    const double yl = ys_[i];
    const double yr = (i + 1 < ys_.size()) ? ys_[i + 1] : ys_[0];
    const double ml = m2_[i];
    const double mr = (i + 1 < m2_.size()) ? m2_[i + 1] : m2_[0];
    return a * yl + b * yr +
           ((a * a * a - a) * ml + (b * b * b - b) * mr) * (h * h) / 6.0;
  }

  double derivative(double x) const {
    const auto [i, t] = locate(x);
    const double h = h_[i];
    const double a = (h - t) / h;
    const double b = t / h;
    const double yl = ys_[i];
    const double yr = (i + 1 < ys_.size()) ? ys_[i + 1] : ys_[0];
    const double ml = m2_[i];
    const double mr = (i + 1 < m2_.size()) ? m2_[i + 1] : m2_[0];
    return (yr - yl) / h - (3.0 * a * a - 1.0) * h * ml / 6.0 +
           (3.0 * b * b - 1.0) * h * mr / 6.0;
  }

  double second_derivative(double x) const {
    const auto [i, t] = locate(x);
    const double h = h_[i];
    const double ml = m2_[i];
    const double mr = (i + 1 < m2_.size()) ? m2_[i + 1] : m2_[0];
    return ml * (h - t) / h + mr * t / h;
  }

  const std::vector<double>& knots_x() const { return xs_; }
  const std::vector<double>& knots_y() const { return ys_; }
  double period() const { return period_; }

 private:
  // Maps x into [x0, x0 + period) and returns (interval index, offset from
  // the interval's left knot).
  std::pair<std::size_t, double> locate(double x) const {
    double r = std::fmod(x - xs_.front(), period_);
    if (r < 0.0) r += period_;
    const double xr = xs_.front() + r;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), xr);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return {i, xr - xs_[i]};
  }

  static std::vector<double> solve_tridiagonal(std::span<const double> sub,
                                               std::span<const double> diag,
                                               std::span<const double> sup,
                                               std::span<const double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n), x(n);
    double beta = diag[0];
    if (beta == 0.0) fail(Errc::singular_design, "tridiagonal pivot is zero");
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
      beta = diag[i] - sub[i] * c[i - 1];
      if (beta == 0.0) {
        fail(Errc::singular_design, "tridiagonal pivot is zero");
      }
      c[i] = sup[i] / beta;
      d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
  }

  // Tridiagonal system with corner entries sub[0] (row 0, col n-1) and
  // sup[n-1] (row n-1, col 0).
  static std::vector<double> solve_cyclic_tridiagonal(
      std::span<const double> sub, std::span<const double> diag,
      std::span<const double> sup, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    const double beta_corner = sub[0];   // top-right
    const double alpha_corner = sup[n - 1];  // bottom-left
    const double gamma = -diag[0];

    std::vector<double> d2(diag.begin(), diag.end());
    d2[0] -= gamma;
    d2[n - 1] -= alpha_corner * beta_corner / gamma;

    auto x = solve_tridiagonal(sub, d2, sup, rhs);

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha_corner;
    auto z = solve_tridiagonal(sub, d2, sup, u);

    const double factor =
        (x[0] + beta_corner * x[n - 1] / gamma) /
        (1.0 + z[0] + beta_corner * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z[i];
    return x;
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> h_;
  std::vector<double> m2_;  // knot second derivatives
  double period_ = 0.0;
};

}  // namespace tempopt
