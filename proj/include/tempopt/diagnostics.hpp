#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tempopt/calibration.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/least_squares.hpp"
#include "tempopt/series.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

struct TestStatistic {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Ljung-Box portmanteau test for autocorrelation up to `lags`:
//   Q = n (n + 2) sum_{k=1..lags} rho_k^2 / (n - k),
// p-value from chi-square with `lags` degrees of freedom.
inline TestStatistic ljung_box(std::span<const double> residuals,
                               int lags = 20) {
  if (lags < 1) fail(Errc::config_error, "lags must be >= 1");
  const std::size_t n = residuals.size();
  if (n <= static_cast<std::size_t>(lags)) {
    fail(Errc::too_few_points, "series shorter than lag count");
  }
  const double m = mean(residuals);
  double denom = 0.0;
  for (double v : residuals) {
    const double d = v - m;
    denom += d * d;
  }
  if (denom == 0.0) {
    fail(Errc::too_few_points,
         "zero-variance series, autocorrelations undefined");
  }
  double q = 0.0;
  const double nd = static_cast<double>(n);
  for (int k = 1; k <= lags; ++k) {
    double num = 0.0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i) {
      num += (residuals[i] - m) * (residuals[i + static_cast<std::size_t>(k)] - m);
    }
    const double rho = num / denom;
    q += rho * rho / (nd - static_cast<double>(k));
  }
  q *= nd * (nd + 2.0);
  return {q, chi2_survival(q, lags)};
}

// Engle's ARCH-LM test: regress r_t^2 on an intercept plus `lags` of its
// own past, statistic = (rows in the regression) * R^2, chi-square with
// `lags` degrees of freedom.
inline TestStatistic arch_lm(std::span<const double> residuals,
                             int lags = 10) {
  if (lags < 1) fail(Errc::config_error, "lags must be >= 1");
  const std::size_t n = residuals.size();
  if (n <= 2 * static_cast<std::size_t>(lags)) {
    fail(Errc::too_few_points, "series shorter than 2 * lag count");
  }
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = residuals[i] * residuals[i];

  const std::size_t rows = n - static_cast<std::size_t>(lags);
  std::vector<std::vector<double>> cols(
      static_cast<std::size_t>(lags) + 1, std::vector<double>(rows));
  std::vector<double> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    cols[0][i] = 1.0;
    for (int k = 1; k <= lags; ++k) {
      cols[static_cast<std::size_t>(k)][i] =
          sq[i + static_cast<std::size_t>(lags - k)];
    }
    y[i] = sq[i + static_cast<std::size_t>(lags)];
  }
  const auto fit = least_squares(cols, y);
  if (fit.tss == 0.0) {
    fail(Errc::singular_design, "squared residuals have zero variance");
  }
  const double r2 = 1.0 - fit.rss / fit.tss;
  const double stat = static_cast<double>(rows) * r2;
  return {stat, chi2_survival(stat, lags)};
}

struct ForecastErrors {
  double rmse = 0.0;
  double rmse_pct = 0.0;
  double mae = 0.0;
  std::size_t n = 0;
};

// Errors of the deterministic seasonal forecast theta(t) against observed
// temperatures (risk adjustment and jumps excluded).
inline ForecastErrors forecast_errors(const TemperatureModel& model,
                                      const DailyTemperatureSeries& observed) {
  std::vector<double> abs_err, sq_err, obs;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!observed.is_present(i)) continue;
    const double e =
        observed.temps[i] - model.theta(observed.date_at(i));
    abs_err.push_back(std::fabs(e));
    sq_err.push_back(e * e);
    obs.push_back(observed.temps[i]);
  }
  if (obs.empty()) {
    fail(Errc::empty_overlap, "no observed days overlap the model");
  }
  ForecastErrors out;
  out.n = obs.size();
  out.rmse = std::sqrt(mean(sq_err));
  out.mae = mean(abs_err);
  out.rmse_pct = 100.0 * out.rmse / mean(obs);
  return out;
}

struct ValidationReport {
  double rmse = 0.0;
  double rmse_pct = 0.0;
  double mae = 0.0;
  double ljung_box_stat = 0.0;
  double ljung_box_p = 1.0;
  double arch_lm_stat = 0.0;
  double arch_lm_p = 1.0;
  std::size_t sample_count = 0;
};

// Full residual diagnostics. The white-noise tests run on the AR(1)
// innovations e_t = r_t - phi r_{t-1} (consecutive-day pairs only); the
// raw theta-residuals are autocorrelated by construction, so testing them
// directly would only re-detect the mean reversion.
inline ValidationReport validate_model(const TemperatureModel& model,
                                       const DailyTemperatureSeries& observed,
                                       int lb_lags = 20, int arch_lags = 10) {
  const auto errors = forecast_errors(model, observed);
  const auto residuals = compute_residuals(observed, model.seasonal);

  std::vector<double> innovations;
  const double phi = model.reversion.ar1_coeff;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    if (residuals.valid[i] && residuals.valid[i + 1]) {
      innovations.push_back(residuals.values[i + 1] -
                            phi * residuals.values[i]);
    }
  }
  const auto lb = ljung_box(innovations, lb_lags);
  const auto arch = arch_lm(innovations, arch_lags);

  ValidationReport report;
  report.rmse = errors.rmse;
  report.rmse_pct = errors.rmse_pct;
  report.mae = errors.mae;
  report.ljung_box_stat = lb.statistic;
  report.ljung_box_p = lb.p_value;
  report.arch_lm_stat = arch.statistic;
  report.arch_lm_p = arch.p_value;
  report.sample_count = errors.n;
  return report;
}

}  // namespace tempopt
