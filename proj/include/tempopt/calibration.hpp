#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/least_squares.hpp"
#include "tempopt/series.hpp"
#include "tempopt/spline.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

inline constexpr double kDaysPerYear = 365.25;
inline constexpr double kSeasonalOmega = 2.0 * std::numbers::pi / kDaysPerYear;

// Deterministic seasonal mean: cubic trend in scaled time plus one annual
// harmonic,
//   theta(t) = a + b s + c s^2 + d s^3 + alpha sin(w t_d + phi)
//            + beta cos(w t_d + phi),
// with t_d = days since t0 and s = t_d / time_scale. The sin/cos pair
// spans every phase, so phi is fixed to 0 and (alpha, beta) absorb it;
// that turns the fit into plain linear least squares.
struct SeasonalMeanParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double omega = kSeasonalOmega;
  Date t0;
  double time_scale = kDaysPerYear;

  friend bool operator==(const SeasonalMeanParams&,
                         const SeasonalMeanParams&) = default;
};

inline double theta_at_days(const SeasonalMeanParams& p, double days_since_t0) {
  const double s = days_since_t0 / p.time_scale;
  const double arg = p.omega * days_since_t0 + p.phi;
  return p.a + p.b * s + p.c * s * s + p.d * s * s * s +
         p.alpha * std::sin(arg) + p.beta * std::cos(arg);
}

inline double evaluate_theta(const SeasonalMeanParams& p, Date date) {
  return theta_at_days(p, static_cast<double>(date - p.t0));
}

struct SeasonalFit {
  SeasonalMeanParams params;
  double rss = 0.0;
  std::size_t n_obs = 0;
};

// Fits the seasonal mean by least squares on the basis
// {1, s, s^2, s^3, sin(wt), cos(wt)}. Time is centered on the series
// midpoint and scaled by 365.25 days so the cubic trend stays
// well-conditioned over many decades.
inline SeasonalFit fit_seasonal_mean(const DailyTemperatureSeries& train) {
  std::vector<std::size_t> idx;
  idx.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.is_present(i)) idx.push_back(i);
  }
  if (idx.empty()) fail(Errc::empty_input, "no observed days");
  const int span_days =
      static_cast<int>(idx.back()) - static_cast<int>(idx.front()) + 1;
  if (span_days < 730) {
    fail(Errc::too_few_years, "need >= 2 full years of observed data, have " +
                                  std::to_string(span_days) + " days");
  }

  SeasonalMeanParams params;
  params.t0 = train.date_at((idx.front() + idx.back()) / 2);
  params.time_scale = kDaysPerYear;

  const std::size_t n = idx.size();
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double td =
        static_cast<double>(train.date_at(idx[k]) - params.t0);
    const double s = td / params.time_scale;
    const double arg = params.omega * td;
    cols[0][k] = 1.0;
    cols[1][k] = s;
    cols[2][k] = s * s;
    cols[3][k] = s * s * s;
    cols[4][k] = std::sin(arg);
    cols[5][k] = std::cos(arg);
    y[k] = train.temps[idx[k]];
  }
  const auto fit = least_squares(cols, y);
  params.a = fit.coef[0];
  params.b = fit.coef[1];
  params.c = fit.coef[2];
  params.d = fit.coef[3];
  params.alpha = fit.coef[4];
  params.beta = fit.coef[5];
  return {params, fit.rss, n};
}

// Residuals r_t = T_obs(t) - theta(t) on the same daily axis as the input
// series; days without data stay invalid.
struct ResidualSeries {
  Date start;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return values.size(); }
  std::vector<double> valid_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (valid[i]) out.push_back(values[i]);
    }
    return out;
  }
};

inline ResidualSeries compute_residuals(const DailyTemperatureSeries& series,
                                        const SeasonalMeanParams& params) {
  ResidualSeries r;
  r.start = series.start;
  r.values.assign(series.size(), 0.0);
  r.valid.assign(series.size(), 0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.is_present(i)) continue;
    r.values[i] = series.temps[i] - evaluate_theta(params, series.date_at(i));
    r.valid[i] = 1;
  }
  return r;
}

struct MeanReversion {
  double kappa = 0.0;      // per day
  double ar1_coeff = 0.0;  // lag-1 coefficient, kappa = -ln(ar1_coeff)

  friend bool operator==(const MeanReversion&, const MeanReversion&) = default;
};

// AR(1) coefficient as the least-squares slope of r_{t+1} on r_t over
// consecutive-day pairs (pairs spanning gaps are skipped), then
// kappa = -ln(coeff). A coefficient at or above max_coeff is treated as a
// unit root: finite-sample slopes of a random walk land just below 1, so
// the literal >= 1 check would never fire.
inline MeanReversion estimate_kappa(const ResidualSeries& residuals,
                                    double min_coeff = 1e-4,
                                    double max_coeff = 0.999) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    if (residuals.valid[i] && residuals.valid[i + 1]) {
      x.push_back(residuals.values[i]);
      y.push_back(residuals.values[i + 1]);
    }
  }
  if (x.size() < 100) {
    fail(Errc::too_few_points,
         "AR(1) fit needs >= 100 consecutive residual pairs, have " +
             std::to_string(x.size()));
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    fail(Errc::too_few_points, "zero-variance residuals");
  }
  const double coeff = sxy / sxx;
  if (coeff >= max_coeff) {
    fail(Errc::non_stationary,
         "AR(1) coefficient " + std::to_string(coeff) + " at/above " +
             std::to_string(max_coeff));
  }
  if (coeff <= min_coeff) {
    fail(Errc::negative_autocorr,
         "AR(1) coefficient " + std::to_string(coeff) +
             " at/below floor; kappa undefined");
  }
  return {-std::log(coeff), coeff};
}

enum class VolatilitySource {
  residual,  // default: std of theta-residuals per day of year
  raw,       // paper-literal: std of raw temperatures per day of year
};

// Seasonal volatility as a periodic cubic spline through per-day-of-year
// standard deviations. Feb 29 observations fold into day 59. day_window
// pools each day with its +-w neighbours (wrapping across the year
// boundary); one value per day-of-year across ~70 years is far too noisy
// for a curve that gets evaluated pointwise, and +-2 days keeps bucket
// error under a few percent without visibly flattening the seasonal shape.
struct VolatilityCurve {
  std::vector<double> knot_days;    // 1..365
  std::vector<double> knot_sigmas;  // degC
  PeriodicCubicSpline spline;       // period 365

  double at_day_of_year(double day) const { return spline.evaluate(day); }
  double at(Date date) const {
    return spline.evaluate(static_cast<double>(date.day_of_year_365()));
  }

  friend bool operator==(const VolatilityCurve& a, const VolatilityCurve& b) {
    return a.knot_days == b.knot_days && a.knot_sigmas == b.knot_sigmas;
  }
};

// Flat curve, handy for synthetic models with a known diffusion scale.
inline VolatilityCurve constant_volatility(double sigma) {
  if (!(sigma >= 0.0)) fail(Errc::config_error, "sigma must be >= 0");
  VolatilityCurve curve;
  curve.knot_days.resize(365);
  curve.knot_sigmas.assign(365, sigma);
  for (int d = 0; d < 365; ++d) {
    curve.knot_days[static_cast<std::size_t>(d)] = static_cast<double>(d + 1);
  }
  curve.spline =
      PeriodicCubicSpline(curve.knot_days, curve.knot_sigmas, 365.0);
  return curve;
}

inline VolatilityCurve fit_volatility_spline(
    const DailyTemperatureSeries& train, const SeasonalMeanParams& params,
    VolatilitySource source = VolatilitySource::residual,
    int day_window = 2) {
  if (day_window < 0 || day_window > 182) {
    fail(Errc::config_error, "day_window out of range");
  }
  std::vector<std::vector<double>> buckets(365);
  std::size_t total = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!train.is_present(i)) continue;
    const Date date = train.date_at(i);
    const int doy = date.day_of_year_365();  // 1..365
    const double v = source == VolatilitySource::residual
                         ? train.temps[i] - evaluate_theta(params, date)
                         : train.temps[i];
    buckets[static_cast<std::size_t>(doy - 1)].push_back(v);
    ++total;
  }
  if (total < 10 * 365) {
    fail(Errc::too_few_points,
         "volatility fit needs >= 10 observations per day of year on average");
  }

  std::vector<double> days(365), sigmas(365);
  std::vector<double> pooled;
  for (int d = 0; d < 365; ++d) {
    pooled.clear();
    for (int w = -day_window; w <= day_window; ++w) {
      const int k = ((d + w) % 365 + 365) % 365;
      pooled.insert(pooled.end(), buckets[static_cast<std::size_t>(k)].begin(),
                    buckets[static_cast<std::size_t>(k)].end());
    }
    if (pooled.size() < 2) {
      fail(Errc::empty_bucket, "day of year " + std::to_string(d + 1) +
                                   " has fewer than 2 observations");
    }
    days[static_cast<std::size_t>(d)] = static_cast<double>(d + 1);
    sigmas[static_cast<std::size_t>(d)] = sample_stddev(pooled);
  }

  VolatilityCurve curve;
  curve.knot_days = days;
  curve.knot_sigmas = sigmas;
  curve.spline = PeriodicCubicSpline(std::move(days), std::move(sigmas), 365.0);

  // The fitted sigma(t) must be usable as a diffusion coefficient.
  for (int k = 0; k < 3650; ++k) {
    const double day = 1.0 + static_cast<double>(k) * 0.1;
    if (!(curve.spline.evaluate(day) > 0.0)) {
      fail(Errc::config_error,
           "volatility spline non-positive near day " + std::to_string(day));
    }
  }
  return curve;
}

enum class RefSide { below, above };

// Reference temperature: mean -/+ one standard deviation of all observed
// days whose calendar month falls in `months`.
inline double compute_reference_temperature(
    const DailyTemperatureSeries& series, const std::set<int>& months,
    RefSide side) {
  std::vector<double> sample;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.is_present(i)) continue;
    if (months.count(static_cast<int>(series.date_at(i).month())) > 0) {
      sample.push_back(series.temps[i]);
    }
  }
  if (sample.size() < 30) {
    fail(Errc::too_few_points,
         "reference temperature needs >= 30 observations in the month set");
  }
  const double mu = mean(sample);
  const double sigma = sample_stddev(sample);
  return side == RefSide::below ? mu - sigma : mu + sigma;
}

// Shock process parameters. Heatwaves and coldwaves start independently
// day by day; an active event blocks new starts for its duration.
struct JumpParams {
  double p_h = 0.0;      // heatwave start probability per day
  double p_c = 0.0;      // coldwave start probability per day
  double mu_h = 0.0;     // degC, > 0
  double sigma_h = 0.0;  // degC
  double mu_c = 0.0;     // degC, < 0
  double sigma_c = 0.0;  // degC
  int duration = 1;      // days
  double lambda_j = 0.0; // p_h + p_c

  friend bool operator==(const JumpParams&, const JumpParams&) = default;
};

// The shock layer is fixed exogenously: 0.5%/day start probability per
// direction, +-5 degC mean shift over 5 days. The spread is not pinned
// down anywhere, so 1 degC keeps draws clearly signed.
inline JumpParams default_jump_params() {
  JumpParams j;
  j.p_h = 0.005;
  j.p_c = 0.005;
  j.mu_h = 5.0;
  j.sigma_h = 1.0;
  j.mu_c = -5.0;
  j.sigma_c = 1.0;
  j.duration = 5;
  j.lambda_j = j.p_h + j.p_c;
  return j;
}

inline JumpParams no_jumps() {
  JumpParams j;
  j.duration = 1;
  return j;
}

// Complete calibrated dynamics for one state.
struct TemperatureModel {
  std::string state;
  SeasonalMeanParams seasonal;
  MeanReversion reversion;
  VolatilityCurve volatility;
  JumpParams jumps;
  double risk_aversion_lambda = 0.0;  // 1/degC
  double t_ref_hdd = 0.0;
  double t_ref_cdd = 0.0;

  double theta(Date date) const { return evaluate_theta(seasonal, date); }
  double sigma(Date date) const { return volatility.at(date); }

  friend bool operator==(const TemperatureModel&,
                         const TemperatureModel&) = default;
};

struct CalibrationOptions {
  std::set<int> winter_months = {12, 1, 2};
  std::set<int> monsoon_months = {6, 7, 8, 9};
  VolatilitySource volatility_source = VolatilitySource::residual;
  int vol_day_window = 2;
  double risk_aversion_lambda = 0.0;
  JumpParams jumps = default_jump_params();
};

struct CalibrationDiagnostics {
  Date train_first;
  Date train_last;
  std::size_t n_obs = 0;
  double seasonal_rss = 0.0;
  double ar1_coeff = 0.0;
  std::size_t ar1_pairs = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

inline std::pair<TemperatureModel, CalibrationDiagnostics> calibrate_model(
    const DailyTemperatureSeries& train, const CalibrationOptions& opts = {}) {
  TemperatureModel model;
  model.state = train.state;

  const auto seasonal = fit_seasonal_mean(train);
  model.seasonal = seasonal.params;

  const auto residuals = compute_residuals(train, model.seasonal);
  model.reversion = estimate_kappa(residuals);
  model.volatility = fit_volatility_spline(
      train, model.seasonal, opts.volatility_source, opts.vol_day_window);
  model.jumps = opts.jumps;
  model.risk_aversion_lambda = opts.risk_aversion_lambda;
  model.t_ref_hdd =
      compute_reference_temperature(train, opts.winter_months, RefSide::below);
  model.t_ref_cdd =
      compute_reference_temperature(train, opts.monsoon_months, RefSide::above);
  if (!(model.t_ref_hdd < model.t_ref_cdd)) {
    fail(Errc::config_error,
         "HDD reference temperature must lie below the CDD reference");
  }

  CalibrationDiagnostics diag;
  diag.train_first = train.start;
  diag.train_last = train.last_date();
  diag.n_obs = seasonal.n_obs;
  diag.seasonal_rss = seasonal.rss;
  diag.ar1_coeff = model.reversion.ar1_coeff;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    if (residuals.valid[i] && residuals.valid[i + 1]) ++pairs;
  }
  diag.ar1_pairs = pairs;
  diag.sigma_min = *std::min_element(model.volatility.knot_sigmas.begin(),
                                     model.volatility.knot_sigmas.end());
  diag.sigma_max = *std::max_element(model.volatility.knot_sigmas.begin(),
                                     model.volatility.knot_sigmas.end());
  return {std::move(model), diag};
}

}  // namespace tempopt
