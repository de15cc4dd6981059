#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tempopt/calibration.hpp"
#include "tempopt/date.hpp"
#include "tempopt/rng.hpp"
#include "tempopt/series.hpp"
#include "tempopt/simulation.hpp"

namespace tempopt {

// Generator parameters for a synthetic daily dataset: Eq.-style seasonal
// mean plus an exact-coefficient AR(1) residual (lag-1 coefficient
// e^{-kappa}, innovation variance sigma^2 (1 - e^{-2 kappa}) / (2 kappa)).
// The recursion is written out here independently of the simulation
// engine so generate-then-fit tests exercise calibration against a
// separate construction.
struct SyntheticSpec {
  std::string state = "Synthetica";
  Date start = Date::ymd(1951, 1, 1);
  Date end = Date::ymd(2023, 12, 31);
  SeasonalMeanParams seasonal;
  double kappa = 0.2;
  double sigma = 2.0;
  JumpParams jumps = no_jumps();
  std::uint64_t seed = 1;
};

// Mild warming trend, annual cycle peaking mid-August (coldest mid-
// February), multi-decade mean 25 degC.
inline SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  spec.seasonal.a = 25.0;
  spec.seasonal.b = 0.02;
  spec.seasonal.c = 0.0;
  spec.seasonal.d = 0.0;
  spec.seasonal.alpha = -4.2426;
  spec.seasonal.beta = -4.2426;
  spec.seasonal.t0 = Date::ymd(1987, 1, 1);
  return spec;
}

inline DailyTemperatureSeries generate_synthetic_series(
    const SyntheticSpec& spec) {
  if (spec.end < spec.start) fail(Errc::config_error, "end before start");
  if (!(spec.kappa > 0.0)) fail(Errc::config_error, "kappa must be > 0");
  const std::size_t n = static_cast<std::size_t>(spec.end - spec.start) + 1;

  const double phi = std::exp(-spec.kappa);
  const double innovation_sd =
      spec.sigma *
      std::sqrt((1.0 - std::exp(-2.0 * spec.kappa)) / (2.0 * spec.kappa));
  const double stationary_sd =
      spec.sigma / std::sqrt(2.0 * spec.kappa);

  Rng rng(spec.seed, 0, 0);
  Rng jump_rng(spec.seed, 0, 1);
  const auto schedule =
      sample_jump_schedule(jump_rng, spec.jumps, static_cast<int>(n), 1.0);
  const auto shocks = schedule.cumulative();

  auto series =
      DailyTemperatureSeries::empty_series(spec.state, spec.start, n);
  double r = stationary_sd * rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) r = phi * r + innovation_sd * rng.normal();
    const double theta = evaluate_theta(spec.seasonal, series.date_at(i));
    series.set(i, theta + r + shocks[i]);
  }
  return series;
}

inline std::vector<RawTemperatureRecord> series_to_records(
    const DailyTemperatureSeries& series) {
  std::vector<RawTemperatureRecord> records;
  records.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.is_present(i)) continue;
    RawTemperatureRecord rec;
    rec.date = series.date_at(i);
    rec.state = series.state;
    rec.t_avg = series.temps[i];
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace tempopt
