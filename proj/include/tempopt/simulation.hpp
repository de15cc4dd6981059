#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "tempopt/calibration.hpp"
#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/rng.hpp"

namespace tempopt {

struct SimulationConfig {
  Date start;
  int horizon = 1;    // number of days on the axis, including day 0
  int n_paths = 1;
  std::uint64_t seed = 0;
  double vol_scale = 1.0;
  double jump_prob_scale = 1.0;
  // Temperature on day 0; defaults to theta(start).
  std::optional<double> initial_temp;
};

// Simulated temperature paths. temps is row-major n_paths x horizon;
// regenerating with the same model and config reproduces it element for
// element regardless of thread count.
struct PathSet {
  Date start;
  int horizon = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  std::uint64_t model_fingerprint = 0;
  std::vector<double> temps;

  std::span<const double> path(int p) const {
    return {temps.data() + static_cast<std::size_t>(p) *
                               static_cast<std::size_t>(horizon),
            static_cast<std::size_t>(horizon)};
  }
  double at(int p, int day) const { return path(p)[static_cast<std::size_t>(day)]; }
  Date date_at(int day) const { return start + day; }
  Date last_date() const { return start + horizon - 1; }
};

namespace detail {

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ULL;

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  void add(double v) {
    const auto b = std::bit_cast<std::uint64_t>(v);
    bytes(&b, sizeof(b));
  }
  void add(std::uint64_t v) { bytes(&v, sizeof(v)); }
  void add(std::int64_t v) { bytes(&v, sizeof(v)); }
  void add(int v) { add(static_cast<std::int64_t>(v)); }
  void add(std::string_view s) { bytes(s.data(), s.size()); }
};

inline std::uint64_t fingerprint(const TemperatureModel& m,
                                 const SimulationConfig& c) {
  Fnv1a f;
  f.add(m.state);
  f.add(m.seasonal.a);
  f.add(m.seasonal.b);
  f.add(m.seasonal.c);
  f.add(m.seasonal.d);
  f.add(m.seasonal.alpha);
  f.add(m.seasonal.beta);
  f.add(m.seasonal.phi);
  f.add(m.seasonal.omega);
  f.add(static_cast<std::int64_t>(m.seasonal.t0.serial()));
  f.add(m.seasonal.time_scale);
  f.add(m.reversion.kappa);
  f.add(m.reversion.ar1_coeff);
  for (double v : m.volatility.knot_days) f.add(v);
  for (double v : m.volatility.knot_sigmas) f.add(v);
  f.add(m.jumps.p_h);
  f.add(m.jumps.p_c);
  f.add(m.jumps.mu_h);
  f.add(m.jumps.sigma_h);
  f.add(m.jumps.mu_c);
  f.add(m.jumps.sigma_c);
  f.add(m.jumps.duration);
  f.add(m.jumps.lambda_j);
  f.add(m.risk_aversion_lambda);
  f.add(m.t_ref_hdd);
  f.add(m.t_ref_cdd);
  f.add(static_cast<std::int64_t>(c.start.serial()));
  f.add(c.horizon);
  f.add(c.n_paths);
  f.add(c.seed);
  f.add(c.vol_scale);
  f.add(c.jump_prob_scale);
  f.add(c.initial_temp ? *c.initial_temp : std::nan(""));
  return f.h;
}

}  // namespace detail

struct JumpSchedule {
  // Day-k increment of the cumulative shock: +Y when an event starts,
  // -Y on the day after it ends. Expiry and a fresh start can share a
  // day, in which case the increments merge.
  std::vector<double> increments;
  std::vector<int> event_starts;
  std::vector<double> event_magnitudes;

  std::vector<double> cumulative() const {
    std::vector<double> out(increments.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
      acc += increments[i];
      out[i] = acc;
    }
    return out;
  }
};

// Draws the shock schedule for one path. Every day consumes exactly one
// uniform (start decision) and one normal (candidate magnitude) whether or
// not anything happens, so schedules for different jump_prob_scale values
// stay aligned draw for draw. While an event is active no new event can
// start; heatwaves and coldwaves never overlap.
inline JumpSchedule sample_jump_schedule(Rng& rng, const JumpParams& jumps,
                                         int horizon,
                                         double jump_prob_scale = 1.0) {
  const double ph = jump_prob_scale * jumps.p_h;
  const double pc = jump_prob_scale * jumps.p_c;
  if (ph + pc > 1.0) {
    fail(Errc::prob_overflow,
         "scaled jump probability " + std::to_string(ph + pc) + " exceeds 1");
  }
  JumpSchedule schedule;
  schedule.increments.assign(static_cast<std::size_t>(horizon), 0.0);
  int active_until = -1;  // last day of the running event
  for (int day = 0; day < horizon; ++day) {
    const double u = rng.uniform01();
    const double z = rng.normal();
    if (day <= active_until) continue;
    double magnitude = 0.0;
    if (u < ph) {
      magnitude = jumps.mu_h + jumps.sigma_h * z;
    } else if (u < ph + pc) {
      magnitude = jumps.mu_c + jumps.sigma_c * z;
    } else {
      continue;
    }
    schedule.increments[static_cast<std::size_t>(day)] += magnitude;
    const int end = day + jumps.duration;  // first day after the event
    if (end < horizon) {
      schedule.increments[static_cast<std::size_t>(end)] -= magnitude;
    }
    schedule.event_starts.push_back(day);
    schedule.event_magnitudes.push_back(magnitude);
    active_until = end - 1;
  }
  return schedule;
}

// Generates Monte Carlo paths of the mean-reverting shock model
//   dT = kappa (theta(t) - T) dt + sigma(t) dW + dJ - lambda sigma(t)^2 dt
// on a daily grid. The linear pull uses the exact one-day transition
// (decay e^{-kappa}, Gaussian scale sqrt((1 - e^{-2 kappa}) / (2 kappa)),
// drift weight (1 - e^{-kappa}) / kappa) so the discrete chain reproduces
// the continuous stationary mean theta - lambda sigma^2 / kappa and
// variance sigma^2 / (2 kappa) without step bias; a plain first-order
// step at dt = 1 day inflates the stationary variance by kappa/2 * 100%.
// vol_scale multiplies sigma everywhere, including inside the risk
// adjustment. Path p draws from substreams keyed by (seed, p), making the
// result independent of execution order.
inline PathSet simulate_paths(const TemperatureModel& model,
                              const SimulationConfig& config,
                              int n_threads = 1) {
  if (config.n_paths < 1) fail(Errc::config_error, "n_paths must be >= 1");
  if (config.horizon < 1) fail(Errc::config_error, "horizon must be >= 1");
  if (!(config.vol_scale > 0.0)) {
    fail(Errc::config_error, "vol_scale must be > 0");
  }
  if (config.jump_prob_scale < 0.0) {
    fail(Errc::config_error, "jump_prob_scale must be >= 0");
  }
  if (config.jump_prob_scale * (model.jumps.p_h + model.jumps.p_c) > 1.0) {
    fail(Errc::prob_overflow, "scaled jump probability exceeds 1");
  }
  if (n_threads < 1) n_threads = 1;

  const int horizon = config.horizon;
  const double kappa = model.reversion.kappa;
  double pull, gauss_scale, drift_scale;
  if (kappa > 0.0) {
    const double decay = std::exp(-kappa);
    pull = 1.0 - decay;
    gauss_scale = std::sqrt((1.0 - std::exp(-2.0 * kappa)) / (2.0 * kappa));
    drift_scale = pull / kappa;
  } else {
    pull = 0.0;
    gauss_scale = 1.0;
    drift_scale = 1.0;
  }

  // Per-day curves are shared by every path.
  std::vector<double> theta_k(static_cast<std::size_t>(horizon));
  std::vector<double> sigma_k(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    const Date day = config.start + k;
    theta_k[static_cast<std::size_t>(k)] = model.theta(day);
    sigma_k[static_cast<std::size_t>(k)] =
        config.vol_scale * model.sigma(day);
  }
  const double t_initial =
      config.initial_temp ? *config.initial_temp : theta_k[0];
  const double lambda = model.risk_aversion_lambda;

  PathSet paths;
  paths.start = config.start;
  paths.horizon = horizon;
  paths.n_paths = config.n_paths;
  paths.seed = config.seed;
  paths.model_fingerprint = detail::fingerprint(model, config);
  paths.temps.resize(static_cast<std::size_t>(config.n_paths) *
                     static_cast<std::size_t>(horizon));

  auto run_block = [&](int p_begin, int p_end) {
    for (int p = p_begin; p < p_end; ++p) {
      Rng diffusion(config.seed, static_cast<std::uint64_t>(p), 0);
      Rng jump_rng(config.seed, static_cast<std::uint64_t>(p), 1);
      const auto schedule = sample_jump_schedule(
          jump_rng, model.jumps, horizon, config.jump_prob_scale);
      double* row = paths.temps.data() +
                    static_cast<std::size_t>(p) *
                        static_cast<std::size_t>(horizon);
      double t = t_initial;
      row[0] = t;
      for (int k = 0; k + 1 < horizon; ++k) {
        const double sig = sigma_k[static_cast<std::size_t>(k)];
        t += pull * (theta_k[static_cast<std::size_t>(k)] - t) -
             lambda * sig * sig * drift_scale +
             sig * gauss_scale * diffusion.normal() +
             schedule.increments[static_cast<std::size_t>(k)];
        row[k + 1] = t;
      }
    }
  };

  if (n_threads == 1 || config.n_paths < 2 * n_threads) {
    run_block(0, config.n_paths);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    const int chunk = (config.n_paths + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(config.n_paths, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(run_block, lo, hi);
    }
    for (auto& t : workers) t.join();
  }

  for (double v : paths.temps) {
    if (!std::isfinite(v)) {
      fail(Errc::config_error, "simulation produced a non-finite temperature");
    }
  }
  return paths;
}

}  // namespace tempopt
