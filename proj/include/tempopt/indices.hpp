#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

// Inclusive accrual window over which an index accumulates.
struct AccrualWindow {
  Date start;
  Date end;

  friend bool operator==(const AccrualWindow&, const AccrualWindow&) = default;
};

namespace detail {

// Maps the window onto [first, last] offsets of a daily axis.
inline std::pair<std::size_t, std::size_t> window_range(
    std::size_t axis_len, Date axis_start, const AccrualWindow& window) {
  if (window.start > window.end) {
    fail(Errc::window_out_of_range, "window start after end");
  }
  const int lo = window.start - axis_start;
  const int hi = window.end - axis_start;
  if (lo < 0 || hi >= static_cast<int>(axis_len)) {
    fail(Errc::window_out_of_range,
         "window [" + window.start.iso() + ", " + window.end.iso() +
             "] not contained in the path date axis");
  }
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace detail

// HDD = sum over window days of max(t_ref - T, 0), pairwise-summed.
inline double compute_hdd(std::span<const double> temps, Date axis_start,
                          double t_ref, const AccrualWindow& window) {
  const auto [lo, hi] = detail::window_range(temps.size(), axis_start, window);
  std::vector<double> terms(hi - lo + 1);
  for (std::size_t i = lo; i <= hi; ++i) {
    terms[i - lo] = std::max(t_ref - temps[i], 0.0);
  }
  return pairwise_sum(terms);
}

// CDD = sum over window days of max(T - t_ref, 0).
inline double compute_cdd(std::span<const double> temps, Date axis_start,
                          double t_ref, const AccrualWindow& window) {
  const auto [lo, hi] = detail::window_range(temps.size(), axis_start, window);
  std::vector<double> terms(hi - lo + 1);
  for (std::size_t i = lo; i <= hi; ++i) {
    terms[i - lo] = std::max(temps[i] - t_ref, 0.0);
  }
  return pairwise_sum(terms);
}

enum class EventDirection { above, below };

// Counts maximal runs of consecutive window days strictly above (below)
// the threshold with run length >= min_len. A single long run is one
// event; ties at the threshold break toward non-event.
inline int detect_events(std::span<const double> temps, Date axis_start,
                         double threshold, EventDirection direction,
                         int min_len, const AccrualWindow& window) {
  if (min_len < 1) fail(Errc::config_error, "min_len must be >= 1");
  const auto [lo, hi] = detail::window_range(temps.size(), axis_start, window);
  int count = 0;
  int run = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const bool hit = direction == EventDirection::above
                         ? temps[i] > threshold
                         : temps[i] < threshold;
    if (hit) {
      ++run;
      if (run == min_len) ++count;  // counted once when the run qualifies
    } else {
      run = 0;
    }
  }
  return count;
}

inline double compute_hdd(const PathSet& paths, int p, double t_ref,
                          const AccrualWindow& window) {
  return compute_hdd(paths.path(p), paths.start, t_ref, window);
}

inline double compute_cdd(const PathSet& paths, int p, double t_ref,
                          const AccrualWindow& window) {
  return compute_cdd(paths.path(p), paths.start, t_ref, window);
}

inline int detect_events(const PathSet& paths, int p, double threshold,
                         EventDirection direction, int min_len,
                         const AccrualWindow& window) {
  return detect_events(paths.path(p), paths.start, threshold, direction,
                       min_len, window);
}

}  // namespace tempopt
