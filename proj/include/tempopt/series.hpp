#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"

namespace tempopt {

// One raw station/state reading as parsed from CSV. Absent or unusable
// temperature fields stay nullopt.
struct RawTemperatureRecord {
  Date date;
  std::string state;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<double> t_avg;

  friend bool operator==(const RawTemperatureRecord&,
                         const RawTemperatureRecord&) = default;
};

enum class DayStatus : std::uint8_t {
  missing = 0,
  observed = 1,
  imputed = 2,
};

// Per-state daily average temperatures on a contiguous daily axis
// [start, start + size - 1]. Days without data carry NaN and
// DayStatus::missing.
struct DailyTemperatureSeries {
  std::string state;
  Date start;
  std::vector<double> temps;
  std::vector<DayStatus> status;

  std::size_t size() const { return temps.size(); }
  bool empty() const { return temps.empty(); }

  Date date_at(std::size_t i) const {
    return start + static_cast<int>(i);
  }
  Date last_date() const {
    return start + static_cast<int>(temps.size()) - 1;
  }

  std::optional<std::size_t> index_of(Date d) const {
    const int off = d - start;
    if (off < 0 || off >= static_cast<int>(temps.size())) return {};
    return static_cast<std::size_t>(off);
  }

  // Present = usable for estimation (observed or imputed).
  bool is_present(std::size_t i) const {
    return status[i] != DayStatus::missing;
  }

  std::size_t present_count() const {
    std::size_t n = 0;
    for (auto s : status) {
      if (s != DayStatus::missing) ++n;
    }
    return n;
  }

  static DailyTemperatureSeries empty_series(std::string state, Date start,
                                             std::size_t n) {
    DailyTemperatureSeries s;
    s.state = std::move(state);
    s.start = start;
    s.temps.assign(n, std::numeric_limits<double>::quiet_NaN());
    s.status.assign(n, DayStatus::missing);
    return s;
  }

  void set(std::size_t i, double value,
           DayStatus st = DayStatus::observed) {
    temps[i] = value;
    status[i] = st;
  }
};

}  // namespace tempopt
