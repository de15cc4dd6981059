#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/series.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

// Column-name mapping for raw temperature CSVs. tmin/tmax are optional in
// the input; date, state and tavg must resolve.
struct CsvSchema {
  std::string date = "date";
  std::string state = "state";
  std::string tavg = "tavg";
  std::string tmin = "tmin";
  std::string tmax = "tmax";
};

struct ParseWarning {
  std::size_t row;  // 1-based data row number (header excluded)
  std::string message;
};

struct ParseResult {
  std::vector<RawTemperatureRecord> records;
  std::vector<ParseWarning> warnings;
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      std::string_view f = line.substr(begin, i - begin);
      while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) {
        f.remove_prefix(1);
      }
      while (!f.empty() &&
             (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) {
        f.remove_suffix(1);
      }
      out.push_back(f);
      begin = i + 1;
    }
  }
  return out;
}

inline std::optional<double> parse_double_field(std::string_view f) {
  if (f.empty()) return {};
  double v = 0.0;
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || p != f.data() + f.size()) return {};
  return v;
}

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace detail

constexpr double kMinPhysicalTemp = -60.0;
constexpr double kMaxPhysicalTemp = 60.0;

// Parses a raw temperature CSV. Rows with unusable temperature values are
// kept with the affected fields flagged missing and a warning recorded;
// a malformed date aborts the parse since row identity is gone.
inline ParseResult parse_temperature_csv(std::istream& in,
                                         const CsvSchema& schema = {}) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::empty_input, "no header row");
  const auto header = detail::split_csv_line(line);

  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return {};
  };
  const auto date_col = find_col(schema.date);
  const auto state_col = find_col(schema.state);
  const auto tavg_col = find_col(schema.tavg);
  const auto tmin_col = find_col(schema.tmin);
  const auto tmax_col = find_col(schema.tmax);
  if (!date_col) fail(Errc::missing_column, "column '" + schema.date + "'");
  if (!state_col) fail(Errc::missing_column, "column '" + schema.state + "'");
  if (!tavg_col && !tmin_col && !tmax_col) {
    fail(Errc::missing_column,
         "no temperature column among '" + schema.tavg + "', '" +
             schema.tmin + "', '" + schema.tmax + "'");
  }

  ParseResult result;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    const std::size_t needed =
        std::max(*date_col, *state_col) + 1;
    if (fields.size() < needed) {
      result.warnings.push_back({row, "too few fields, row skipped"});
      continue;
    }

    RawTemperatureRecord rec;
    const auto date = Date::parse_iso(fields[*date_col]);
    if (!date) {
      fail(Errc::bad_date, "row " + std::to_string(row) + ": '" +
                               std::string(fields[*date_col]) + "'");
    }
    rec.date = *date;
    rec.state = std::string(fields[*state_col]);

    auto temp_field = [&](const std::optional<std::size_t>& col,
                          const char* name) -> std::optional<double> {
      if (!col || *col >= fields.size()) return {};
      if (fields[*col].empty()) return {};
      const auto v = detail::parse_double_field(fields[*col]);
      if (!v) {
        result.warnings.push_back(
            {row, std::string(name) + " value '" +
                      std::string(fields[*col]) + "' not numeric, flagged missing"});
        return {};
      }
      if (*v < kMinPhysicalTemp || *v > kMaxPhysicalTemp) {
        result.warnings.push_back(
            {row, std::string(name) + " value " + detail::format_double(*v) +
                      " outside physical bounds, flagged missing"});
        return {};
      }
      return v;
    };
    rec.t_avg = temp_field(tavg_col, "tavg");
    rec.t_min = temp_field(tmin_col, "tmin");
    rec.t_max = temp_field(tmax_col, "tmax");

    if (rec.t_min && rec.t_max && rec.t_avg &&
        !(*rec.t_min <= *rec.t_avg && *rec.t_avg <= *rec.t_max)) {
      result.warnings.push_back(
          {row, "tavg outside [tmin, tmax], flagged missing"});
      rec.t_avg.reset();
    }
    result.records.push_back(std::move(rec));
  }
  if (row == 0) fail(Errc::empty_input, "header only, no data rows");
  return result;
}

// Serializes records in the default schema column order; parse of the
// output reproduces the records exactly.
inline void write_records_csv(std::ostream& out,
                              std::span<const RawTemperatureRecord> records,
                              const CsvSchema& schema = {}) {
  out << schema.date << ',' << schema.state << ',' << schema.tavg << ','
      << schema.tmin << ',' << schema.tmax << '\n';
  for (const auto& r : records) {
    out << r.date.iso() << ',' << r.state << ',';
    if (r.t_avg) out << detail::format_double(*r.t_avg);
    out << ',';
    if (r.t_min) out << detail::format_double(*r.t_min);
    out << ',';
    if (r.t_max) out << detail::format_double(*r.t_max);
    out << '\n';
  }
}

// Per (state, date), the state's daily average is the arithmetic mean of
// that day's station averages. Station values are sorted before summing
// so the result is exactly invariant under record order.
inline std::map<std::string, DailyTemperatureSeries> aggregate_state(
    std::span<const RawTemperatureRecord> records) {
  std::map<std::string, std::map<std::int32_t, std::vector<double>>> grouped;
  for (const auto& r : records) {
    if (!r.t_avg) continue;
    grouped[r.state][r.date.serial()].push_back(*r.t_avg);
  }

  std::map<std::string, DailyTemperatureSeries> out;
  for (auto& [state, by_day] : grouped) {
    if (by_day.empty()) continue;
    const Date first(by_day.begin()->first);
    const Date last(by_day.rbegin()->first);
    auto series = DailyTemperatureSeries::empty_series(
        state, first, static_cast<std::size_t>(last - first) + 1);
    for (auto& [serial, values] : by_day) {
      std::sort(values.begin(), values.end());
      const double m =
          pairwise_sum(values) / static_cast<double>(values.size());
      series.set(static_cast<std::size_t>(Date(serial) - first), m);
    }
    out.emplace(state, std::move(series));
  }
  return out;
}

struct OutlierResult {
  DailyTemperatureSeries series;
  std::size_t removed = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Single-pass 3-sigma rule: mean and stddev are computed once over the
// whole present series, then every point beyond k*sigma is re-marked
// missing. No re-estimation loop.
inline OutlierResult remove_outliers(const DailyTemperatureSeries& series,
                                     double k = 3.0) {
  if (k <= 0.0) fail(Errc::config_error, "outlier multiplier must be > 0");
  std::vector<double> present;
  present.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.is_present(i)) present.push_back(series.temps[i]);
  }
  if (present.size() < 30) {
    fail(Errc::too_few_points, "outlier removal needs >= 30 observed points");
  }
  const double mu = mean(present);
  const double sigma = sample_stddev(present);

  OutlierResult result{series, 0, mu, sigma};
  if (sigma == 0.0) return result;
  for (std::size_t i = 0; i < result.series.size(); ++i) {
    if (!result.series.is_present(i)) continue;
    if (std::fabs(result.series.temps[i] - mu) > k * sigma) {
      result.series.temps[i] = std::numeric_limits<double>::quiet_NaN();
      result.series.status[i] = DayStatus::missing;
      ++result.removed;
    }
  }
  return result;
}

struct GapInfo {
  Date first_missing;
  int length = 0;
};

struct ImputeResult {
  DailyTemperatureSeries series;
  std::size_t gaps_filled = 0;
  std::size_t days_filled = 0;
  std::vector<GapInfo> gaps_left;  // interior gaps longer than max_gap
};

// Fills interior gaps of length <= max_gap by linear interpolation between
// the bracketing present values. Longer gaps and leading/trailing gaps are
// reported and left missing. Present values are never altered.
inline ImputeResult impute_gaps(const DailyTemperatureSeries& series,
                                int max_gap = 7) {
  if (max_gap < 0) fail(Errc::config_error, "max_gap must be >= 0");
  ImputeResult result;
  result.series = series;
  auto& s = result.series;

  std::size_t i = 0;
  while (i < s.size() && !s.is_present(i)) ++i;  // skip leading gap
  while (i < s.size()) {
    if (s.is_present(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !s.is_present(j)) ++j;
    if (j == s.size()) break;  // trailing gap
    const int len = static_cast<int>(j - i);
    if (len <= max_gap) {
      const double left = s.temps[i - 1];
      const double right = s.temps[j];
      for (std::size_t m = i; m < j; ++m) {
        const double frac = static_cast<double>(m - i + 1) /
                            static_cast<double>(len + 1);
        s.set(m, left + frac * (right - left), DayStatus::imputed);
      }
      ++result.gaps_filled;
      result.days_filled += static_cast<std::size_t>(len);
    } else {
      result.gaps_left.push_back({s.date_at(i), len});
    }
    i = j;
  }
  return result;
}

// train = dates < cutoff, test = dates >= cutoff; cutoff must be strictly
// inside the series range so both halves are non-empty.
inline std::pair<DailyTemperatureSeries, DailyTemperatureSeries>
split_train_test(const DailyTemperatureSeries& series, Date cutoff) {
  if (series.empty()) fail(Errc::empty_input, "empty series");
  if (cutoff <= series.start || cutoff > series.last_date()) {
    fail(Errc::cutoff_out_of_range,
         "cutoff " + cutoff.iso() + " not strictly inside [" +
             series.start.iso() + ", " + series.last_date().iso() + "]");
  }
  const auto n_train = static_cast<std::size_t>(cutoff - series.start);

  DailyTemperatureSeries train;
  train.state = series.state;
  train.start = series.start;
  train.temps.assign(series.temps.begin(),
                     series.temps.begin() + static_cast<long>(n_train));
  train.status.assign(series.status.begin(),
                      series.status.begin() + static_cast<long>(n_train));

  DailyTemperatureSeries test;
  test.state = series.state;
  test.start = cutoff;
  test.temps.assign(series.temps.begin() + static_cast<long>(n_train),
                    series.temps.end());
  test.status.assign(series.status.begin() + static_cast<long>(n_train),
                     series.status.end());
  return {std::move(train), std::move(test)};
}

// Cleaned-series CSV: date,tavg,imputed_flag. Missing days are skipped.
inline void write_cleaned_csv(std::ostream& out,
                              const DailyTemperatureSeries& series) {
  out << "date,tavg,imputed_flag\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.is_present(i)) continue;
    out << series.date_at(i).iso() << ','
        << detail::format_double(series.temps[i]) << ','
        << (series.status[i] == DayStatus::imputed ? '1' : '0') << '\n';
  }
}

struct CleaningReport {
  std::string state;
  std::size_t records_parsed = 0;
  std::size_t parse_warnings = 0;
  std::size_t outliers_removed = 0;
  std::size_t gaps_filled = 0;
  std::size_t days_filled = 0;
  std::size_t gaps_left = 0;
  std::size_t days_present = 0;
};

}  // namespace tempopt
