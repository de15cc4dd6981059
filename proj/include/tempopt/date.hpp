#pragma once

#include <chrono>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "tempopt/errors.hpp"

namespace tempopt {

// Calendar date, proleptic Gregorian, stored as days since 1970-01-01.
// Daily temperature series index their axis with consecutive serials, so
// arithmetic on Date is plain integer arithmetic.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t serial) : serial_(serial) {}

  static Date ymd(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day v{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
    if (!v.ok()) {
      fail(Errc::bad_date, "invalid calendar date " + std::to_string(year) +
                               "-" + std::to_string(month) + "-" +
                               std::to_string(day));
    }
    return Date(static_cast<std::int32_t>(
        std::chrono::sys_days{v}.time_since_epoch().count()));
  }

  // Parses "YYYY-MM-DD". Returns nullopt on malformed input.
  static std::optional<Date> parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return {};
    int y = 0;
    unsigned m = 0, d = 0;
    auto num = [](std::string_view s, auto& out) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc{} && p == s.data() + s.size();
    };
    if (!num(text.substr(0, 4), y) || !num(text.substr(5, 2), m) ||
        !num(text.substr(8, 2), d)) {
      return {};
    }
    const std::chrono::year_month_day v{std::chrono::year{y},
                                        std::chrono::month{m},
                                        std::chrono::day{d}};
    if (!v.ok()) return {};
    return Date(static_cast<std::int32_t>(
        std::chrono::sys_days{v}.time_since_epoch().count()));
  }

  constexpr std::int32_t serial() const { return serial_; }

  int year() const { return static_cast<int>(as_ymd().year()); }
  unsigned month() const { return static_cast<unsigned>(as_ymd().month()); }
  unsigned day() const { return static_cast<unsigned>(as_ymd().day()); }

  bool is_leap_year() const { return as_ymd().year().is_leap(); }

  // 1-based ordinal day within the calendar year (1..366).
  int day_of_year() const {
    const auto v = as_ymd();
    const auto jan1 = std::chrono::sys_days{v.year() / 1 / 1};
    return static_cast<int>((std::chrono::sys_days{v} - jan1).count()) + 1;
  }

  // Day-of-year folded onto a 365-day calendar: Feb 29 maps to day 59
  // (same bucket as Feb 28) and later days of a leap year shift down by
  // one, so the result is always in 1..365.
  int day_of_year_365() const {
    const int doy = day_of_year();
    if (is_leap_year() && doy >= 60) return doy - 1;
    return doy;
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
    return buf;
  }

  friend constexpr auto operator<=>(Date, Date) = default;

  constexpr Date operator+(int days) const { return Date(serial_ + days); }
  constexpr Date operator-(int days) const { return Date(serial_ - days); }
  constexpr Date& operator+=(int days) {
    serial_ += days;
    return *this;
  }
  constexpr Date& operator++() {
    ++serial_;
    return *this;
  }
  friend constexpr int operator-(Date a, Date b) {
    return a.serial_ - b.serial_;
  }

 private:
  std::chrono::year_month_day as_ymd() const {
    return std::chrono::year_month_day{
        std::chrono::sys_days{std::chrono::days{serial_}}};
  }

  std::int32_t serial_ = 0;
};

}  // namespace tempopt
