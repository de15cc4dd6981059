#include <catch2/catch_amalgamated.hpp>

#include "tempopt/date.hpp"

using tempopt::Date;
using tempopt::Errc;
using tempopt::Error;

TEST_CASE("ymd round trips through serial") {
  const Date d = Date::ymd(2023, 7, 15);
  CHECK(d.year() == 2023);
  CHECK(d.month() == 7);
  CHECK(d.day() == 15);
  CHECK(Date(d.serial()) == d);

  // Sweep a century of days.
  Date cur = Date::ymd(1951, 1, 1);
  for (int i = 0; i < 36525; ++i) {
    const Date again = Date::ymd(cur.year(), cur.month(), cur.day());
    REQUIRE(again.serial() == cur.serial());
    ++cur;
  }
}

TEST_CASE("epoch anchor") {
  CHECK(Date::ymd(1970, 1, 1).serial() == 0);
  CHECK(Date::ymd(1970, 1, 2) - Date::ymd(1970, 1, 1) == 1);
}

TEST_CASE("invalid calendar dates") {
  CHECK_THROWS_AS(Date::ymd(2023, 13, 40), Error);
  CHECK_THROWS_AS(Date::ymd(2023, 2, 29), Error);  // not a leap year
  CHECK_NOTHROW(Date::ymd(2024, 2, 29));
}

TEST_CASE("iso parse and format") {
  const auto d = Date::parse_iso("1999-12-31");
  REQUIRE(d.has_value());
  CHECK(d->iso() == "1999-12-31");
  CHECK_FALSE(Date::parse_iso("2023-13-40").has_value());
  CHECK_FALSE(Date::parse_iso("2023/01/01").has_value());
  CHECK_FALSE(Date::parse_iso("20230101").has_value());
  CHECK_FALSE(Date::parse_iso("2023-1-01").has_value());
}

TEST_CASE("day of year with leap folding") {
  CHECK(Date::ymd(2023, 1, 1).day_of_year() == 1);
  CHECK(Date::ymd(2023, 12, 31).day_of_year() == 365);
  CHECK(Date::ymd(2024, 12, 31).day_of_year() == 366);

  // Feb 28 is day 59 in any year; Feb 29 folds onto it.
  CHECK(Date::ymd(2023, 2, 28).day_of_year_365() == 59);
  CHECK(Date::ymd(2024, 2, 28).day_of_year_365() == 59);
  CHECK(Date::ymd(2024, 2, 29).day_of_year_365() == 59);
  CHECK(Date::ymd(2024, 3, 1).day_of_year_365() == 60);
  CHECK(Date::ymd(2023, 3, 1).day_of_year_365() == 60);
  CHECK(Date::ymd(2024, 12, 31).day_of_year_365() == 365);
}

TEST_CASE("arithmetic and ordering") {
  const Date a = Date::ymd(2020, 12, 31);
  CHECK((a + 1).iso() == "2021-01-01");
  CHECK((a - 366).iso() == "2019-12-31");
  CHECK(a < a + 1);
  CHECK(a + 1 - a == 1);
}
