#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "tempopt/ingest.hpp"
#include "tempopt/rng.hpp"

using namespace tempopt;

namespace {

DailyTemperatureSeries make_series(const std::vector<double>& temps,
                                   Date start = Date::ymd(2000, 1, 1)) {
  auto s = DailyTemperatureSeries::empty_series("T", start, temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    if (!std::isnan(temps[i])) s.set(i, temps[i]);
  }
  return s;
}

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("parse well-formed csv") {
  std::istringstream in(
      "date,state,tavg,tmin,tmax\n"
      "2023-01-01,Gujarat,25.5,20.0,31.0\n"
      "2023-01-02,Gujarat,26.0,21.5,30.5\n"
      "2023-01-03,Gujarat,24.75,19.0,29.0\n");
  const auto result = parse_temperature_csv(in);
  REQUIRE(result.records.size() == 3);
  CHECK(result.warnings.empty());
  CHECK(result.records[0].date == Date::ymd(2023, 1, 1));
  CHECK(result.records[0].state == "Gujarat");
  CHECK(result.records[0].t_avg == 25.5);
  CHECK(result.records[2].t_avg == 24.75);
}

TEST_CASE("non-numeric tavg flagged missing with warning") {
  std::istringstream in(
      "date,state,tavg\n"
      "2023-01-01,Gujarat,NA\n"
      "2023-01-02,Gujarat,26.0\n");
  const auto result = parse_temperature_csv(in);
  REQUIRE(result.records.size() == 2);
  CHECK_FALSE(result.records[0].t_avg.has_value());
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].row == 1);
}

TEST_CASE("invalid date raises BadDate with the row index") {
  std::istringstream in(
      "date,state,tavg\n"
      "2023-01-01,Gujarat,25.0\n"
      "2023-13-40,Gujarat,25.0\n");
  try {
    parse_temperature_csv(in);
    FAIL("expected BadDate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_date);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("schema errors") {
  std::istringstream missing_col("when,state,tavg\n2023-01-01,G,25\n");
  CHECK_THROWS_MATCHES(parse_temperature_csv(missing_col), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::missing_column;
                       }));
  std::istringstream empty("");
  CHECK_THROWS_MATCHES(parse_temperature_csv(empty), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::empty_input;
                       }));
  std::istringstream header_only("date,state,tavg\n");
  CHECK_THROWS_MATCHES(parse_temperature_csv(header_only), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::empty_input;
                       }));
}

TEST_CASE("custom schema mapping") {
  std::istringstream in("DY,ST,TEMP\n2023-01-01,G,25\n");
  CsvSchema schema;
  schema.date = "DY";
  schema.state = "ST";
  schema.tavg = "TEMP";
  const auto result = parse_temperature_csv(in, schema);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].t_avg == 25.0);
}

TEST_CASE("physical bounds and tmin/tmax consistency") {
  std::istringstream in(
      "date,state,tavg,tmin,tmax\n"
      "2023-01-01,G,75.0,,\n"
      "2023-01-02,G,25.0,26.0,30.0\n");
  const auto result = parse_temperature_csv(in);
  CHECK_FALSE(result.records[0].t_avg.has_value());   // out of bounds
  CHECK_FALSE(result.records[1].t_avg.has_value());   // tavg < tmin
  CHECK(result.warnings.size() == 2);
}

TEST_CASE("parse-serialize-parse round trip") {
  std::istringstream in(
      "date,state,tavg,tmin,tmax\n"
      "2023-01-01,Gujarat,25.123456789012345,20,31\n"
      "2023-01-02,Rajasthan,,,\n"
      "2023-01-03,Gujarat,-0.5,,30.25\n");
  const auto first = parse_temperature_csv(in);

  std::ostringstream out;
  write_records_csv(out, first.records);
  std::istringstream in2(out.str());
  const auto second = parse_temperature_csv(in2);
  CHECK(second.records == first.records);
}

TEST_CASE("outlier removal matches a brute-force oracle") {
  Rng rng(42);
  std::vector<double> temps(1000);
  for (auto& t : temps) t = 25.0 + 2.0 * rng.normal();
  temps[500] = 40.0;  // about 7.5 sigma out
  const auto series = make_series(temps);
  const auto result = remove_outliers(series, 3.0);

  // Oracle: single-pass mean/sd threshold computed from scratch.
  double sum = 0.0;
  for (double t : temps) sum += t;
  const double mu = sum / static_cast<double>(temps.size());
  double ss = 0.0;
  for (double t : temps) ss += (t - mu) * (t - mu);
  const double sd = std::sqrt(ss / static_cast<double>(temps.size() - 1));

  std::size_t expected_removed = 0;
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const bool out = std::fabs(temps[i] - mu) > 3.0 * sd;
    if (out) ++expected_removed;
    REQUIRE(result.series.is_present(i) == !out);
  }
  CHECK(result.removed == expected_removed);
  CHECK(expected_removed >= 1);
  CHECK_FALSE(result.series.is_present(500));
}

TEST_CASE("outliers: no exceedance leaves the series unchanged") {
  std::vector<double> temps(100);
  for (std::size_t i = 0; i < temps.size(); ++i) {
    temps[i] = 20.0 + 0.5 * std::sin(static_cast<double>(i));
  }
  const auto series = make_series(temps);
  const auto result = remove_outliers(series, 3.0);
  CHECK(result.removed == 0);
  CHECK(result.series.temps == series.temps);
}

TEST_CASE("outliers: constant series is a zero-variance no-op") {
  const auto series = make_series(std::vector<double>(50, 21.0));
  const auto result = remove_outliers(series);
  CHECK(result.removed == 0);
  CHECK(result.series.temps == series.temps);
}

TEST_CASE("outliers require enough observations") {
  const auto series = make_series(std::vector<double>(10, 21.0));
  CHECK_THROWS_MATCHES(remove_outliers(series), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::too_few_points;
                       }));
}

TEST_CASE("impute fills a one-day gap with the midpoint") {
  const auto series = make_series({10.0, kMissing, 14.0});
  const auto result = impute_gaps(series, 7);
  CHECK(result.series.temps[1] == Catch::Approx(12.0));
  CHECK(result.series.status[1] == DayStatus::imputed);
  CHECK(result.gaps_filled == 1);
  CHECK(result.days_filled == 1);
}

TEST_CASE("impute interpolates linearly inside longer gaps") {
  const auto series = make_series({10.0, kMissing, kMissing, kMissing, 18.0});
  const auto result = impute_gaps(series, 7);
  CHECK(result.series.temps[1] == Catch::Approx(12.0));
  CHECK(result.series.temps[2] == Catch::Approx(14.0));
  CHECK(result.series.temps[3] == Catch::Approx(16.0));
}

TEST_CASE("impute leaves gaps longer than max_gap and reports them") {
  std::vector<double> temps{10.0};
  temps.insert(temps.end(), 3, kMissing);
  temps.push_back(14.0);
  const auto series = make_series(temps);
  const auto result = impute_gaps(series, 2);  // gap of 3 > max_gap 2
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK_FALSE(result.series.is_present(i));
  }
  CHECK(result.gaps_filled == 0);
  REQUIRE(result.gaps_left.size() == 1);
  CHECK(result.gaps_left[0].length == 3);
  CHECK(result.gaps_left[0].first_missing == series.date_at(1));
}

TEST_CASE("impute ignores leading and trailing gaps") {
  const auto series = make_series({kMissing, 10.0, 12.0, kMissing});
  const auto result = impute_gaps(series, 7);
  CHECK_FALSE(result.series.is_present(0));
  CHECK_FALSE(result.series.is_present(3));
  CHECK(result.gaps_filled == 0);
}

TEST_CASE("impute never alters observed values") {
  Rng rng(5);
  std::vector<double> temps(400);
  for (std::size_t i = 0; i < temps.size(); ++i) {
    temps[i] = 25.0 + rng.normal();
    if (rng.uniform01() < 0.2) temps[i] = kMissing;
  }
  const auto series = make_series(temps);
  const auto result = impute_gaps(series, 5);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.is_present(i)) {
      REQUIRE(result.series.temps[i] == series.temps[i]);
      REQUIRE(result.series.status[i] == DayStatus::observed);
    }
  }
}

TEST_CASE("aggregate averages stations per day") {
  std::vector<RawTemperatureRecord> records;
  records.push_back({Date::ymd(2023, 1, 1), "G", {}, {}, 20.0});
  records.push_back({Date::ymd(2023, 1, 1), "G", {}, {}, 24.0});
  records.push_back({Date::ymd(2023, 1, 3), "G", {}, {}, 30.0});
  const auto by_state = aggregate_state(records);
  REQUIRE(by_state.count("G") == 1);
  const auto& s = by_state.at("G");
  CHECK(s.temps[0] == Catch::Approx(22.0));
  CHECK_FALSE(s.is_present(1));  // no station reported on Jan 2
  CHECK(s.temps[2] == 30.0);     // single station passes through
}

TEST_CASE("aggregate is invariant under record order") {
  Rng rng(11);
  std::vector<RawTemperatureRecord> records;
  for (int day = 0; day < 30; ++day) {
    const int stations = 1 + static_cast<int>(rng.uniform01() * 4);
    for (int st = 0; st < stations; ++st) {
      records.push_back({Date::ymd(2023, 1, 1) + day, "G", {}, {},
                         25.0 + rng.normal()});
    }
  }
  const auto base = aggregate_state(records);

  std::mt19937 shuffle_rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(records.begin(), records.end(), shuffle_rng);
    const auto shuffled = aggregate_state(records);
    REQUIRE(shuffled.at("G").temps == base.at("G").temps);
  }
}

TEST_CASE("train/test split at the cutoff") {
  const auto start = Date::ymd(1951, 1, 1);
  const auto end = Date::ymd(2023, 12, 31);
  std::vector<double> temps(static_cast<std::size_t>(end - start) + 1, 25.0);
  const auto series = make_series(temps, start);

  const auto [train, test] = split_train_test(series, Date::ymd(2021, 1, 1));
  CHECK(train.start == start);
  CHECK(train.last_date() == Date::ymd(2020, 12, 31));
  CHECK(test.start == Date::ymd(2021, 1, 1));
  CHECK(test.last_date() == end);
  CHECK(train.size() + test.size() == series.size());
}

TEST_CASE("split cutoff bounds") {
  const auto series = make_series({1.0, 2.0, 3.0});
  CHECK_THROWS_MATCHES(split_train_test(series, series.start), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == Errc::cutoff_out_of_range;
                       }));
  CHECK_THROWS_AS(split_train_test(series, series.start + 5), Error);

  const auto [train, test] = split_train_test(series, series.start + 1);
  CHECK(train.size() == 1);
  CHECK(test.size() == 2);
}

TEST_CASE("cleaned csv lists present days with imputed flags") {
  auto series = make_series({10.0, kMissing, 14.0, kMissing});
  const auto imputed = impute_gaps(series, 7).series;
  std::ostringstream out;
  write_cleaned_csv(out, imputed);
  CHECK(out.str() ==
        "date,tavg,imputed_flag\n"
        "2000-01-01,10,0\n"
        "2000-01-02,12,1\n"
        "2000-01-03,14,0\n");
}
