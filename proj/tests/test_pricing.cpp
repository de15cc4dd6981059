#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tempopt/calibration.hpp"
#include "tempopt/pricing.hpp"
#include "tempopt/rng.hpp"
#include "tempopt/simulation.hpp"

using namespace tempopt;

namespace {

const Date kStart = Date::ymd(2024, 12, 1);

PathSet make_paths(const std::vector<std::vector<double>>& rows) {
  PathSet p;
  p.start = kStart;
  p.n_paths = static_cast<int>(rows.size());
  p.horizon = static_cast<int>(rows.front().size());
  for (const auto& row : rows) {
    p.temps.insert(p.temps.end(), row.begin(), row.end());
  }
  return p;
}

ContractSpec base_contract(ContractKind kind, double strike, double t_ref,
                           int window_days, double rate = 0.0) {
  ContractSpec c;
  c.kind = kind;
  c.strike = strike;
  c.tick = 1.0;
  c.window = {kStart, kStart + window_days - 1};
  c.maturity = c.window.end;
  c.rate = rate;
  c.ref_temp = t_ref;
  c.state = "T";
  return c;
}

TemperatureModel flat_model(double theta, double sigma, double kappa) {
  TemperatureModel m;
  m.state = "Flat";
  m.seasonal.a = theta;
  m.seasonal.t0 = Date::ymd(2024, 1, 1);
  m.reversion = {kappa, std::exp(-kappa)};
  m.volatility = constant_volatility(sigma);
  m.jumps = no_jumps();
  m.t_ref_hdd = theta - 3.0;
  m.t_ref_cdd = theta + 3.0;
  return m;
}

}  // namespace

TEST_CASE("degenerate pricing: every path gives hdd 100") {
  // 10 window days at 8 degC below the reference accrue 10/day.
  const std::vector<std::vector<double>> rows(4,
                                              std::vector<double>(10, 10.0));
  const auto paths = make_paths(rows);

  auto call = base_contract(ContractKind::hdd_call, 90.0, 20.0, 10);
  const auto call_result = price_contract(paths, call, kStart);
  CHECK(call_result.price == Catch::Approx(10.0).epsilon(1e-12));
  CHECK(call_result.std_error == 0.0);
  CHECK(call_result.mean_index == Catch::Approx(100.0).epsilon(1e-12));
  CHECK(call_result.discount_factor == 1.0);
  CHECK(call_result.payoff_q05 == call_result.payoff_q95);

  auto put = call;
  put.kind = ContractKind::hdd_put;
  CHECK(price_contract(paths, put, kStart).price == 0.0);

  SECTION("at the money, both legs are worthless") {
    call.strike = 100.0;
    put.strike = 100.0;
    CHECK(price_contract(paths, call, kStart).price == 0.0);
    CHECK(price_contract(paths, put, kStart).price == 0.0);
  }
}

TEST_CASE("event option over a two-path set") {
  // Path A: 2 qualifying heat runs; path B: 6.
  std::vector<double> a(60, 20.0), b(60, 20.0);
  auto put_run = [](std::vector<double>& v, int at, int len) {
    for (int i = at; i < at + len; ++i) v[static_cast<std::size_t>(i)] = 35.0;
  };
  put_run(a, 0, 5);
  put_run(a, 10, 7);
  for (int r = 0; r < 6; ++r) put_run(b, r * 10, 5);
  const auto paths = make_paths({a, b});

  auto hw = base_contract(ContractKind::heatwave_call, 3.0, 30.0, 60);
  hw.tick = 1000.0;
  const auto result = price_contract(paths, hw, kStart);
  CHECK(result.price == Catch::Approx(1500.0).epsilon(1e-12));
  CHECK(result.mean_index == Catch::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("put-call decomposition holds to floating tolerance") {
  Rng rng(5);
  std::vector<std::vector<double>> rows(500, std::vector<double>(90));
  for (auto& row : rows) {
    for (auto& t : row) t = 22.0 + 5.0 * rng.normal();
  }
  const auto paths = make_paths(rows);

  for (int trial = 0; trial < 20; ++trial) {
    auto base = base_contract(ContractKind::hdd_call,
                              50.0 + 150.0 * rng.uniform01(), 20.0, 90,
                              0.05 * rng.uniform01());
    base.tick = 0.5 + 4.0 * rng.uniform01();
    base.maturity = base.window.end + 10;
    const auto d = put_call_decomposition(paths, base, kStart);
    const auto call_result = price_contract(
        paths, [&] { auto c = base; c.kind = ContractKind::hdd_call; return c; }(),
        kStart);
    REQUIRE(std::fabs(d.residual) <
            1e-9 * base.tick * call_result.mean_index);
  }
}

TEST_CASE("decomposition residual bound survives path reordering") {
  Rng rng(6);
  std::vector<std::vector<double>> rows(1000, std::vector<double>(60));
  for (auto& row : rows) {
    for (auto& t : row) t = 22.0 + 5.0 * rng.normal();
  }
  auto base = base_contract(ContractKind::cdd_call, 80.0, 24.0, 60, 0.03);
  base.maturity = base.window.end + 5;

  const auto forward = make_paths(rows);
  const auto d1 = put_call_decomposition(forward, base, kStart);

  std::mt19937 shuffler(99);
  std::shuffle(rows.begin(), rows.end(), shuffler);
  const auto shuffled = make_paths(rows);
  const auto d2 = put_call_decomposition(shuffled, base, kStart);

  const double scale =
      base.tick * price_contract(forward, base, kStart).mean_index;
  CHECK(std::fabs(d1.residual) < 1e-9 * scale);
  CHECK(std::fabs(d2.residual) < 1e-9 * scale);
  // Same sample, different order: prices agree to reduction tolerance.
  CHECK(d1.call_price == Catch::Approx(d2.call_price).epsilon(1e-9));
}

TEST_CASE("deterministic decomposition value") {
  const std::vector<std::vector<double>> rows(3,
                                              std::vector<double>(10, 10.0));
  const auto paths = make_paths(rows);
  const auto base = base_contract(ContractKind::hdd_call, 90.0, 20.0, 10);
  const auto d = put_call_decomposition(paths, base, kStart);
  CHECK(d.call_price - d.put_price == Catch::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("prices scale linearly in tick") {
  Rng rng(7);
  std::vector<std::vector<double>> rows(200, std::vector<double>(30));
  for (auto& row : rows) {
    for (auto& t : row) t = 20.0 + 4.0 * rng.normal();
  }
  const auto paths = make_paths(rows);
  auto c = base_contract(ContractKind::hdd_call, 30.0, 20.0, 30);
  const double p1 = price_contract(paths, c, kStart).price;
  c.tick = 7.25;
  CHECK(price_contract(paths, c, kStart).price ==
        Catch::Approx(7.25 * p1).epsilon(1e-12));
}

TEST_CASE("call and put prices are monotone in strike") {
  Rng rng(8);
  std::vector<std::vector<double>> rows(300, std::vector<double>(30));
  for (auto& row : rows) {
    for (auto& t : row) t = 20.0 + 4.0 * rng.normal();
  }
  const auto paths = make_paths(rows);
  double prev_call = 1e300, prev_put = -1.0;
  for (double k : {10.0, 30.0, 50.0, 70.0}) {
    const auto call = base_contract(ContractKind::hdd_call, k, 20.0, 30);
    auto put = call;
    put.kind = ContractKind::hdd_put;
    const double cp = price_contract(paths, call, kStart).price;
    const double pp = price_contract(paths, put, kStart).price;
    CHECK(cp <= prev_call);
    CHECK(pp >= prev_put);
    prev_call = cp;
    prev_put = pp;
  }
}

TEST_CASE("zero rate means price equals mean payoff") {
  const std::vector<std::vector<double>> rows{{10.0, 10.0}, {16.0, 16.0}};
  auto paths = make_paths(rows);
  auto c = base_contract(ContractKind::hdd_call, 5.0, 20.0, 2);
  const auto r = price_contract(paths, c, kStart);
  CHECK(r.discount_factor == 1.0);
  // payoffs: max(20-10,0)*2=20 -> 15; max(4*2-5,0)=3 -> mean 9
  CHECK(r.price == Catch::Approx((15.0 + 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("discounting convention") {
  const std::vector<std::vector<double>> rows(2,
                                              std::vector<double>(10, 10.0));
  const auto paths = make_paths(rows);
  auto c = base_contract(ContractKind::hdd_call, 90.0, 20.0, 10, 0.05);
  c.maturity = kStart + 365;  // ~one year
  const auto r = price_contract(paths, c, kStart);
  const double tau = 365.0 / 365.25;
  CHECK(r.discount_factor == Catch::Approx(std::exp(-0.05 * tau)).epsilon(1e-12));
  CHECK(r.price == Catch::Approx(10.0 * std::exp(-0.05 * tau)).epsilon(1e-12));
}

TEST_CASE("pricing validation errors") {
  const std::vector<std::vector<double>> rows(2,
                                              std::vector<double>(10, 10.0));
  const auto paths = make_paths(rows);
  auto c = base_contract(ContractKind::hdd_call, 90.0, 20.0, 10);

  SECTION("empty path set") {
    PathSet empty;
    empty.start = kStart;
    empty.horizon = 10;
    empty.n_paths = 0;
    CHECK_THROWS_MATCHES(price_contract(empty, c, kStart), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::empty_path_set;
                         }));
  }
  SECTION("window outside the axis") {
    c.window.end = kStart + 12;
    c.maturity = c.window.end;
    CHECK_THROWS_MATCHES(price_contract(paths, c, kStart), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::window_out_of_range;
                         }));
  }
  SECTION("valuation after the window opens") {
    CHECK_THROWS_AS(price_contract(paths, c, kStart + 1), Error);
  }
  SECTION("bad tick and strike") {
    c.tick = 0.0;
    CHECK_THROWS_AS(price_contract(paths, c, kStart), Error);
    c.tick = 1.0;
    c.strike = -1.0;
    CHECK_THROWS_AS(price_contract(paths, c, kStart), Error);
  }
  SECTION("maturity before window end") {
    c.maturity = c.window.end - 1;
    CHECK_THROWS_AS(price_contract(paths, c, kStart), Error);
  }
}

TEST_CASE("payoff quantiles are ordered and track the sample") {
  Rng rng(15);
  std::vector<std::vector<double>> rows(400, std::vector<double>(30));
  for (auto& row : rows) {
    for (auto& t : row) t = 20.0 + 4.0 * rng.normal();
  }
  const auto paths = make_paths(rows);
  const auto c = base_contract(ContractKind::cdd_call, 20.0, 20.0, 30);
  const auto r = price_contract(paths, c, kStart);
  CHECK(r.payoff_q05 <= r.payoff_q50);
  CHECK(r.payoff_q50 <= r.payoff_q95);
  CHECK(r.payoff_q95 > 0.0);
}

TEST_CASE("monte carlo standard error scales as one over sqrt n") {
  const auto model = flat_model(25.0, 2.0, 0.2);
  auto contract = base_contract(ContractKind::cdd_call, 30.0, 26.0, 60);
  contract.window = {Date::ymd(2025, 1, 1), Date::ymd(2025, 3, 1)};
  contract.maturity = contract.window.end;

  SimulationConfig cfg;
  cfg.start = Date::ymd(2025, 1, 1);
  cfg.horizon = 61;
  cfg.seed = 2024;

  std::vector<double> ses;
  for (int n : {1000, 4000, 16000}) {
    cfg.n_paths = n;
    const auto paths = simulate_paths(model, cfg, 2);
    ses.push_back(price_contract(paths, contract, cfg.start).std_error);
  }
  CHECK(ses[0] / ses[1] == Catch::Approx(2.0).epsilon(0.2));
  CHECK(ses[1] / ses[2] == Catch::Approx(2.0).epsilon(0.2));
}
