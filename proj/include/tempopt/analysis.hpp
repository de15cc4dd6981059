#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tempopt/calibration.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/pricing.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

struct VolatilityScaleRow {
  double scale = 1.0;
  double price = 0.0;
  double pct_change = 0.0;  // vs the scale-1.0 price
};

// Scenario legs share their random draws by default so price differences
// isolate the parameter under study; independent mode reseeds each leg.
enum class SweepSeedMode { common_random_numbers, independent };

namespace detail {

inline double pct_change(double price, double base) {
  if (price == base) return 0.0;
  return 100.0 * (price - base) / base;
}

inline SimulationConfig leg_config(const SimulationConfig& config,
                                   SweepSeedMode mode, std::size_t leg) {
  SimulationConfig out = config;
  if (mode == SweepSeedMode::independent) {
    out.seed = substream_seed(config.seed, leg, 0x5eedULL);
  }
  return out;
}

}  // namespace detail

// Re-prices the contract at each volatility scale. Under common random
// numbers every leg re-simulates from the same seed, so only the scale
// moves between rows.
inline std::vector<VolatilityScaleRow> volatility_sensitivity(
    const TemperatureModel& model, const ContractSpec& contract,
    std::span<const double> scales, const SimulationConfig& config,
    Date valuation_date, int n_threads = 1,
    SweepSeedMode mode = SweepSeedMode::common_random_numbers) {
  const auto base_it = std::find(scales.begin(), scales.end(), 1.0);
  if (base_it == scales.end()) {
    fail(Errc::config_error, "volatility scales must include 1.0");
  }
  const auto base_leg =
      static_cast<std::size_t>(base_it - scales.begin());

  std::vector<VolatilityScaleRow> rows(scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) {
    SimulationConfig leg = detail::leg_config(config, mode, i);
    leg.vol_scale = scales[i];
    const auto paths = simulate_paths(model, leg, n_threads);
    rows[i].scale = scales[i];
    rows[i].price = price_contract(paths, contract, valuation_date).price;
  }
  for (auto& row : rows) {
    row.pct_change = detail::pct_change(row.price, rows[base_leg].price);
  }
  return rows;
}

struct RiskAversionRow {
  double lambda = 0.0;
  double price = 0.0;
};

// Prices the contract for each risk-aversion level under common random
// numbers. lambda enters only through the drift adjustment, so with
// sigma = 0 every row is identical.
inline std::vector<RiskAversionRow> risk_aversion_sensitivity(
    const TemperatureModel& model, const ContractSpec& contract,
    std::span<const double> lambdas, const SimulationConfig& config,
    Date valuation_date, int n_threads = 1,
    SweepSeedMode mode = SweepSeedMode::common_random_numbers) {
  if (lambdas.empty()) fail(Errc::config_error, "lambda list is empty");
  std::vector<RiskAversionRow> rows;
  rows.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    TemperatureModel leg_model = model;
    leg_model.risk_aversion_lambda = lambdas[i];
    const auto paths = simulate_paths(
        leg_model, detail::leg_config(config, mode, i), n_threads);
    rows.push_back(
        {lambdas[i], price_contract(paths, contract, valuation_date).price});
  }
  return rows;
}

struct ShockScenario {
  double base_price = 0.0;
  double scenario_price = 0.0;
  double ratio = 0.0;
};

// Scales the shock start probabilities by `multiplier` and re-prices under
// common random numbers. The diffusion substream is untouched by the jump
// layer, so both legs share their Gaussian increments draw for draw.
inline ShockScenario shock_probability_scenario(
    const TemperatureModel& model, const ContractSpec& contract,
    double multiplier, const SimulationConfig& config, Date valuation_date,
    int n_threads = 1,
    SweepSeedMode mode = SweepSeedMode::common_random_numbers) {
  if (multiplier < 0.0) fail(Errc::config_error, "multiplier must be >= 0");

  const auto base_paths =
      simulate_paths(model, detail::leg_config(config, mode, 0), n_threads);
  SimulationConfig scenario_config = detail::leg_config(config, mode, 1);
  scenario_config.jump_prob_scale = config.jump_prob_scale * multiplier;
  const auto scenario_paths =
      simulate_paths(model, scenario_config, n_threads);

  ShockScenario out;
  out.base_price = price_contract(base_paths, contract, valuation_date).price;
  out.scenario_price =
      price_contract(scenario_paths, contract, valuation_date).price;
  out.ratio = out.scenario_price / out.base_price;
  return out;
}

// Number of options a hedge budget buys, fractional by design.
inline double size_hedge(double hedge_amount, double unit_price) {
  if (!(unit_price > 0.0)) {
    fail(Errc::zero_price, "unit price must be > 0 to size a hedge");
  }
  return hedge_amount / unit_price;
}

struct PortfolioPosition {
  ContractSpec contract;
  double hedge_amount = 0.0;  // currency invested
  double unit_price = 0.0;    // price of one option
  double n_options = 0.0;     // hedge_amount / unit_price when engine-sized
};

inline PortfolioPosition make_position(const ContractSpec& contract,
                                       double hedge_amount,
                                       double unit_price) {
  if (!(hedge_amount > 0.0)) {
    fail(Errc::config_error, "hedge amount must be > 0");
  }
  return {contract, hedge_amount, unit_price,
          size_hedge(hedge_amount, unit_price)};
}

struct PortfolioRow {
  std::string state;
  std::string kind;
  double investment = 0.0;
  double expected_payoff = 0.0;
  double roi_pct = 0.0;
  double total_profit = 0.0;
};

// Report arithmetic shared by every portfolio row: the expected payoff is
// the undiscounted maturity cashflow, compared directly against the
// upfront investment.
inline PortfolioRow make_portfolio_row(double investment,
                                       double expected_payoff) {
  if (!(investment > 0.0)) {
    fail(Errc::config_error, "investment must be > 0");
  }
  PortfolioRow row;
  row.investment = investment;
  row.expected_payoff = expected_payoff;
  row.total_profit = expected_payoff - investment;
  row.roi_pct = 100.0 * row.total_profit / investment;
  return row;
}

// Expected payoff per position = n_options * undiscounted mean payoff of
// one option over its PathSet.
inline std::vector<PortfolioRow> evaluate_portfolio(
    std::span<const PortfolioPosition> positions,
    std::span<const PathSet* const> paths_per_position) {
  if (positions.size() != paths_per_position.size()) {
    fail(Errc::config_error, "one PathSet required per position");
  }
  std::vector<PortfolioRow> rows;
  rows.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto& pos = positions[i];
    const auto index = path_indices(*paths_per_position[i], pos.contract);
    std::vector<double> payoffs(index.size());
    for (std::size_t p = 0; p < index.size(); ++p) {
      const double moneyness = is_call(pos.contract.kind)
                                   ? index[p] - pos.contract.strike
                                   : pos.contract.strike - index[p];
      payoffs[p] = pos.contract.tick * std::max(moneyness, 0.0);
    }
    const double mean_payoff =
        pairwise_sum(payoffs) / static_cast<double>(payoffs.size());
    auto row = make_portfolio_row(pos.hedge_amount,
                                  pos.n_options * mean_payoff);
    row.state = pos.contract.state;
    row.kind = contract_kind_name(pos.contract.kind);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tempopt
