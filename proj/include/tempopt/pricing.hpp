#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/indices.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/stats.hpp"

namespace tempopt {

enum class ContractKind {
  hdd_call,
  hdd_put,
  cdd_call,
  cdd_put,
  heatwave_call,
  coldwave_put,
};

inline const char* contract_kind_name(ContractKind k) {
  switch (k) {
    case ContractKind::hdd_call: return "hdd_call";
    case ContractKind::hdd_put: return "hdd_put";
    case ContractKind::cdd_call: return "cdd_call";
    case ContractKind::cdd_put: return "cdd_put";
    case ContractKind::heatwave_call: return "heatwave_call";
    case ContractKind::coldwave_put: return "coldwave_put";
  }
  return "unknown";
}

inline bool is_call(ContractKind k) {
  return k == ContractKind::hdd_call || k == ContractKind::cdd_call ||
         k == ContractKind::heatwave_call;
}

inline bool is_degree_day(ContractKind k) {
  return k == ContractKind::hdd_call || k == ContractKind::hdd_put ||
         k == ContractKind::cdd_call || k == ContractKind::cdd_put;
}

// One derivative contract. ref_temp is the degree-day reference for
// HDD/CDD kinds and the event threshold for heatwave/coldwave kinds.
struct ContractSpec {
  ContractKind kind = ContractKind::hdd_call;
  double strike = 0.0;  // degree-days, or event count for event kinds
  double tick = 1.0;    // currency per degree-day / per event
  AccrualWindow window;
  Date maturity;
  double rate = 0.0;    // continuously compounded, per year
  double ref_temp = 0.0;
  std::string state;
  int min_event_len = 5;

  friend bool operator==(const ContractSpec&, const ContractSpec&) = default;
};

struct PricingResult {
  double price = 0.0;
  double std_error = 0.0;
  int n_paths = 0;
  double discount_factor = 1.0;
  double mean_index = 0.0;
  double payoff_q05 = 0.0;
  double payoff_q50 = 0.0;
  double payoff_q95 = 0.0;
};

namespace detail {

inline void validate_contract(const ContractSpec& c) {
  if (!(c.tick > 0.0)) fail(Errc::config_error, "tick must be > 0");
  if (c.strike < 0.0) fail(Errc::config_error, "strike must be >= 0");
  if (c.maturity < c.window.end) {
    fail(Errc::config_error, "maturity before accrual window end");
  }
  if (c.rate < 0.0) fail(Errc::config_error, "rate must be >= 0");
  if (c.min_event_len < 1) fail(Errc::config_error, "min_event_len >= 1");
}

}  // namespace detail

// Per-path underlying index: degree-days for HDD/CDD kinds, detected event
// count for event kinds.
inline std::vector<double> path_indices(const PathSet& paths,
                                        const ContractSpec& contract) {
  detail::validate_contract(contract);
  if (paths.n_paths < 1) fail(Errc::empty_path_set, "no simulated paths");
  std::vector<double> index(static_cast<std::size_t>(paths.n_paths));
  for (int p = 0; p < paths.n_paths; ++p) {
    switch (contract.kind) {
      case ContractKind::hdd_call:
      case ContractKind::hdd_put:
        index[static_cast<std::size_t>(p)] =
            compute_hdd(paths, p, contract.ref_temp, contract.window);
        break;
      case ContractKind::cdd_call:
      case ContractKind::cdd_put:
        index[static_cast<std::size_t>(p)] =
            compute_cdd(paths, p, contract.ref_temp, contract.window);
        break;
      case ContractKind::heatwave_call:
        index[static_cast<std::size_t>(p)] = static_cast<double>(
            detect_events(paths, p, contract.ref_temp, EventDirection::above,
                          contract.min_event_len, contract.window));
        break;
      case ContractKind::coldwave_put:
        index[static_cast<std::size_t>(p)] = static_cast<double>(
            detect_events(paths, p, contract.ref_temp, EventDirection::below,
                          contract.min_event_len, contract.window));
        break;
    }
  }
  return index;
}

inline double discount_factor(double rate, Date valuation, Date maturity) {
  const double tau =
      static_cast<double>(maturity - valuation) / kDaysPerYear;
  return std::exp(-rate * tau);
}

// Discounted Monte Carlo price: per path, payoff tick*max(I - K, 0) for
// calls and tick*max(K - I, 0) for puts; price = e^{-r tau} * mean payoff,
// standard error from the payoff sample. Means use pairwise summation in
// path order, so the result does not depend on how the work was split.
inline PricingResult price_contract(const PathSet& paths,
                                    const ContractSpec& contract,
                                    Date valuation_date) {
  if (valuation_date > contract.window.start) {
    fail(Errc::config_error,
         "valuation date after the accrual window opens");
  }
  const auto index = path_indices(paths, contract);
  const std::size_t n = index.size();

  std::vector<double> payoffs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double moneyness = is_call(contract.kind)
                                 ? index[i] - contract.strike
                                 : contract.strike - index[i];
    payoffs[i] = contract.tick * std::max(moneyness, 0.0);
  }

  PricingResult result;
  result.n_paths = paths.n_paths;
  result.discount_factor =
      discount_factor(contract.rate, valuation_date, contract.maturity);
  result.mean_index = pairwise_sum(index) / static_cast<double>(n);

  const double mean_payoff = pairwise_sum(payoffs) / static_cast<double>(n);
  result.price = result.discount_factor * mean_payoff;
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = payoffs[i] - mean_payoff;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    result.std_error =
        result.discount_factor * std::sqrt(var / static_cast<double>(n));
  }

  std::sort(payoffs.begin(), payoffs.end());
  result.payoff_q05 = quantile_sorted(payoffs, 0.05);
  result.payoff_q50 = quantile_sorted(payoffs, 0.50);
  result.payoff_q95 = quantile_sorted(payoffs, 0.95);
  return result;
}

struct PutCallDecomposition {
  double call_price = 0.0;
  double put_price = 0.0;
  double residual = 0.0;  // C - P - e^{-r tau} tick (mean_index - K)
};

// Same-sample parity check: max(x,0) - max(-x,0) = x per path, so the
// residual is pure floating-point noise. Only degree-day kinds qualify.
inline PutCallDecomposition put_call_decomposition(const PathSet& paths,
                                                   const ContractSpec& base,
                                                   Date valuation_date) {
  if (!is_degree_day(base.kind)) {
    fail(Errc::config_error,
         "put-call decomposition requires a degree-day contract");
  }
  ContractSpec call = base;
  ContractSpec put = base;
  const bool hdd = base.kind == ContractKind::hdd_call ||
                   base.kind == ContractKind::hdd_put;
  call.kind = hdd ? ContractKind::hdd_call : ContractKind::cdd_call;
  put.kind = hdd ? ContractKind::hdd_put : ContractKind::cdd_put;

  const auto call_result = price_contract(paths, call, valuation_date);
  const auto put_result = price_contract(paths, put, valuation_date);

  PutCallDecomposition out;
  out.call_price = call_result.price;
  out.put_price = put_result.price;
  out.residual = call_result.price - put_result.price -
                 call_result.discount_factor * base.tick *
                     (call_result.mean_index - base.strike);
  return out;
}

}  // namespace tempopt
