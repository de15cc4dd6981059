#pragma once

#include <string>

#include <json.hpp>

#include "tempopt/analysis.hpp"
#include "tempopt/calibration.hpp"
#include "tempopt/date.hpp"
#include "tempopt/diagnostics.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/ingest.hpp"
#include "tempopt/pricing.hpp"

namespace tempopt {

using json = nlohmann::json;

namespace detail {

inline Date date_from_json(const json& j, const std::string& key) {
  const auto d = Date::parse_iso(j.at(key).get<std::string>());
  if (!d) fail(Errc::bad_date, "field '" + key + "'");
  return *d;
}

}  // namespace detail

inline json to_json(const SeasonalMeanParams& p) {
  return {{"a", p.a},           {"b", p.b},
          {"c", p.c},           {"d", p.d},
          {"alpha", p.alpha},   {"beta", p.beta},
          {"phi", p.phi},       {"omega", p.omega},
          {"t0", p.t0.iso()},   {"time_scale", p.time_scale}};
}

inline SeasonalMeanParams seasonal_from_json(const json& j) {
  SeasonalMeanParams p;
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.c = j.at("c").get<double>();
  p.d = j.at("d").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.phi = j.at("phi").get<double>();
  p.omega = j.at("omega").get<double>();
  p.t0 = detail::date_from_json(j, "t0");
  p.time_scale = j.at("time_scale").get<double>();
  return p;
}

inline json to_json(const JumpParams& p) {
  return {{"p_h", p.p_h},         {"p_c", p.p_c},
          {"mu_h", p.mu_h},       {"sigma_h", p.sigma_h},
          {"mu_c", p.mu_c},       {"sigma_c", p.sigma_c},
          {"duration", p.duration}, {"lambda_j", p.lambda_j}};
}

inline JumpParams jumps_from_json(const json& j) {
  JumpParams p;
  p.p_h = j.at("p_h").get<double>();
  p.p_c = j.at("p_c").get<double>();
  p.mu_h = j.at("mu_h").get<double>();
  p.sigma_h = j.at("sigma_h").get<double>();
  p.mu_c = j.at("mu_c").get<double>();
  p.sigma_c = j.at("sigma_c").get<double>();
  p.duration = j.at("duration").get<int>();
  p.lambda_j = j.at("lambda_j").get<double>();
  return p;
}

inline json to_json(const TemperatureModel& m) {
  return {{"state", m.state},
          {"seasonal", to_json(m.seasonal)},
          {"reversion",
           {{"kappa", m.reversion.kappa},
            {"ar1_coeff", m.reversion.ar1_coeff}}},
          {"volatility",
           {{"knot_days", m.volatility.knot_days},
            {"knot_sigmas", m.volatility.knot_sigmas}}},
          {"jumps", to_json(m.jumps)},
          {"risk_aversion_lambda", m.risk_aversion_lambda},
          {"t_ref_hdd", m.t_ref_hdd},
          {"t_ref_cdd", m.t_ref_cdd}};
}

inline TemperatureModel model_from_json(const json& j) {
  TemperatureModel m;
  m.state = j.at("state").get<std::string>();
  m.seasonal = seasonal_from_json(j.at("seasonal"));
  m.reversion.kappa = j.at("reversion").at("kappa").get<double>();
  m.reversion.ar1_coeff = j.at("reversion").at("ar1_coeff").get<double>();
  m.volatility.knot_days =
      j.at("volatility").at("knot_days").get<std::vector<double>>();
  m.volatility.knot_sigmas =
      j.at("volatility").at("knot_sigmas").get<std::vector<double>>();
  m.volatility.spline = PeriodicCubicSpline(m.volatility.knot_days,
                                            m.volatility.knot_sigmas, 365.0);
  m.jumps = jumps_from_json(j.at("jumps"));
  m.risk_aversion_lambda = j.at("risk_aversion_lambda").get<double>();
  m.t_ref_hdd = j.at("t_ref_hdd").get<double>();
  m.t_ref_cdd = j.at("t_ref_cdd").get<double>();
  return m;
}

inline json to_json(const CalibrationDiagnostics& d) {
  return {{"train_first", d.train_first.iso()},
          {"train_last", d.train_last.iso()},
          {"n_obs", d.n_obs},
          {"seasonal_rss", d.seasonal_rss},
          {"ar1_coeff", d.ar1_coeff},
          {"ar1_pairs", d.ar1_pairs},
          {"sigma_min", d.sigma_min},
          {"sigma_max", d.sigma_max}};
}

inline json contract_to_json(const ContractSpec& c) {
  return {{"kind", contract_kind_name(c.kind)},
          {"strike", c.strike},
          {"tick", c.tick},
          {"window_start", c.window.start.iso()},
          {"window_end", c.window.end.iso()},
          {"maturity", c.maturity.iso()},
          {"rate", c.rate},
          {"ref_temp", c.ref_temp},
          {"state", c.state},
          {"min_event_len", c.min_event_len}};
}

inline ContractKind contract_kind_from_name(const std::string& name) {
  for (ContractKind k :
       {ContractKind::hdd_call, ContractKind::hdd_put, ContractKind::cdd_call,
        ContractKind::cdd_put, ContractKind::heatwave_call,
        ContractKind::coldwave_put}) {
    if (name == contract_kind_name(k)) return k;
  }
  fail(Errc::config_error, "unknown contract kind '" + name + "'");
}

inline json pricing_result_to_json(const PricingResult& r) {
  return {{"price", r.price},
          {"std_error", r.std_error},
          {"n_paths", r.n_paths},
          {"discount_factor", r.discount_factor},
          {"mean_index", r.mean_index},
          {"payoff_q05", r.payoff_q05},
          {"payoff_q50", r.payoff_q50},
          {"payoff_q95", r.payoff_q95}};
}

inline json to_json(const ValidationReport& r) {
  return {{"rmse", r.rmse},
          {"rmse_pct", r.rmse_pct},
          {"mae", r.mae},
          {"ljung_box_stat", r.ljung_box_stat},
          {"ljung_box_p", r.ljung_box_p},
          {"arch_lm_stat", r.arch_lm_stat},
          {"arch_lm_p", r.arch_lm_p},
          {"sample_count", r.sample_count}};
}

inline json to_json(const CleaningReport& r) {
  return {{"state", r.state},
          {"records_parsed", r.records_parsed},
          {"parse_warnings", r.parse_warnings},
          {"outliers_removed", r.outliers_removed},
          {"gaps_filled", r.gaps_filled},
          {"days_filled", r.days_filled},
          {"gaps_left", r.gaps_left},
          {"days_present", r.days_present}};
}

}  // namespace tempopt
