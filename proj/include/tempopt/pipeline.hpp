#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tempopt/analysis.hpp"
#include "tempopt/calibration.hpp"
#include "tempopt/config.hpp"
#include "tempopt/diagnostics.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/ingest.hpp"
#include "tempopt/json_io.hpp"
#include "tempopt/pricing.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/synthetic.hpp"

namespace tempopt {

// Orchestration of the ingest -> calibrate -> simulate -> price -> analyze
// stages. The CLI is a thin wrapper over run_command so tests can drive
// the whole pipeline in-process.

struct PipelineOptions {
  std::vector<std::string> state_filter;  // empty = all configured states
  bool dump_paths = false;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
};

namespace detail {

// Write-temp-then-rename so a crashed run never leaves half a file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(Errc::config_error, "cannot write to '" + tmp + "'");
    }
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string fixed_decimals(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

struct StateData {
  DailyTemperatureSeries cleaned;
  DailyTemperatureSeries train;
  DailyTemperatureSeries test;  // empty when no cutoff configured
  CleaningReport report;
  TemperatureModel model;
  CalibrationDiagnostics diagnostics;
};

inline std::vector<std::string> selected_states(
    const RunConfig& config, const PipelineOptions& options) {
  if (config.states.empty()) {
    fail(Errc::config_error, "key 'states' must list at least one state");
  }
  if (options.state_filter.empty()) return config.states;
  std::vector<std::string> out;
  for (const auto& s : options.state_filter) {
    if (std::find(config.states.begin(), config.states.end(), s) ==
        config.states.end()) {
      fail(Errc::config_error,
           "state '" + s + "' is not listed under key 'states'");
    }
    out.push_back(s);
  }
  return out;
}

// ingest stage: parse, aggregate, clean. Per-state cleaning runs in
// parallel; every step is a pure function of the parsed records.
inline std::map<std::string, StateData> load_and_clean(
    const RunConfig& config, const std::vector<std::string>& states) {
  if (config.data.csv.empty()) {
    fail(Errc::config_error, "missing key 'data.csv'");
  }
  if (!std::filesystem::exists(config.data.csv)) {
    fail(Errc::config_error,
         "data file '" + config.data.csv + "' does not exist");
  }
  std::ifstream in(config.data.csv);
  const auto parsed = parse_temperature_csv(in, config.data.schema);
  auto by_state = aggregate_state(parsed.records);

  std::map<std::string, StateData> out;
  std::map<std::string, std::future<StateData>> tasks;
  for (const auto& state : states) {
    const auto it = by_state.find(state);
    if (it == by_state.end()) {
      fail(Errc::config_error,
           "state '" + state + "' has no rows in '" + config.data.csv + "'");
    }
    tasks.emplace(state, std::async(std::launch::async, [&, state]() {
      StateData data;
      const auto outliers =
          remove_outliers(by_state.at(state), config.calibration.outlier_k);
      auto imputed =
          impute_gaps(outliers.series, config.calibration.max_gap);
      data.cleaned = std::move(imputed.series);
      data.report.state = state;
      data.report.records_parsed = parsed.records.size();
      data.report.parse_warnings = parsed.warnings.size();
      data.report.outliers_removed = outliers.removed;
      data.report.gaps_filled = imputed.gaps_filled;
      data.report.days_filled = imputed.days_filled;
      data.report.gaps_left = imputed.gaps_left.size();
      data.report.days_present = data.cleaned.present_count();
      return data;
    }));
  }
  for (auto& [state, task] : tasks) out.emplace(state, task.get());
  return out;
}

inline void calibrate_states(const RunConfig& config,
                             std::map<std::string, StateData>& data) {
  std::map<std::string, std::future<void>> tasks;
  for (auto& [state, sd] : data) {
    StateData* p = &sd;
    tasks.emplace(state, std::async(std::launch::async, [&config, p]() {
      if (config.calibration.train_cutoff) {
        auto [train, test] =
            split_train_test(p->cleaned, *config.calibration.train_cutoff);
        p->train = std::move(train);
        p->test = std::move(test);
      } else {
        p->train = p->cleaned;
      }
      auto [model, diag] =
          calibrate_model(p->train, config.calibration.options);
      p->model = std::move(model);
      p->diagnostics = diag;
    }));
  }
  for (auto& [state, task] : tasks) task.get();
}

inline double resolve_ref_temp(const ContractConfig& cc,
                               const TemperatureModel& model) {
  if (cc.ref_temp_set) return cc.contract.ref_temp;
  switch (cc.contract.kind) {
    case ContractKind::hdd_call:
    case ContractKind::hdd_put:
    case ContractKind::coldwave_put:
      return model.t_ref_hdd;
    case ContractKind::cdd_call:
    case ContractKind::cdd_put:
    case ContractKind::heatwave_call:
      return model.t_ref_cdd;
  }
  return model.t_ref_hdd;
}

inline ContractSpec resolve_contract(const ContractConfig& cc,
                                     const TemperatureModel& model) {
  ContractSpec c = cc.contract;
  c.ref_temp = resolve_ref_temp(cc, model);
  return c;
}

inline void check_contract_fits(const ContractSpec& c,
                                const SimulationConfig& sim,
                                std::size_t index) {
  const Date axis_end = sim.start + (sim.horizon - 1);
  if (c.window.start < sim.start || c.window.end > axis_end) {
    fail(Errc::config_error,
         "key 'contracts[" + std::to_string(index) +
             "]': accrual window not covered by the simulation axis [" +
             sim.start.iso() + ", " + axis_end.iso() + "]");
  }
  if (sim.start > c.window.start) {
    fail(Errc::config_error, "valuation date after window start");
  }
}

inline const StateData& state_for_contract(
    const std::map<std::string, StateData>& data, const ContractSpec& c,
    std::size_t index) {
  const auto it = data.find(c.state);
  if (it == data.end()) {
    fail(Errc::config_error,
         "key 'contracts[" + std::to_string(index) + "].state': '" + c.state +
             "' is not a calibrated state");
  }
  return it->second;
}

}  // namespace detail

inline int run_command(const std::string& command, RunConfig config,
                       const PipelineOptions& options, std::ostream& log) {
  if (options.seed_override) config.simulation.seed = *options.seed_override;
  if (options.out_override) config.output_dir = *options.out_override;
  const std::filesystem::path out_dir = config.output_dir;

  if (command == "synth") {
    const auto series = generate_synthetic_series(config.synth);
    const auto records = series_to_records(series);
    std::ostringstream csv;
    write_records_csv(csv, records);
    detail::write_file_atomic(out_dir / "synthetic.csv", csv.str());
    log << "synth: wrote " << records.size() << " rows for state '"
        << config.synth.state << "' to "
        << (out_dir / "synthetic.csv").string() << "\n";
    return 0;
  }

  const auto states = detail::selected_states(config, options);
  auto data = detail::load_and_clean(config, states);

  if (command == "ingest") {
    json reports = json::array();
    for (const auto& [state, sd] : data) {
      std::ostringstream csv;
      write_cleaned_csv(csv, sd.cleaned);
      detail::write_file_atomic(out_dir / (state + "_clean.csv"), csv.str());
      reports.push_back(to_json(sd.report));
      log << "ingest: " << state << " " << sd.report.days_present
          << " days present, " << sd.report.outliers_removed
          << " outliers removed, " << sd.report.gaps_filled
          << " gaps filled\n";
    }
    detail::write_file_atomic(out_dir / "cleaning_report.json",
                              reports.dump(2) + "\n");
    return 0;
  }

  detail::calibrate_states(config, data);

  if (command == "calibrate") {
    for (const auto& [state, sd] : data) {
      json doc = {{"model", to_json(sd.model)},
                  {"diagnostics", to_json(sd.diagnostics)}};
      detail::write_file_atomic(out_dir / (state + "_model.json"),
                                doc.dump(2) + "\n");
      log << "calibrate: " << state
          << " kappa=" << sd.model.reversion.kappa
          << " t_ref_hdd=" << sd.model.t_ref_hdd
          << " t_ref_cdd=" << sd.model.t_ref_cdd << "\n";
    }
    return 0;
  }

  if (command == "simulate") {
    const auto sim = config.simulation.make("simulate");
    for (const auto& [state, sd] : data) {
      const auto paths =
          simulate_paths(sd.model, sim, config.simulation.n_threads);
      char fp[32];
      std::snprintf(fp, sizeof(fp), "%016llx",
                    static_cast<unsigned long long>(paths.model_fingerprint));
      log << "simulate: " << state << " paths=" << paths.n_paths
          << " horizon=" << paths.horizon << " fingerprint=" << fp << "\n";
      if (options.dump_paths) {
        std::ostringstream csv;
        csv << "path_id,date,temp\n";
        for (int p = 0; p < paths.n_paths; ++p) {
          for (int k = 0; k < paths.horizon; ++k) {
            csv << p << ',' << paths.date_at(k).iso() << ','
                << detail::format_double(paths.at(p, k)) << '\n';
          }
        }
        detail::write_file_atomic(out_dir / (state + "_paths.csv"),
                                  csv.str());
      }
    }
    return 0;
  }

  if (command == "price") {
    if (config.contracts.empty()) {
      fail(Errc::config_error, "key 'contracts' is empty");
    }
    const auto sim = config.simulation.make("price");
    std::map<std::string, PathSet> paths_by_state;
    json detail_rows = json::array();
    // state -> kind -> formatted price for the pivot table
    std::map<std::string, std::map<std::string, std::string>> pivot;

    for (std::size_t i = 0; i < config.contracts.size(); ++i) {
      const auto& sd =
          detail::state_for_contract(data, config.contracts[i].contract, i);
      const auto contract =
          detail::resolve_contract(config.contracts[i], sd.model);
      detail::check_contract_fits(contract, sim, i);
      if (paths_by_state.find(contract.state) == paths_by_state.end()) {
        paths_by_state.emplace(
            contract.state,
            simulate_paths(sd.model, sim, config.simulation.n_threads));
      }
      const auto result = price_contract(paths_by_state.at(contract.state),
                                         contract, sim.start);
      detail_rows.push_back({{"contract", contract_to_json(contract)},
                             {"result", pricing_result_to_json(result)}});
      pivot[contract.state][contract_kind_name(contract.kind)] =
          detail::format_double(result.price);
      log << "price: " << contract.state << " "
          << contract_kind_name(contract.kind) << " strike="
          << contract.strike << " price=" << result.price << " se="
          << result.std_error << "\n";
    }
    detail::write_file_atomic(out_dir / "prices.json",
                              detail_rows.dump(2) + "\n");

    std::ostringstream csv;
    csv << "state,hdd_call,hdd_put,cdd_call,cdd_put,heatwave_call,"
           "coldwave_put\n";
    for (const auto& [state, kinds] : pivot) {
      csv << state;
      for (const char* kind :
           {"hdd_call", "hdd_put", "cdd_call", "cdd_put", "heatwave_call",
            "coldwave_put"}) {
        csv << ',';
        const auto it = kinds.find(kind);
        if (it != kinds.end()) csv << it->second;
      }
      csv << '\n';
    }
    detail::write_file_atomic(out_dir / "prices.csv", csv.str());
    return 0;
  }

  if (command == "sensitivity") {
    if (config.contracts.empty()) {
      fail(Errc::config_error, "key 'contracts' is empty");
    }
    const std::size_t ci = config.analysis.sensitivity_contract;
    if (ci >= config.contracts.size()) {
      fail(Errc::config_error,
           "key 'analysis.sensitivity_contract' out of range");
    }
    const auto sim = config.simulation.make("sensitivity");
    const auto& sd =
        detail::state_for_contract(data, config.contracts[ci].contract, ci);
    const auto contract =
        detail::resolve_contract(config.contracts[ci], sd.model);
    detail::check_contract_fits(contract, sim, ci);

    const auto seed_mode = config.analysis.independent_seeds
                               ? SweepSeedMode::independent
                               : SweepSeedMode::common_random_numbers;
    const auto vol_rows = volatility_sensitivity(
        sd.model, contract, config.analysis.vol_scales, sim, sim.start,
        config.simulation.n_threads, seed_mode);
    std::ostringstream vol_csv;
    vol_csv << "scale,price,change_pct\n";
    for (const auto& row : vol_rows) {
      vol_csv << detail::format_double(row.scale) << ','
              << detail::format_double(row.price) << ','
              << detail::fixed_decimals(row.pct_change, 1) << '\n';
    }
    detail::write_file_atomic(out_dir / "volatility_sensitivity.csv",
                              vol_csv.str());

    const auto lambda_rows = risk_aversion_sensitivity(
        sd.model, contract, config.analysis.lambdas, sim, sim.start,
        config.simulation.n_threads, seed_mode);
    std::ostringstream lambda_csv;
    lambda_csv << "lambda,price\n";
    for (const auto& row : lambda_rows) {
      lambda_csv << detail::format_double(row.lambda) << ','
                 << detail::format_double(row.price) << '\n';
    }
    detail::write_file_atomic(out_dir / "risk_aversion.csv",
                              lambda_csv.str());

    const auto shock = shock_probability_scenario(
        sd.model, contract, config.analysis.shock_multiplier, sim, sim.start,
        config.simulation.n_threads, seed_mode);
    json shock_doc = {{"multiplier", config.analysis.shock_multiplier},
                      {"base_price", shock.base_price},
                      {"scenario_price", shock.scenario_price},
                      {"ratio", shock.ratio}};
    detail::write_file_atomic(out_dir / "shock_scenario.json",
                              shock_doc.dump(2) + "\n");
    log << "sensitivity: " << vol_rows.size() << " volatility rows, "
        << lambda_rows.size() << " lambda rows, shock ratio=" << shock.ratio
        << "\n";
    return 0;
  }

  if (command == "hedge") {
    if (config.analysis.hedges.empty()) {
      fail(Errc::config_error, "key 'analysis.hedges' is empty");
    }
    const auto sim = config.simulation.make("hedge");
    std::map<std::string, PathSet> paths_by_state;
    std::vector<PortfolioPosition> positions;
    std::vector<const PathSet*> position_paths;

    std::ostringstream hedge_csv;
    hedge_csv << "event,state,hedge,options_purchased,strike,maturity\n";
    for (const auto& hedge : config.analysis.hedges) {
      if (hedge.contract_index >= config.contracts.size()) {
        fail(Errc::config_error,
             "key 'analysis.hedges': contract index out of range");
      }
      const auto& cc = config.contracts[hedge.contract_index];
      const auto& sd =
          detail::state_for_contract(data, cc.contract, hedge.contract_index);
      const auto contract = detail::resolve_contract(cc, sd.model);
      detail::check_contract_fits(contract, sim, hedge.contract_index);
      if (paths_by_state.find(contract.state) == paths_by_state.end()) {
        paths_by_state.emplace(
            contract.state,
            simulate_paths(sd.model, sim, config.simulation.n_threads));
      }
      const auto& paths = paths_by_state.at(contract.state);
      const auto priced = price_contract(paths, contract, sim.start);
      if (!(priced.price > 0.0)) {
        fail(Errc::zero_price,
             "contract " + std::to_string(hedge.contract_index) +
                 " priced at zero; cannot size a hedge");
      }
      positions.push_back(
          make_position(contract, hedge.amount, priced.price));
      position_paths.push_back(&paths);
      hedge_csv << contract_kind_name(contract.kind) << ',' << contract.state
                << ',' << detail::format_double(hedge.amount) << ','
                << detail::fixed_decimals(positions.back().n_options, 2)
                << ',' << detail::format_double(contract.strike) << ','
                << contract.maturity.iso() << '\n';
    }
    detail::write_file_atomic(out_dir / "hedges.csv", hedge_csv.str());

    const auto rows = evaluate_portfolio(positions, position_paths);
    std::ostringstream pf_csv;
    pf_csv << "state,investment,expected_payoff,roi_pct,total_profit\n";
    for (const auto& row : rows) {
      pf_csv << row.state << ',' << detail::format_double(row.investment)
             << ',' << detail::format_double(row.expected_payoff) << ','
             << detail::fixed_decimals(row.roi_pct, 1) << ','
             << detail::format_double(row.total_profit) << '\n';
    }
    detail::write_file_atomic(out_dir / "portfolio.csv", pf_csv.str());
    log << "hedge: " << rows.size() << " positions sized\n";
    return 0;
  }

  if (command == "validate") {
    if (!config.calibration.train_cutoff) {
      fail(Errc::config_error,
           "missing key 'calibration.train_cutoff' (required for validate)");
    }
    for (const auto& [state, sd] : data) {
      const auto report = validate_model(sd.model, sd.test);
      detail::write_file_atomic(out_dir / (state + "_validation.json"),
                                to_json(report).dump(2) + "\n");
      log << "validate: " << state << " rmse=" << report.rmse
          << " mae=" << report.mae << " lb_p=" << report.ljung_box_p
          << " arch_p=" << report.arch_lm_p << "\n";
    }
    return 0;
  }

  fail(Errc::config_error, "unknown command '" + command + "'");
}

}  // namespace tempopt
