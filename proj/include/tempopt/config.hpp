#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempopt/calibration.hpp"
#include "tempopt/date.hpp"
#include "tempopt/errors.hpp"
#include "tempopt/ingest.hpp"
#include "tempopt/json_io.hpp"
#include "tempopt/pricing.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/synthetic.hpp"

namespace tempopt {

// Declarative run configuration consumed by the CLI. Each getter below
// reports the full key path of whatever is missing or malformed.

namespace cfg {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const json& require(const json& j, const std::string& key,
                           const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    fail(Errc::config_error, "missing key '" + join(path, key) + "'");
  }
  return j.at(key);
}

template <typename T>
T value(const json& j, const std::string& key, const std::string& path) {
  try {
    return require(j, key, path).get<T>();
  } catch (const json::exception&) {
    fail(Errc::config_error, "key '" + join(path, key) + "' has wrong type");
  }
}

template <typename T>
T value_or(const json& j, const std::string& key, const std::string& path,
           T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return value<T>(j, key, path);
}

inline Date date_value(const json& j, const std::string& key,
                       const std::string& path) {
  const auto text = value<std::string>(j, key, path);
  const auto d = Date::parse_iso(text);
  if (!d) {
    fail(Errc::config_error,
         "key '" + join(path, key) + "' is not an ISO date: '" + text + "'");
  }
  return *d;
}

inline std::optional<Date> date_value_opt(const json& j,
                                          const std::string& key,
                                          const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return {};
  return date_value(j, key, path);
}

}  // namespace cfg

struct DataConfig {
  std::string csv;
  CsvSchema schema;
};

struct CalibrationConfig {
  double outlier_k = 3.0;
  int max_gap = 7;
  std::optional<Date> train_cutoff;
  CalibrationOptions options;
};

struct SimulationSettings {
  std::optional<Date> start;
  int horizon = 0;
  int n_paths = 1000;
  std::uint64_t seed = 0;
  double vol_scale = 1.0;
  double jump_prob_scale = 1.0;
  std::optional<double> initial_temp;  // nullopt = start at theta
  int n_threads = 1;

  SimulationConfig make(const std::string& context) const {
    if (!start) {
      fail(Errc::config_error,
           "missing key 'simulation.start' (required for " + context + ")");
    }
    if (horizon < 1) {
      fail(Errc::config_error, "key 'simulation.horizon' must be >= 1");
    }
    SimulationConfig c;
    c.start = *start;
    c.horizon = horizon;
    c.n_paths = n_paths;
    c.seed = seed;
    c.vol_scale = vol_scale;
    c.jump_prob_scale = jump_prob_scale;
    c.initial_temp = initial_temp;
    return c;
  }
};

struct ContractConfig {
  ContractSpec contract;
  bool ref_temp_set = false;
};

struct HedgeSpec {
  std::size_t contract_index = 0;
  double amount = 0.0;
};

struct AnalysisConfig {
  std::vector<double> vol_scales{0.8, 1.0, 1.2};
  std::vector<double> lambdas{0.0, 0.05, 0.1};
  double shock_multiplier = 2.0;
  std::size_t sensitivity_contract = 0;
  bool independent_seeds = false;  // default: common random numbers
  std::vector<HedgeSpec> hedges;
};

struct RunConfig {
  DataConfig data;
  std::vector<std::string> states;
  CalibrationConfig calibration;
  SimulationSettings simulation;
  std::vector<ContractConfig> contracts;
  AnalysisConfig analysis;
  SyntheticSpec synth = default_synthetic_spec();
  std::string output_dir = "out";
};

inline ContractConfig parse_contract(const json& j, const std::string& path) {
  ContractConfig out;
  auto& c = out.contract;
  c.kind = contract_kind_from_name(cfg::value<std::string>(j, "kind", path));
  c.strike = cfg::value<double>(j, "strike", path);
  c.tick = cfg::value_or<double>(j, "tick", path, 1.0);
  c.window.start = cfg::date_value(j, "window_start", path);
  c.window.end = cfg::date_value(j, "window_end", path);
  c.maturity = cfg::date_value(j, "maturity", path);
  c.rate = cfg::value<double>(j, "rate", path);
  c.state = cfg::value<std::string>(j, "state", path);
  c.min_event_len = cfg::value_or<int>(j, "min_event_len", path, 5);
  if (j.contains("ref_temp") && !j.at("ref_temp").is_null()) {
    c.ref_temp = cfg::value<double>(j, "ref_temp", path);
    out.ref_temp_set = true;
  }
  return out;
}

inline RunConfig parse_run_config(const json& j) {
  RunConfig out;

  if (j.contains("data")) {
    const auto& d = j.at("data");
    out.data.csv = cfg::value<std::string>(d, "csv", "data");
    if (d.contains("schema")) {
      const auto& s = d.at("schema");
      out.data.schema.date =
          cfg::value_or<std::string>(s, "date", "data.schema", "date");
      out.data.schema.state =
          cfg::value_or<std::string>(s, "state", "data.schema", "state");
      out.data.schema.tavg =
          cfg::value_or<std::string>(s, "tavg", "data.schema", "tavg");
      out.data.schema.tmin =
          cfg::value_or<std::string>(s, "tmin", "data.schema", "tmin");
      out.data.schema.tmax =
          cfg::value_or<std::string>(s, "tmax", "data.schema", "tmax");
    }
  }
  out.states = cfg::value_or<std::vector<std::string>>(j, "states", "", {});

  if (j.contains("calibration")) {
    const auto& c = j.at("calibration");
    out.calibration.outlier_k =
        cfg::value_or<double>(c, "outlier_k", "calibration", 3.0);
    out.calibration.max_gap =
        cfg::value_or<int>(c, "max_gap", "calibration", 7);
    out.calibration.train_cutoff =
        cfg::date_value_opt(c, "train_cutoff", "calibration");
    auto months = [&](const char* key, std::set<int> fallback) {
      if (!c.contains(key)) return fallback;
      const auto v = cfg::value<std::vector<int>>(c, key, "calibration");
      std::set<int> m(v.begin(), v.end());
      for (int x : m) {
        if (x < 1 || x > 12) {
          fail(Errc::config_error, "key 'calibration." + std::string(key) +
                                       "' has month outside 1..12");
        }
      }
      return m;
    };
    out.calibration.options.winter_months =
        months("winter_months", {12, 1, 2});
    out.calibration.options.monsoon_months =
        months("monsoon_months", {6, 7, 8, 9});
    const auto source = cfg::value_or<std::string>(
        c, "volatility_source", "calibration", "residual");
    if (source == "residual") {
      out.calibration.options.volatility_source = VolatilitySource::residual;
    } else if (source == "raw") {
      out.calibration.options.volatility_source = VolatilitySource::raw;
    } else {
      fail(Errc::config_error,
           "key 'calibration.volatility_source' must be 'residual' or 'raw'");
    }
    out.calibration.options.vol_day_window =
        cfg::value_or<int>(c, "vol_day_window", "calibration", 2);
    out.calibration.options.risk_aversion_lambda =
        cfg::value_or<double>(c, "risk_aversion_lambda", "calibration", 0.0);
    if (c.contains("jumps")) {
      out.calibration.options.jumps = jumps_from_json(c.at("jumps"));
    }
  }

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    out.simulation.start = cfg::date_value_opt(s, "start", "simulation");
    out.simulation.horizon =
        cfg::value_or<int>(s, "horizon", "simulation", 0);
    out.simulation.n_paths =
        cfg::value_or<int>(s, "n_paths", "simulation", 1000);
    out.simulation.seed =
        cfg::value_or<std::uint64_t>(s, "seed", "simulation", 0);
    out.simulation.vol_scale =
        cfg::value_or<double>(s, "vol_scale", "simulation", 1.0);
    out.simulation.jump_prob_scale =
        cfg::value_or<double>(s, "jump_prob_scale", "simulation", 1.0);
    if (s.contains("initial_temp") && !s.at("initial_temp").is_null()) {
      if (s.at("initial_temp").is_string()) {
        if (s.at("initial_temp").get<std::string>() != "theta") {
          fail(Errc::config_error,
               "key 'simulation.initial_temp' must be a number or \"theta\"");
        }
      } else {
        out.simulation.initial_temp =
            cfg::value<double>(s, "initial_temp", "simulation");
      }
    }
    out.simulation.n_threads =
        cfg::value_or<int>(s, "n_threads", "simulation", 1);
  }

  if (j.contains("contracts")) {
    const auto& arr = j.at("contracts");
    if (!arr.is_array()) {
      fail(Errc::config_error, "key 'contracts' must be an array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.contracts.push_back(
          parse_contract(arr[i], "contracts[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("analysis")) {
    const auto& a = j.at("analysis");
    out.analysis.vol_scales = cfg::value_or<std::vector<double>>(
        a, "vol_scales", "analysis", {0.8, 1.0, 1.2});
    out.analysis.lambdas = cfg::value_or<std::vector<double>>(
        a, "lambdas", "analysis", {0.0, 0.05, 0.1});
    out.analysis.shock_multiplier =
        cfg::value_or<double>(a, "shock_multiplier", "analysis", 2.0);
    out.analysis.sensitivity_contract = cfg::value_or<std::size_t>(
        a, "sensitivity_contract", "analysis", 0);
    out.analysis.independent_seeds =
        cfg::value_or<bool>(a, "independent_seeds", "analysis", false);
    if (a.contains("hedges")) {
      const auto& hs = a.at("hedges");
      if (!hs.is_array()) {
        fail(Errc::config_error, "key 'analysis.hedges' must be an array");
      }
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const std::string path = "analysis.hedges[" + std::to_string(i) + "]";
        HedgeSpec h;
        h.contract_index = cfg::value<std::size_t>(hs[i], "contract", path);
        h.amount = cfg::value<double>(hs[i], "amount", path);
        out.analysis.hedges.push_back(h);
      }
    }
  }

  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    out.synth.state =
        cfg::value_or<std::string>(s, "state", "synth", out.synth.state);
    if (const auto d = cfg::date_value_opt(s, "start", "synth")) {
      out.synth.start = *d;
    }
    if (const auto d = cfg::date_value_opt(s, "end", "synth")) {
      out.synth.end = *d;
    }
    out.synth.kappa = cfg::value_or<double>(s, "kappa", "synth", 0.2);
    out.synth.sigma = cfg::value_or<double>(s, "sigma", "synth", 2.0);
    out.synth.seed = cfg::value_or<std::uint64_t>(s, "seed", "synth", 1);
    if (s.contains("seasonal")) {
      out.synth.seasonal = seasonal_from_json(s.at("seasonal"));
    }
    if (s.contains("jumps")) {
      out.synth.jumps = jumps_from_json(s.at("jumps"));
    }
  }

  out.output_dir = cfg::value_or<std::string>(j, "output_dir", "", "out");
  return out;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(Errc::config_error, "cannot open config file '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::config_error,
         "config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace tempopt
