// End-to-end walkthrough on generated data: build a synthetic temperature
// history, calibrate the model, simulate a winter, and price an HDD put
// with a small volatility sweep.

#include <cstdio>

#include "tempopt/analysis.hpp"
#include "tempopt/calibration.hpp"
#include "tempopt/ingest.hpp"
#include "tempopt/pricing.hpp"
#include "tempopt/simulation.hpp"
#include "tempopt/synthetic.hpp"

using namespace tempopt;

int main() {
  auto spec = default_synthetic_spec();
  spec.seed = 7;
  const auto history = generate_synthetic_series(spec);

  const auto [train, test] =
      split_train_test(history, Date::ymd(2021, 1, 1));
  const auto [model, diag] = calibrate_model(train);
  std::printf("calibrated %s: kappa=%.4f ar1=%.4f t_ref_hdd=%.2f t_ref_cdd=%.2f\n",
              model.state.c_str(), model.reversion.kappa,
              model.reversion.ar1_coeff, model.t_ref_hdd, model.t_ref_cdd);

  SimulationConfig sim;
  sim.start = Date::ymd(2024, 12, 1);
  sim.horizon = 120;
  sim.n_paths = 1000;
  sim.seed = 42;
  const auto paths = simulate_paths(model, sim);

  ContractSpec put;
  put.kind = ContractKind::hdd_put;
  put.strike = 90.89;
  put.tick = 1.0;
  put.window = {Date::ymd(2024, 12, 1), Date::ymd(2025, 2, 28)};
  put.maturity = Date::ymd(2025, 2, 28);
  put.rate = 0.05;
  put.ref_temp = model.t_ref_hdd;
  put.state = model.state;

  const auto result = price_contract(paths, put, sim.start);
  std::printf("hdd_put strike=%.2f price=%.4f se=%.4f mean_index=%.2f\n",
              put.strike, result.price, result.std_error, result.mean_index);

  const double scales[] = {0.8, 1.0, 1.2};
  const auto rows =
      volatility_sensitivity(model, put, scales, sim, sim.start);
  for (const auto& row : rows) {
    std::printf("vol scale %.1f -> price %.4f (%+.1f%%)\n", row.scale,
                row.price, row.pct_change);
  }
  return 0;
}
