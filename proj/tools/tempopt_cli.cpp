// Command-line front end: ingest -> calibrate -> simulate -> price ->
// sensitivity / hedge / validate, driven by a JSON run configuration.
// Exit codes: 0 success, 1 runtime failure, 2 config/validation failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempopt/config.hpp"
#include "tempopt/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tempopt - temperature derivative pricing engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string states_csv;
  std::optional<std::uint64_t> seed;
  bool dump_paths = false;

  app.add_option("--config", config_path, "Path to the JSON run config")
      ->required();
  app.add_option("--out", out_dir, "Override the configured output directory");
  app.add_option("--states", states_csv,
                 "Comma-separated subset of configured states");
  app.add_option("--seed", seed, "Override the simulation seed");
  app.add_flag("--dump-paths", dump_paths,
               "Write simulated paths as CSV (simulate command)");

  for (const char* name : {"ingest", "calibrate", "simulate", "price",
                           "sensitivity", "hedge", "validate", "synth"}) {
    app.add_subcommand(name)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto config = tempopt::load_run_config(config_path);
    tempopt::PipelineOptions options;
    options.dump_paths = dump_paths;
    if (seed) options.seed_override = *seed;
    if (!out_dir.empty()) options.out_override = out_dir;
    if (!states_csv.empty()) {
      std::size_t begin = 0;
      while (begin <= states_csv.size()) {
        const auto comma = states_csv.find(',', begin);
        const auto end =
            comma == std::string::npos ? states_csv.size() : comma;
        if (end > begin) {
          options.state_filter.push_back(
              states_csv.substr(begin, end - begin));
        }
        if (comma == std::string::npos) break;
        begin = comma + 1;
      }
    }
    return tempopt::run_command(command, config, options, std::cout);
  } catch (const tempopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == tempopt::Errc::config_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
