#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dflsim/errors.hpp"
#include "dflsim/metrics.hpp"
#include "dflsim/simulation.hpp"

namespace {

using namespace dflsim;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

SimulationConfig load_with_overrides(const CommonOptions& options) {
  SimulationConfig config = load_config(options.config_path);
  if (options.seed_set) {
    config.master_seed = options.seed;
    validate(config);
  }
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& options, bool with_output) {
  cmd->add_option("--config", options.config_path, "Simulation config (JSON)")
      ->required();
  cmd->add_option("--seed", options.seed, "Override master_seed")
      ->trigger_on_parse()
      ->each([&options](const std::string&) { options.seed_set = true; });
  if (with_output) {
    cmd->add_option("--out", options.out_path, "Output path");
    cmd->add_option("--format", options.format, "Metrics format: csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
  }
}

void emit(const std::vector<MetricsRecord>& records,
          const CommonOptions& options) {
  const MetricsFormat format = metrics_format_from_string(options.format);
  if (options.out_path.empty())
    write_metrics(records, std::cout, format);
  else
    write_metrics(records, options.out_path, format);
}

// Filesystem-safe sweep point suffix.
std::string sanitize(const std::string& value) {
  std::string out = value;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-')
      c = '_';
  return out;
}

int run_command(const CommonOptions& options) {
  const SimulationConfig config = load_with_overrides(options);
  emit(run_simulation(config), options);
  return kExitOk;
}

int sweep_command(const CommonOptions& options, const std::string& axis,
                  const std::vector<std::string>& values) {
  const SimulationConfig base = load_with_overrides(options);
  const auto results = sweep(base, axis, values);
  int rejected = 0;
  for (const auto& result : results) {
    if (!result.ok) {
      std::cerr << "sweep point " << axis << "=" << result.value
                << " rejected: " << result.error << "\n";
      ++rejected;
      continue;
    }
    CommonOptions point = options;
    if (!options.out_path.empty()) {
      const std::filesystem::path path(options.out_path);
      std::filesystem::path keyed = path;
      keyed.replace_filename(path.stem().string() + "_" + axis + "=" +
                             sanitize(result.value) +
                             path.extension().string());
      point.out_path = keyed.string();
    } else {
      std::cout << "# " << axis << "=" << result.value << "\n";
    }
    emit(result.records, point);
  }
  return rejected == static_cast<int>(results.size()) && !results.empty()
             ? kExitConfigError
             : kExitOk;
}

int aggregate_command(const std::vector<std::string>& inputs,
                      const std::string& out_path) {
  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  if (out_path.empty()) {
    write_aggregate_csv(paths, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DatasetError("cannot open output file " + out_path);
    write_aggregate_csv(paths, out);
  }
  return kExitOk;
}

int cluster_report_command(const CommonOptions& options) {
  const SimulationConfig config = load_with_overrides(options);
  const ClusterReport report = cluster_report(config);
  std::cout << "centers: " << report.centers.centers.size() << "\n";
  for (std::size_t n = 0; n < report.centers.centers.size(); ++n) {
    const GridLocation center = report.centers.centers[n];
    std::cout << "center " << n << ": (" << center.p << "," << center.q
              << ") covers static clients";
    for (ClientId id : report.covered[n]) std::cout << ' ' << id;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized federated learning mobility simulator"};
  app.require_subcommand(1);

  CommonOptions run_options;
  CLI::App* run = app.add_subcommand("run", "Run one configuration");
  add_common(run, run_options, true);

  CommonOptions sweep_options;
  std::string axis;
  std::vector<std::string> values;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run one configuration across axis values");
  add_common(sweep_cmd, sweep_options, true);
  sweep_cmd->add_option("--axis", axis,
                        "num_mobile|comm_radius|move_radius|alpha|pattern")
      ->required();
  sweep_cmd->add_option("--values", values, "Axis values")
      ->required()
      ->delimiter(',');

  std::vector<std::string> aggregate_inputs;
  std::string aggregate_out;
  CLI::App* aggregate =
      app.add_subcommand("aggregate", "Summarize metrics files");
  aggregate->add_option("files", aggregate_inputs, "Metrics files")
      ->required();
  aggregate->add_option("--out", aggregate_out, "Summary CSV path");

  CommonOptions cluster_options;
  CLI::App* cluster = app.add_subcommand(
      "cluster-report", "Print greedy cluster centers for a config");
  add_common(cluster, cluster_options, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(run_options);
    if (sweep_cmd->parsed()) return sweep_command(sweep_options, axis, values);
    if (aggregate->parsed())
      return aggregate_command(aggregate_inputs, aggregate_out);
    if (cluster->parsed()) return cluster_report_command(cluster_options);
  } catch (const dflsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dflsim::kExitConfigError;
  } catch (const dflsim::DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return dflsim::kExitDatasetError;
  } catch (dflsim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.describe() << "\n";
    return dflsim::kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
