#pragma once

#include <stdexcept>
#include <string>

namespace dflsim {

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDatasetError = 3;
inline constexpr int kExitNumericalError = 4;

/// Invalid or inconsistent SimulationConfig (bad field, unknown key, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Dataset ingestion failure (missing file, bad magic, truncation, ...).
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite loss or gradient during training. The harness annotates the
/// failing (round, client) before letting it escape.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}

  int round = -1;
  int client = -1;

  std::string describe() const {
    std::string msg = what();
    if (round >= 0) msg += " (round " + std::to_string(round) + ")";
    if (client >= 0) msg += " (client " + std::to_string(client) + ")";
    return msg;
  }
};

}  // namespace dflsim
