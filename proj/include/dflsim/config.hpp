#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dflsim/mobility.hpp"

namespace dflsim {

struct TrainerConfig {
  std::string kind = "logistic";  // logistic | mlp
  double learning_rate = 0.3;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  int batch_size = 0;  // 0 = full batch
  int hidden_width = 32;
  bool shared_init = true;
};

struct DatasetConfig {
  std::string kind = "synthetic-blobs";  // synthetic-blobs | idx-files
  // synthetic-blobs
  int num_classes = 10;
  int per_class_train = 200;
  int per_class_test = 100;
  int feature_dim = 10;
  double spread = 0.3;
  // idx-files
  std::string train_images, train_labels, test_images, test_labels;
};

/// Full experiment description. Parsed from a single JSON document; every
/// invariant is checked before any compute starts.
struct SimulationConfig {
  int grid_size = 18;
  int num_clients = 20;
  int num_mobile = 0;
  double comm_radius = 3.0;
  MoveRadius move_radius = MoveRadius::unbounded();
  MobilityPattern pattern = MobilityPattern::Static;
  double alpha = 0.05;
  int rounds = 100;
  int eval_every = 10;
  int monte_carlo_runs = 1;
  int threads = 1;
  TrainerConfig trainer;
  DatasetConfig dataset;
  std::uint64_t master_seed = 0;

  /// Mobile clients are the first num_mobile ids; the rest are static.
  bool is_mobile(ClientId id) const { return id < num_mobile; }
};

/// Throws ConfigError on any schema or invariant violation.
SimulationConfig parse_config(const std::string& json_text);
SimulationConfig load_config(const std::filesystem::path& path);
void validate(const SimulationConfig& config);

}  // namespace dflsim
