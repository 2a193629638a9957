#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dflsim/config.hpp"
#include "dflsim/consensus.hpp"
#include "dflsim/dataset.hpp"
#include "dflsim/learning.hpp"
#include "dflsim/metrics.hpp"
#include "dflsim/mobility.hpp"
#include "dflsim/partition.hpp"
#include "dflsim/rng.hpp"
#include "dflsim/topology.hpp"

namespace dflsim {

/// Full mutable state of one Monte Carlo run.
struct World {
  SimulationConfig config;
  Grid grid;
  RunSeed seeds;
  int run_index = 0;

  const LabeledDataset* train = nullptr;
  const LabeledDataset* test = nullptr;

  std::vector<GridLocation> locations;  // by client id, post-move
  std::vector<GridLocation> initial_locations;
  ClientPartition partition;
  std::vector<std::int64_t> dataset_sizes;
  std::vector<std::vector<std::int64_t>> histograms;

  std::shared_ptr<const Trainer> trainer;
  ModelStack models;
  std::vector<OptimizerState> optimizers;

  std::vector<MobilityState> mobility;            // mobile clients only
  std::vector<LocationDistributionMap> dist_maps;  // parallel, DAM/DCM
  ClusterCenters centers;                          // DCM

  CommGraph graph;  // topology of the last completed phase
  int round = 0;
};

/// Datasets are built once per configuration (seeded from master_seed alone
/// for synthetic data) and shared across Monte Carlo runs.
LabeledDataset build_train_dataset(const SimulationConfig& config);
LabeledDataset build_test_dataset(const SimulationConfig& config);

World build_world(const SimulationConfig& config, int run_index,
                  const LabeledDataset& train, const LabeledDataset& test);

/// One global round: local updates, mobile movement, neighbor and mixing
/// recomputation on post-move locations, consensus averaging.
/// NumericalError from a trainer is annotated with (round, client).
void run_round(World& world, int round);

MetricsRecord evaluate_world(const World& world, int round);

/// Runs every Monte Carlo repetition of the config: a round-0 baseline
/// record per run plus one record every eval_every rounds.
std::vector<MetricsRecord> run_simulation(const SimulationConfig& config);

struct SweepResult {
  std::string axis;
  std::string value;
  bool ok = false;
  std::string error;  // set when the value was rejected
  std::vector<MetricsRecord> records;
};

/// One run_simulation per value with everything else held fixed. Invalid
/// values are reported in-place; the remaining values still run. Axis
/// "pattern" with value "static" forces num_mobile to 0.
std::vector<SweepResult> sweep(const SimulationConfig& base,
                               const std::string& axis,
                               const std::vector<std::string>& values);

struct ClusterReport {
  ClusterCenters centers;
  std::vector<std::vector<ClientId>> covered;  // static ids per center
};

/// Algorithm output of the greedy clustering for a config, without training.
ClusterReport cluster_report(const SimulationConfig& config,
                             int run_index = 0);

}  // namespace dflsim
