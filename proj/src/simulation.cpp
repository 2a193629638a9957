#include "dflsim/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <numeric>
#include <stdexcept>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

ModelShape shape_for(const SimulationConfig& config,
                     const LabeledDataset& train) {
  ModelShape shape;
  shape.input_dim = train.feature_dim;
  shape.num_classes = train.num_labels;
  shape.hidden_width =
      config.trainer.kind == "mlp" ? config.trainer.hidden_width : 0;
  return shape;
}

StaticClientInfo collect_static_info(const World& world) {
  StaticClientInfo info;
  for (ClientId id = 0; id < world.config.num_clients; ++id) {
    if (world.config.is_mobile(id)) continue;
    info.ids.push_back(id);
    info.locations.push_back(world.initial_locations[id]);
    info.histograms.push_back(world.histograms[id]);
  }
  return info;
}

std::vector<std::size_t> select_batch(const World& world, ClientId client,
                                      int round) {
  const auto& indices = world.partition.assignment[client];
  const int batch_size = world.config.trainer.batch_size;
  if (batch_size == 0 ||
      static_cast<std::size_t>(batch_size) >= indices.size())
    return indices;
  auto rng = world.seeds.stream("batching", static_cast<std::uint64_t>(client),
                                static_cast<std::uint64_t>(round));
  std::vector<std::size_t> pool = indices;
  std::vector<std::size_t> batch(batch_size);
  for (int k = 0; k < batch_size; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
    batch[k] = pool[k];
  }
  return batch;
}

void local_updates(World& world, int round) {
  const int count = world.config.num_clients;
  auto update_range = [&](int begin, int end) {
    for (ClientId client = begin; client < end; ++client) {
      if (world.partition.assignment[client].empty()) continue;
      const auto batch = select_batch(world, client, round);
      try {
        local_update(world.models.models[client], world.optimizers[client],
                     *world.trainer, *world.train, batch);
      } catch (NumericalError& e) {
        e.round = round;
        e.client = client;
        throw;
      }
    }
  };

  const int threads = std::min(world.config.threads, count);
  if (threads <= 1) {
    update_range(0, count);
    return;
  }
  // Clients are independent within a round: disjoint buffers, per-client
  // RNG substreams, so the parallel schedule reproduces the serial one.
  std::vector<std::future<void>> tasks;
  const int chunk = (count + threads - 1) / threads;
  for (int begin = 0; begin < count; begin += chunk)
    tasks.push_back(std::async(std::launch::async, update_range, begin,
                               std::min(begin + chunk, count)));
  for (auto& task : tasks) task.get();
}

}  // namespace

LabeledDataset build_train_dataset(const SimulationConfig& config) {
  if (config.dataset.kind == "idx-files")
    return load_idx(config.dataset.train_images, config.dataset.train_labels);
  std::mt19937_64 rng(derive_seed(config.master_seed, "synth-train"));
  return synth_blobs(config.dataset.num_classes, config.dataset.per_class_train,
                     config.dataset.feature_dim, config.dataset.spread, rng);
}

LabeledDataset build_test_dataset(const SimulationConfig& config) {
  if (config.dataset.kind == "idx-files")
    return load_idx(config.dataset.test_images, config.dataset.test_labels);
  std::mt19937_64 rng(derive_seed(config.master_seed, "synth-test"));
  return synth_blobs(config.dataset.num_classes, config.dataset.per_class_test,
                     config.dataset.feature_dim, config.dataset.spread, rng);
}

World build_world(const SimulationConfig& config, int run_index,
                  const LabeledDataset& train, const LabeledDataset& test) {
  validate(config);
  World world{config, Grid(config.grid_size),
              RunSeed(config.master_seed, static_cast<std::uint64_t>(run_index))};
  world.run_index = run_index;
  world.train = &train;
  world.test = &test;

  const int count = config.num_clients;

  {
    auto rng = world.seeds.stream("locations");
    std::uniform_int_distribution<int> coordinate(1, config.grid_size);
    world.locations.reserve(count);
    for (ClientId id = 0; id < count; ++id) {
      const int p = coordinate(rng);
      const int q = coordinate(rng);
      world.locations.push_back({p, q});
    }
    world.initial_locations = world.locations;
  }

  {
    auto rng = world.seeds.stream("partition");
    world.partition = dirichlet_partition(train.labels, train.num_labels,
                                          count, config.alpha, rng);
  }
  world.dataset_sizes.reserve(count);
  world.histograms.reserve(count);
  for (ClientId id = 0; id < count; ++id) {
    world.dataset_sizes.push_back(
        static_cast<std::int64_t>(world.partition.assignment[id].size()));
    world.histograms.push_back(label_histogram(world.partition, train, id));
  }

  world.trainer = make_trainer(shape_for(config, train));
  {
    auto rng = world.seeds.stream("model-init");
    world.models.models.reserve(count);
    if (config.trainer.shared_init) {
      const auto shared = init_model(*world.trainer, rng);
      world.models.models.assign(count, shared);
    } else {
      for (ClientId id = 0; id < count; ++id)
        world.models.models.push_back(init_model(*world.trainer, rng));
    }
  }
  OptimizerState opt;
  opt.momentum.assign(world.trainer->param_count(), 0.0);
  opt.learning_rate = config.trainer.learning_rate;
  opt.momentum_coef = config.trainer.momentum;
  opt.weight_decay = config.trainer.weight_decay;
  world.optimizers.assign(count, opt);

  const StaticClientInfo statics = collect_static_info(world);
  if (config.pattern == MobilityPattern::Dcm) {
    auto rng = world.seeds.stream("clustering");
    world.centers = cluster_centers(statics, config.comm_radius, world.grid, rng);
  }
  for (ClientId id = 0; id < config.num_mobile; ++id) {
    MobilityState state;
    state.client = id;
    state.current = world.locations[id];
    state.pattern = config.pattern;
    state.move_radius = config.move_radius;
    world.mobility.push_back(std::move(state));
    if (config.pattern == MobilityPattern::Dam) {
      world.dist_maps.emplace_back(id, world.grid.all_locations(), statics,
                                   world.histograms[id], config.comm_radius);
    } else if (config.pattern == MobilityPattern::Dcm) {
      world.dist_maps.emplace_back(id, world.centers.centers, statics,
                                   world.histograms[id], config.comm_radius);
    }
  }

  world.graph = build_comm_graph(world.locations, config.comm_radius, 0);
  world.round = 0;
  return world;
}

void run_round(World& world, int round) {
  local_updates(world, round);

  advance_round(world.mobility, world.grid, world.dist_maps, world.seeds,
                round);
  for (const MobilityState& state : world.mobility)
    world.locations[state.client] = state.current;

  world.graph = build_comm_graph(world.locations, world.config.comm_radius,
                                 round);
  const MixingMatrix mixing =
      mixing_matrix(world.graph, world.dataset_sizes, round);
  world.models = consensus_update(world.models, mixing);
  world.round = round;
}

MetricsRecord evaluate_world(const World& world, int round) {
  MetricsRecord record;
  record.run = world.run_index;
  record.round = round;
  record.per_client_accuracy.reserve(world.config.num_clients);
  for (ClientId id = 0; id < world.config.num_clients; ++id)
    record.per_client_accuracy.push_back(
        evaluate(*world.trainer, world.models.models[id], *world.test));
  record.mean_accuracy =
      std::accumulate(record.per_client_accuracy.begin(),
                      record.per_client_accuracy.end(), 0.0) /
      static_cast<double>(world.config.num_clients);
  record.contraction = consensus_contraction_metric(world.models);
  record.components =
      static_cast<int>(connected_components(world.graph).size());
  for (const MobilityState& state : world.mobility)
    record.mobile_locations.emplace_back(state.client, state.current);
  return record;
}

std::vector<MetricsRecord> run_simulation(const SimulationConfig& config) {
  validate(config);
  const LabeledDataset train = build_train_dataset(config);
  const LabeledDataset test = build_test_dataset(config);

  std::vector<MetricsRecord> records;
  for (int run = 0; run < config.monte_carlo_runs; ++run) {
    World world = build_world(config, run, train, test);
    records.push_back(evaluate_world(world, 0));
    for (int round = 1; round <= config.rounds; ++round) {
      run_round(world, round);
      if (round % config.eval_every == 0)
        records.push_back(evaluate_world(world, round));
    }
  }
  return records;
}

namespace {

int parse_int_value(const std::string& text) {
  int value = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
    throw ConfigError("expected an integer, got '" + text + "'");
  return value;
}

double parse_double_value(const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
}

SimulationConfig apply_axis_value(const SimulationConfig& base,
                                  const std::string& axis,
                                  const std::string& value) {
  SimulationConfig config = base;
  if (axis == "num_mobile") {
    config.num_mobile = parse_int_value(value);
  } else if (axis == "comm_radius") {
    config.comm_radius = parse_double_value(value);
  } else if (axis == "move_radius") {
    config.move_radius = value == "inf"
                             ? MoveRadius::unbounded()
                             : MoveRadius::bounded(parse_double_value(value));
  } else if (axis == "alpha") {
    config.alpha = parse_double_value(value);
  } else if (axis == "pattern") {
    config.pattern = pattern_from_string(value);
    if (config.pattern == MobilityPattern::Static) config.num_mobile = 0;
  } else {
    throw ConfigError("unknown sweep axis '" + axis +
                      "' (expected num_mobile|comm_radius|move_radius|alpha|"
                      "pattern)");
  }
  validate(config);
  return config;
}

}  // namespace

std::vector<SweepResult> sweep(const SimulationConfig& base,
                               const std::string& axis,
                               const std::vector<std::string>& values) {
  std::vector<SweepResult> results;
  for (const std::string& value : values) {
    SweepResult result;
    result.axis = axis;
    result.value = value;
    try {
      const SimulationConfig config = apply_axis_value(base, axis, value);
      result.records = run_simulation(config);
      result.ok = true;
    } catch (const ConfigError& e) {
      if (axis != "num_mobile" && axis != "comm_radius" &&
          axis != "move_radius" && axis != "alpha" && axis != "pattern")
        throw;  // unknown axis aborts the whole sweep
      result.ok = false;
      result.error = e.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

ClusterReport cluster_report(const SimulationConfig& config, int run_index) {
  validate(config);
  const LabeledDataset train = build_train_dataset(config);
  const LabeledDataset test = build_test_dataset(config);
  const World world = build_world(config, run_index, train, test);
  const StaticClientInfo statics = collect_static_info(world);
  if (statics.count() == 0)
    throw ConfigError("cluster report requires at least one static client");

  ClusterReport report;
  auto rng = world.seeds.stream("clustering");
  report.centers =
      cluster_centers(statics, config.comm_radius, world.grid, rng);

  std::vector<bool> assigned(statics.count(), false);
  for (GridLocation center : report.centers.centers) {
    std::vector<ClientId> covered;
    for (std::size_t s = 0; s < statics.count(); ++s) {
      if (!assigned[s] &&
          within_radius(center, statics.locations[s], config.comm_radius)) {
        assigned[s] = true;
        covered.push_back(statics.ids[s]);
      }
    }
    report.covered.push_back(std::move(covered));
  }
  return report;
}

}  // namespace dflsim
