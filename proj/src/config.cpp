#include "dflsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::string& where,
                         const std::set<std::string>& known) {
  for (const auto& item : object.items())
    if (!known.contains(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
T get_or(const json& object, const std::string& key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

MoveRadius parse_move_radius(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return MoveRadius::unbounded();
    throw ConfigError("move_radius: expected a number or \"inf\"");
  }
  if (!value.is_number())
    throw ConfigError("move_radius: expected a number or \"inf\"");
  return MoveRadius::bounded(value.get<double>());
}

TrainerConfig parse_trainer(const json& object) {
  reject_unknown_keys(object, "trainer",
                      {"kind", "learning_rate", "momentum", "weight_decay",
                       "batch_size", "hidden_width", "shared_init"});
  TrainerConfig trainer;
  trainer.kind = get_or<std::string>(object, "kind", trainer.kind);
  trainer.learning_rate =
      get_or<double>(object, "learning_rate", trainer.learning_rate);
  trainer.momentum = get_or<double>(object, "momentum", trainer.momentum);
  trainer.weight_decay =
      get_or<double>(object, "weight_decay", trainer.weight_decay);
  trainer.batch_size = get_or<int>(object, "batch_size", trainer.batch_size);
  trainer.hidden_width =
      get_or<int>(object, "hidden_width", trainer.hidden_width);
  trainer.shared_init = get_or<bool>(object, "shared_init", trainer.shared_init);
  return trainer;
}

DatasetConfig parse_dataset(const json& object) {
  reject_unknown_keys(object, "dataset",
                      {"kind", "num_classes", "per_class_train",
                       "per_class_test", "feature_dim", "spread",
                       "train_images", "train_labels", "test_images",
                       "test_labels"});
  DatasetConfig dataset;
  dataset.kind = get_or<std::string>(object, "kind", dataset.kind);
  dataset.num_classes = get_or<int>(object, "num_classes", dataset.num_classes);
  dataset.per_class_train =
      get_or<int>(object, "per_class_train", dataset.per_class_train);
  dataset.per_class_test =
      get_or<int>(object, "per_class_test", dataset.per_class_test);
  dataset.feature_dim = get_or<int>(object, "feature_dim", dataset.feature_dim);
  dataset.spread = get_or<double>(object, "spread", dataset.spread);
  dataset.train_images = get_or<std::string>(object, "train_images", "");
  dataset.train_labels = get_or<std::string>(object, "train_labels", "");
  dataset.test_images = get_or<std::string>(object, "test_images", "");
  dataset.test_labels = get_or<std::string>(object, "test_labels", "");
  return dataset;
}

}  // namespace

SimulationConfig parse_config(const std::string& json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(document, "config",
                      {"grid_size", "num_clients", "num_mobile", "comm_radius",
                       "move_radius", "pattern", "alpha", "rounds",
                       "eval_every", "monte_carlo_runs", "threads", "trainer",
                       "dataset", "master_seed"});

  SimulationConfig config;
  config.grid_size = get_or<int>(document, "grid_size", config.grid_size);
  config.num_clients = get_or<int>(document, "num_clients", config.num_clients);
  config.num_mobile = get_or<int>(document, "num_mobile", config.num_mobile);
  config.comm_radius = get_or<double>(document, "comm_radius", config.comm_radius);
  if (document.contains("move_radius"))
    config.move_radius = parse_move_radius(document.at("move_radius"));
  if (document.contains("pattern"))
    config.pattern =
        pattern_from_string(document.at("pattern").get<std::string>());
  config.alpha = get_or<double>(document, "alpha", config.alpha);
  config.rounds = get_or<int>(document, "rounds", config.rounds);
  config.eval_every = get_or<int>(document, "eval_every", config.eval_every);
  config.monte_carlo_runs =
      get_or<int>(document, "monte_carlo_runs", config.monte_carlo_runs);
  config.threads = get_or<int>(document, "threads", config.threads);
  if (document.contains("trainer"))
    config.trainer = parse_trainer(document.at("trainer"));
  if (document.contains("dataset"))
    config.dataset = parse_dataset(document.at("dataset"));
  config.master_seed =
      get_or<std::uint64_t>(document, "master_seed", config.master_seed);

  validate(config);
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const SimulationConfig& config) {
  if (config.grid_size < 1) throw ConfigError("grid_size must be >= 1");
  if (config.num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (config.num_mobile < 0 || config.num_mobile > config.num_clients)
    throw ConfigError("num_mobile must lie in 0..num_clients");
  if (!(config.comm_radius > 0.0)) throw ConfigError("comm_radius must be > 0");
  if (config.pattern == MobilityPattern::Static && config.num_mobile > 0)
    throw ConfigError("pattern \"static\" requires num_mobile = 0");
  if (config.pattern == MobilityPattern::Dcm &&
      config.num_mobile == config.num_clients)
    throw ConfigError("pattern \"dcm\" needs at least one static client");
  if (!(config.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (config.rounds < 1) throw ConfigError("rounds must be >= 1");
  if (config.eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (config.monte_carlo_runs < 1)
    throw ConfigError("monte_carlo_runs must be >= 1");
  if (config.threads < 1) throw ConfigError("threads must be >= 1");

  const TrainerConfig& trainer = config.trainer;
  if (trainer.kind != "logistic" && trainer.kind != "mlp")
    throw ConfigError("trainer.kind must be logistic or mlp");
  if (!(trainer.learning_rate >= 0.0))
    throw ConfigError("trainer.learning_rate must be >= 0");
  if (trainer.momentum < 0.0 || trainer.momentum >= 1.0)
    throw ConfigError("trainer.momentum must lie in [0, 1)");
  if (trainer.weight_decay < 0.0)
    throw ConfigError("trainer.weight_decay must be >= 0");
  if (trainer.batch_size < 0)
    throw ConfigError("trainer.batch_size must be >= 0 (0 = full batch)");
  if (trainer.kind == "mlp" && trainer.hidden_width < 1)
    throw ConfigError("trainer.hidden_width must be >= 1 for mlp");

  const DatasetConfig& dataset = config.dataset;
  if (dataset.kind == "synthetic-blobs") {
    if (dataset.num_classes < 2)
      throw ConfigError("dataset.num_classes must be >= 2");
    if (dataset.per_class_train < 1 || dataset.per_class_test < 1)
      throw ConfigError("dataset per-class counts must be >= 1");
    if (dataset.feature_dim < 1)
      throw ConfigError("dataset.feature_dim must be >= 1");
    if (!(dataset.spread >= 0.0))
      throw ConfigError("dataset.spread must be >= 0");
  } else if (dataset.kind == "idx-files") {
    if (dataset.train_images.empty() || dataset.train_labels.empty() ||
        dataset.test_images.empty() || dataset.test_labels.empty())
      throw ConfigError(
          "dataset.kind idx-files requires train_images, train_labels, "
          "test_images, test_labels");
  } else {
    throw ConfigError("dataset.kind must be synthetic-blobs or idx-files");
  }
}

}  // namespace dflsim
