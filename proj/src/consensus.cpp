#include "dflsim/consensus.hpp"

#include <stdexcept>
#include <string>

namespace dflsim {

MixingMatrix mixing_matrix(const CommGraph& graph,
                           const std::vector<std::int64_t>& dataset_sizes,
                           int round) {
  const int count = static_cast<int>(graph.client_count());
  if (dataset_sizes.size() != graph.client_count())
    throw std::invalid_argument(
        "mixing_matrix: dataset size count does not match client count");
  for (ClientId i = 0; i < count; ++i) {
    for (ClientId j : graph.adjacency[i]) {
      if (j < 0 || j >= count || j == i || !graph.has_edge(j, i))
        throw std::invalid_argument(
            "mixing_matrix: asymmetric neighbor relation at clients " +
            std::to_string(i) + "," + std::to_string(j));
    }
  }

  MixingMatrix w;
  w.round = round;
  w.size = count;
  w.weights.assign(static_cast<std::size_t>(count) * count, 0.0);
  for (ClientId i = 0; i < count; ++i) {
    std::int64_t denominator = dataset_sizes[i];
    for (ClientId k : graph.adjacency[i]) denominator += dataset_sizes[k];
    auto row = w.weights.begin() + static_cast<std::size_t>(i) * count;
    if (denominator <= 0) {
      row[i] = 1.0;  // client and every neighbor hold no data
      continue;
    }
    row[i] = static_cast<double>(dataset_sizes[i]) /
             static_cast<double>(denominator);
    for (ClientId j : graph.adjacency[i])
      row[j] = static_cast<double>(dataset_sizes[j]) /
               static_cast<double>(denominator);
  }
  return w;
}

ModelStack consensus_update(const ModelStack& models, const MixingMatrix& w) {
  const int count = static_cast<int>(models.client_count());
  if (w.size != count)
    throw std::invalid_argument(
        "consensus_update: mixing matrix size does not match client count");
  const std::size_t dim = models.dim();
  for (const auto& model : models.models)
    if (model.size() != dim)
      throw std::invalid_argument(
          "consensus_update: inconsistent model dimensionality");

  ModelStack mixed;
  mixed.models.assign(count, std::vector<double>(dim, 0.0));
  for (ClientId i = 0; i < count; ++i) {
    auto& out = mixed.models[i];
    for (ClientId j = 0; j < count; ++j) {
      const double weight = w.at(i, j);
      if (weight == 0.0) continue;
      const auto& in = models.models[j];
      for (std::size_t k = 0; k < dim; ++k) out[k] += weight * in[k];
    }
  }
  return mixed;
}

double consensus_contraction_metric(const ModelStack& models) {
  const std::size_t count = models.client_count();
  if (count == 0)
    throw std::invalid_argument(
        "consensus_contraction_metric: at least one client required");
  const std::size_t dim = models.dim();
  std::vector<double> mean(dim, 0.0);
  for (const auto& model : models.models)
    for (std::size_t k = 0; k < dim; ++k) mean[k] += model[k];
  for (double& value : mean) value /= static_cast<double>(count);

  double total = 0.0;
  for (const auto& model : models.models) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = model[k] - mean[k];
      total += diff * diff;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace dflsim
