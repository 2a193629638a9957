#include "dflsim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

// Dirichlet(alpha * 1_C) via normalized Gamma(alpha, 1) draws.
std::vector<double> dirichlet_draw(int count, double alpha,
                                   std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> draw(count);
  double total = 0.0;
  for (double& value : draw) {
    value = gamma(rng);
    total += value;
  }
  if (total <= 0.0) {
    // All draws underflowed to zero (possible at tiny alpha); fall back to
    // an even split rather than dividing by zero.
    std::fill(draw.begin(), draw.end(), 1.0 / count);
    return draw;
  }
  for (double& value : draw) value /= total;
  return draw;
}

// Integer counts summing to total, proportional to `proportions`, rounded by
// largest remainder. Ties go to the lower client id.
std::vector<std::size_t> largest_remainder_counts(
    const std::vector<double>& proportions, std::size_t total) {
  const int count = static_cast<int>(proportions.size());
  std::vector<std::size_t> result(count, 0);
  std::vector<std::pair<double, int>> remainders;
  remainders.reserve(count);
  std::size_t assigned = 0;
  for (int i = 0; i < count; ++i) {
    const double quota = proportions[i] * static_cast<double>(total);
    const double base = std::floor(quota);
    result[i] = static_cast<std::size_t>(base);
    assigned += result[i];
    remainders.emplace_back(quota - base, i);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned)
    ++result[remainders[k % remainders.size()].second];
  return result;
}

}  // namespace

ClientPartition dirichlet_partition(const std::vector<int>& labels,
                                    int num_labels, int num_clients,
                                    double alpha, std::mt19937_64& rng) {
  if (!(alpha > 0.0))
    throw ConfigError("dirichlet_partition: alpha must be > 0");
  if (num_clients < 1)
    throw ConfigError("dirichlet_partition: num_clients must be >= 1");
  if (labels.empty())
    throw ConfigError("dirichlet_partition: labels must be nonempty");

  std::vector<std::vector<std::size_t>> by_class(num_labels);
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const int label = labels[n];
    if (label < 0 || label >= num_labels)
      throw ConfigError("dirichlet_partition: label " + std::to_string(label) +
                        " outside 0.." + std::to_string(num_labels - 1));
    by_class[label].push_back(n);
  }

  ClientPartition partition;
  partition.alpha = alpha;
  partition.assignment.resize(num_clients);
  for (int label = 0; label < num_labels; ++label) {
    const auto& indices = by_class[label];
    if (indices.empty()) continue;
    const auto proportions = dirichlet_draw(num_clients, alpha, rng);
    const auto counts = largest_remainder_counts(proportions, indices.size());
    std::size_t offset = 0;
    for (int client = 0; client < num_clients; ++client) {
      auto& list = partition.assignment[client];
      list.insert(list.end(), indices.begin() + offset,
                  indices.begin() + offset + counts[client]);
      offset += counts[client];
    }
  }
  return partition;
}

std::vector<std::int64_t> label_histogram(const ClientPartition& partition,
                                          const LabeledDataset& dataset,
                                          ClientId client) {
  if (client < 0 || client >= partition.num_clients())
    throw std::invalid_argument("label_histogram: unknown client id " +
                                std::to_string(client));
  std::vector<std::int64_t> counts(dataset.num_labels, 0);
  for (std::size_t index : partition.assignment[client])
    ++counts[dataset.labels.at(index)];
  return counts;
}

LabelDistribution normalize(const std::vector<std::int64_t>& counts) {
  LabelDistribution distribution;
  distribution.probs.assign(counts.size(), 0.0);
  const std::int64_t total =
      std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total <= 0) {
    distribution.empty_support = true;
    return distribution;
  }
  for (std::size_t l = 0; l < counts.size(); ++l)
    distribution.probs[l] =
        static_cast<double>(counts[l]) / static_cast<double>(total);
  return distribution;
}

}  // namespace dflsim
