#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dflsim/topology.hpp"

namespace dflsim {

/// Feature/label pairs with flat row-major feature storage.
struct LabeledDataset {
  std::vector<double> features;  // size() * feature_dim values
  std::vector<int> labels;
  int num_labels = 0;  // Y
  int feature_dim = 0;

  std::size_t size() const { return labels.size(); }

  std::span<const double> sample(std::size_t index) const {
    return std::span<const double>(features)
        .subspan(index * static_cast<std::size_t>(feature_dim),
                 static_cast<std::size_t>(feature_dim));
  }
};

/// Disjoint per-client lists of sample indices into a parent dataset.
struct ClientPartition {
  std::vector<std::vector<std::size_t>> assignment;  // indexed by client id
  double alpha = 0.0;

  int num_clients() const { return static_cast<int>(assignment.size()); }
};

/// Normalized per-label probability vector. A vector built from all-zero
/// counts carries empty_support = true and must not be used as a probability.
struct LabelDistribution {
  std::vector<double> probs;
  bool empty_support = false;

  friend bool operator==(const LabelDistribution&,
                         const LabelDistribution&) = default;
};

/// Splits sample indices among clients, one Dirichlet(alpha * 1_C) draw per
/// class, with largest-remainder rounding of the class quotas. Every sample
/// lands on exactly one client. Throws ConfigError on alpha <= 0 or
/// num_clients < 1.
ClientPartition dirichlet_partition(const std::vector<int>& labels,
                                    int num_labels, int num_clients,
                                    double alpha, std::mt19937_64& rng);

/// Per-label sample counts of one client's assignment. Throws
/// std::invalid_argument on an unknown client id.
std::vector<std::int64_t> label_histogram(const ClientPartition& partition,
                                          const LabeledDataset& dataset,
                                          ClientId client);

LabelDistribution normalize(const std::vector<std::int64_t>& counts);

}  // namespace dflsim
