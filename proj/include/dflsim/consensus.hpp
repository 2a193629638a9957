#pragma once

#include <cstdint>
#include <vector>

#include "dflsim/topology.hpp"

namespace dflsim {

/// Row-stochastic C x C weight matrix W^(t). Entry (i,j) is nonzero only for
/// j in N_i union {i}.
struct MixingMatrix {
  int round = 0;
  int size = 0;
  std::vector<double> weights;  // row-major size x size

  double at(ClientId i, ClientId j) const {
    return weights[static_cast<std::size_t>(i) * size + j];
  }
};

/// One parameter vector per client, all sharing dimensionality d.
struct ModelStack {
  std::vector<std::vector<double>> models;

  std::size_t client_count() const { return models.size(); }
  std::size_t dim() const { return models.empty() ? 0 : models[0].size(); }
};

/// FedAvg-weighted mixing: w[i][j] = |D_j| / (|D_i| + sum_{k in N_i} |D_k|)
/// for j in N_i union {i}, else 0. A client whose own and neighbor datasets
/// are all empty keeps its model (w[i][i] = 1). Throws std::invalid_argument
/// on an asymmetric neighbor relation or a size-count mismatch.
MixingMatrix mixing_matrix(const CommGraph& graph,
                           const std::vector<std::int64_t>& dataset_sizes,
                           int round = 0);

/// x_i <- sum_j w[i][j] x_j. Throws std::invalid_argument on client-count or
/// dimensionality mismatch.
ModelStack consensus_update(const ModelStack& models, const MixingMatrix& w);

/// Mean squared deviation of client models from their average:
/// (1/C) * sum_i ||x_i - mean||^2. Zero iff all models are equal.
double consensus_contraction_metric(const ModelStack& models);

}  // namespace dflsim
