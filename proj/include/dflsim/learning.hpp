#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dflsim/partition.hpp"

namespace dflsim {

/// Layer shape description; hidden_width 0 selects plain multinomial
/// logistic regression, > 0 a one-hidden-layer tanh MLP.
struct ModelShape {
  int input_dim = 0;
  int num_classes = 0;
  int hidden_width = 0;
};

/// Loss/gradient/prediction over a flat parameter vector.
class Trainer {
 public:
  virtual ~Trainer() = default;

  virtual std::size_t param_count() const = 0;
  virtual const ModelShape& shape() const = 0;

  /// Mean cross-entropy over the batch and its analytic gradient, written to
  /// `grad` (size param_count). Throws NumericalError on a non-finite loss
  /// or gradient entry.
  virtual double loss_and_gradient(std::span<const double> params,
                                   const LabeledDataset& data,
                                   std::span<const std::size_t> batch,
                                   std::span<double> grad) const = 0;

  virtual int predict(std::span<const double> params,
                      std::span<const double> features) const = 0;

  /// 1 for bias entries, 0 for weights; weight decay skips biases.
  virtual const std::vector<std::uint8_t>& bias_mask() const = 0;
};

std::unique_ptr<Trainer> make_trainer(const ModelShape& shape);

/// Momentum buffer plus the hyperparameters of the local SGD step.
struct OptimizerState {
  std::vector<double> momentum;
  double learning_rate = 0.0;
  double momentum_coef = 0.0;
  double weight_decay = 0.0;
};

/// One SGD step: m <- mu * m + (g + lambda * x), x <- x - eta * m, with
/// weight decay applied to weights only. At mu = lambda = 0 this is the
/// plain step x <- x - eta * g.
void local_update(std::span<double> params, OptimizerState& opt,
                  const Trainer& trainer, const LabeledDataset& data,
                  std::span<const std::size_t> batch);

/// Fraction of argmax-correct predictions; logit ties resolve to the lowest
/// class index.
double evaluate(const Trainer& trainer, std::span<const double> params,
                const LabeledDataset& test);

/// Fan-in-scaled symmetric uniform weights, zero biases.
std::vector<double> init_model(const Trainer& trainer, std::mt19937_64& rng);

}  // namespace dflsim
