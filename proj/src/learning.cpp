#include "dflsim/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

// Softmax probabilities from logits, max-shifted for stability.
void softmax(std::span<const double> logits, std::span<double> probs) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    probs[c] = std::exp(logits[c] - peak);
    total += probs[c];
  }
  for (std::size_t c = 0; c < logits.size(); ++c) probs[c] /= total;
}

int argmax_lowest_tie(std::span<const double> values) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(values.size()); ++c)
    if (values[c] > values[best]) best = c;
  return best;
}

void check_finite(double loss, std::span<const double> grad) {
  if (!std::isfinite(loss)) throw NumericalError("non-finite training loss");
  for (double g : grad)
    if (!std::isfinite(g)) throw NumericalError("non-finite gradient entry");
}

void check_batch(const LabeledDataset& data, std::span<const std::size_t> batch,
                 int input_dim) {
  if (batch.empty())
    throw std::invalid_argument("loss_and_gradient: empty batch");
  if (data.feature_dim != input_dim)
    throw std::invalid_argument(
        "loss_and_gradient: feature dimensionality does not match model");
}

class LogisticTrainer final : public Trainer {
 public:
  explicit LogisticTrainer(const ModelShape& shape) : shape_(shape) {
    const std::size_t features = static_cast<std::size_t>(shape.input_dim);
    const std::size_t classes = static_cast<std::size_t>(shape.num_classes);
    param_count_ = classes * features + classes;
    bias_mask_.assign(param_count_, 0);
    std::fill(bias_mask_.begin() + classes * features, bias_mask_.end(), 1);
  }

  std::size_t param_count() const override { return param_count_; }
  const ModelShape& shape() const override { return shape_; }
  const std::vector<std::uint8_t>& bias_mask() const override {
    return bias_mask_;
  }

  double loss_and_gradient(std::span<const double> params,
                           const LabeledDataset& data,
                           std::span<const std::size_t> batch,
                           std::span<double> grad) const override {
    check_batch(data, batch, shape_.input_dim);
    const int features = shape_.input_dim;
    const int classes = shape_.num_classes;
    const auto weights = params.first(static_cast<std::size_t>(classes) * features);
    const auto biases = params.subspan(weights.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    auto grad_w = grad.first(weights.size());
    auto grad_b = grad.subspan(weights.size());

    std::vector<double> logits(classes), probs(classes);
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (std::size_t index : batch) {
      const auto x = data.sample(index);
      const int label = data.labels[index];
      for (int c = 0; c < classes; ++c) {
        double z = biases[c];
        const double* row = &weights[static_cast<std::size_t>(c) * features];
        for (int f = 0; f < features; ++f) z += row[f] * x[f];
        logits[c] = z;
      }
      softmax(logits, probs);
      loss -= scale * std::log(std::max(probs[label], 1e-300));
      for (int c = 0; c < classes; ++c) {
        const double delta = scale * (probs[c] - (c == label ? 1.0 : 0.0));
        grad_b[c] += delta;
        double* row = &grad_w[static_cast<std::size_t>(c) * features];
        for (int f = 0; f < features; ++f) row[f] += delta * x[f];
      }
    }
    check_finite(loss, grad);
    return loss;
  }

  int predict(std::span<const double> params,
              std::span<const double> features) const override {
    const int classes = shape_.num_classes;
    const int dim = shape_.input_dim;
    const auto weights = params.first(static_cast<std::size_t>(classes) * dim);
    const auto biases = params.subspan(weights.size());
    std::vector<double> logits(classes);
    for (int c = 0; c < classes; ++c) {
      double z = biases[c];
      const double* row = &weights[static_cast<std::size_t>(c) * dim];
      for (int f = 0; f < dim; ++f) z += row[f] * features[f];
      logits[c] = z;
    }
    return argmax_lowest_tie(logits);
  }

 private:
  ModelShape shape_;
  std::size_t param_count_ = 0;
  std::vector<std::uint8_t> bias_mask_;
};

// One tanh hidden layer; parameter layout [W1, b1, W2, b2].
class MlpTrainer final : public Trainer {
 public:
  explicit MlpTrainer(const ModelShape& shape) : shape_(shape) {
    const std::size_t features = static_cast<std::size_t>(shape.input_dim);
    const std::size_t hidden = static_cast<std::size_t>(shape.hidden_width);
    const std::size_t classes = static_cast<std::size_t>(shape.num_classes);
    w1_ = hidden * features;
    b1_ = hidden;
    w2_ = classes * hidden;
    b2_ = classes;
    bias_mask_.assign(param_count(), 0);
    std::fill_n(bias_mask_.begin() + w1_, b1_, 1);
    std::fill(bias_mask_.begin() + w1_ + b1_ + w2_, bias_mask_.end(), 1);
  }

  std::size_t param_count() const override { return w1_ + b1_ + w2_ + b2_; }
  const ModelShape& shape() const override { return shape_; }
  const std::vector<std::uint8_t>& bias_mask() const override {
    return bias_mask_;
  }

  double loss_and_gradient(std::span<const double> params,
                           const LabeledDataset& data,
                           std::span<const std::size_t> batch,
                           std::span<double> grad) const override {
    check_batch(data, batch, shape_.input_dim);
    const int features = shape_.input_dim;
    const int hidden = shape_.hidden_width;
    const int classes = shape_.num_classes;
    const auto weights1 = params.first(w1_);
    const auto biases1 = params.subspan(w1_, b1_);
    const auto weights2 = params.subspan(w1_ + b1_, w2_);
    const auto biases2 = params.subspan(w1_ + b1_ + w2_, b2_);
    std::fill(grad.begin(), grad.end(), 0.0);
    auto grad_w1 = grad.first(w1_);
    auto grad_b1 = grad.subspan(w1_, b1_);
    auto grad_w2 = grad.subspan(w1_ + b1_, w2_);
    auto grad_b2 = grad.subspan(w1_ + b1_ + w2_, b2_);

    std::vector<double> act(hidden), logits(classes), probs(classes),
        hidden_delta(hidden);
    double loss = 0.0;
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (std::size_t index : batch) {
      const auto x = data.sample(index);
      const int label = data.labels[index];
      for (int h = 0; h < hidden; ++h) {
        double z = biases1[h];
        const double* row = &weights1[static_cast<std::size_t>(h) * features];
        for (int f = 0; f < features; ++f) z += row[f] * x[f];
        act[h] = std::tanh(z);
      }
      for (int c = 0; c < classes; ++c) {
        double z = biases2[c];
        const double* row = &weights2[static_cast<std::size_t>(c) * hidden];
        for (int h = 0; h < hidden; ++h) z += row[h] * act[h];
        logits[c] = z;
      }
      softmax(logits, probs);
      loss -= scale * std::log(std::max(probs[label], 1e-300));

      std::fill(hidden_delta.begin(), hidden_delta.end(), 0.0);
      for (int c = 0; c < classes; ++c) {
        const double delta = scale * (probs[c] - (c == label ? 1.0 : 0.0));
        grad_b2[c] += delta;
        const double* row = &weights2[static_cast<std::size_t>(c) * hidden];
        double* grow = &grad_w2[static_cast<std::size_t>(c) * hidden];
        for (int h = 0; h < hidden; ++h) {
          grow[h] += delta * act[h];
          hidden_delta[h] += delta * row[h];
        }
      }
      for (int h = 0; h < hidden; ++h) {
        const double delta = hidden_delta[h] * (1.0 - act[h] * act[h]);
        grad_b1[h] += delta;
        double* grow = &grad_w1[static_cast<std::size_t>(h) * features];
        for (int f = 0; f < features; ++f) grow[f] += delta * x[f];
      }
    }
    check_finite(loss, grad);
    return loss;
  }

  int predict(std::span<const double> params,
              std::span<const double> features_in) const override {
    const int features = shape_.input_dim;
    const int hidden = shape_.hidden_width;
    const int classes = shape_.num_classes;
    const auto weights1 = params.first(w1_);
    const auto biases1 = params.subspan(w1_, b1_);
    const auto weights2 = params.subspan(w1_ + b1_, w2_);
    const auto biases2 = params.subspan(w1_ + b1_ + w2_, b2_);
    std::vector<double> act(hidden), logits(classes);
    for (int h = 0; h < hidden; ++h) {
      double z = biases1[h];
      const double* row = &weights1[static_cast<std::size_t>(h) * features];
      for (int f = 0; f < features; ++f) z += row[f] * features_in[f];
      act[h] = std::tanh(z);
    }
    for (int c = 0; c < classes; ++c) {
      double z = biases2[c];
      const double* row = &weights2[static_cast<std::size_t>(c) * hidden];
      for (int h = 0; h < hidden; ++h) z += row[h] * act[h];
      logits[c] = z;
    }
    return argmax_lowest_tie(logits);
  }

 private:
  ModelShape shape_;
  std::size_t w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0;
  std::vector<std::uint8_t> bias_mask_;
};

}  // namespace

std::unique_ptr<Trainer> make_trainer(const ModelShape& shape) {
  if (shape.input_dim < 1 || shape.num_classes < 2 || shape.hidden_width < 0)
    throw ConfigError("invalid model shape");
  if (shape.hidden_width == 0)
    return std::make_unique<LogisticTrainer>(shape);
  return std::make_unique<MlpTrainer>(shape);
}

void local_update(std::span<double> params, OptimizerState& opt,
                  const Trainer& trainer, const LabeledDataset& data,
                  std::span<const std::size_t> batch) {
  const std::size_t count = trainer.param_count();
  if (params.size() != count || opt.momentum.size() != count)
    throw std::invalid_argument("local_update: parameter size mismatch");
  std::vector<double> grad(count);
  trainer.loss_and_gradient(params, data, batch, grad);
  const auto& bias = trainer.bias_mask();
  for (std::size_t k = 0; k < count; ++k) {
    const double decay = bias[k] ? 0.0 : opt.weight_decay * params[k];
    opt.momentum[k] = opt.momentum_coef * opt.momentum[k] + (grad[k] + decay);
    params[k] -= opt.learning_rate * opt.momentum[k];
  }
}

double evaluate(const Trainer& trainer, std::span<const double> params,
                const LabeledDataset& test) {
  if (test.size() == 0)
    throw std::invalid_argument("evaluate: empty test set");
  std::size_t correct = 0;
  for (std::size_t n = 0; n < test.size(); ++n)
    if (trainer.predict(params, test.sample(n)) == test.labels[n]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<double> init_model(const Trainer& trainer, std::mt19937_64& rng) {
  const ModelShape& shape = trainer.shape();
  std::vector<double> params(trainer.param_count(), 0.0);
  const auto& bias = trainer.bias_mask();
  // Fan-in per entry: input_dim for the first weight block, hidden width for
  // the second. Bias entries stay zero.
  std::size_t boundary = params.size();
  if (shape.hidden_width > 0)
    boundary = static_cast<std::size_t>(shape.hidden_width) * shape.input_dim +
               shape.hidden_width;
  const double first = 1.0 / std::sqrt(static_cast<double>(shape.input_dim));
  const double second =
      shape.hidden_width > 0
          ? 1.0 / std::sqrt(static_cast<double>(shape.hidden_width))
          : first;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (bias[k]) continue;
    params[k] = unit(rng) * (k < boundary ? first : second);
  }
  return params;
}

}  // namespace dflsim
