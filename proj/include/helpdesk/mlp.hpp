#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "helpdesk/error.hpp"
#include "helpdesk/features.hpp"
#include "helpdesk/prediction.hpp"
#include "helpdesk/random.hpp"

namespace helpdesk {

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct MlpConfig {
  std::size_t hidden_units = 40;
  double dropout_rate = 0.5;
};

struct TrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("momentum must be in [0, 1)");
    if (batch_size < 1) throw InvalidArgument("batch_size must be at least 1");
  }
};

/// Training-set loss and accuracy after one epoch, measured with dropout off.
struct EpochStats {
  double loss = 0.0;
  double accuracy = 0.0;

  bool operator==(const EpochStats&) const = default;
};

/// input -> dropout -> dense(hidden, relu) -> dropout -> dense(classes) -> softmax.
/// w1 is hidden x input, w2 is classes x hidden.
struct MlpModel {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
  double dropout_rate = 0.5;
  std::vector<EpochStats> history;

  std::size_t input_dim() const { return w1.cols(); }
  std::size_t hidden_units() const { return w1.rows(); }
  std::size_t num_classes() const { return w2.rows(); }

  void validate() const {
    if (b1.size() != w1.rows() || w2.cols() != w1.rows() || b2.size() != w2.rows()) {
      throw InvalidArgument("mlp weight shapes are inconsistent");
    }
    if (num_classes() == 0) throw InvalidArgument("mlp must have at least one output class");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
      throw InvalidArgument("dropout_rate must be in [0, 1)");
    }
  }
};

/// Same shape as the model's parameters.
struct MlpGradient {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

/// Glorot-uniform weights, zero biases.
inline MlpModel make_mlp(std::size_t input_dim, std::size_t num_classes, const MlpConfig& cfg,
                         Rng& rng) {
  if (input_dim == 0 || num_classes == 0 || cfg.hidden_units == 0) {
    throw InvalidArgument("mlp dimensions must be positive");
  }
  MlpModel m;
  m.w1 = Matrix(cfg.hidden_units, input_dim);
  m.b1.assign(cfg.hidden_units, 0.0);
  m.w2 = Matrix(num_classes, cfg.hidden_units);
  m.b2.assign(num_classes, 0.0);
  m.dropout_rate = cfg.dropout_rate;
  const double a1 = std::sqrt(6.0 / static_cast<double>(input_dim + cfg.hidden_units));
  for (double& w : m.w1.values()) w = rng.uniform(-a1, a1);
  const double a2 = std::sqrt(6.0 / static_cast<double>(cfg.hidden_units + num_classes));
  for (double& w : m.w2.values()) w = rng.uniform(-a2, a2);
  m.validate();
  return m;
}

/// Max-subtracted softmax.
inline std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

namespace detail {

inline void check_input(const MlpModel& m, std::span<const double> x) {
  if (x.size() != m.input_dim()) {
    throw InvalidArgument("feature vector has dimension " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(m.input_dim()));
  }
}

struct SparseInput {
  std::vector<std::size_t> index;
  std::vector<double> value;
};

inline SparseInput sparsify(std::span<const double> x) {
  SparseInput s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      s.index.push_back(i);
      s.value.push_back(x[i]);
    }
  }
  return s;
}

inline MlpGradient zero_gradient(const MlpModel& m) {
  return {Matrix(m.w1.rows(), m.w1.cols()), std::vector<double>(m.b1.size(), 0.0),
          Matrix(m.w2.rows(), m.w2.cols()), std::vector<double>(m.b2.size(), 0.0)};
}

inline double log_sum_exp(std::span<const double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - mx);
  return mx + std::log(s);
}

// Forward + backward for one sample, adding d(loss)/d(params) into `grad`
// and returning the sample's cross-entropy. With a null rng dropout is off.
inline double backprop_sample(const MlpModel& m, const SparseInput& x, std::size_t label,
                              MlpGradient& grad, Rng* rng) {
  const std::size_t H = m.hidden_units();
  const std::size_t C = m.num_classes();
  const double rate = rng ? m.dropout_rate : 0.0;
  const double keep_scale = 1.0 / (1.0 - rate);

  std::vector<double> xin = x.value;
  if (rate > 0.0) {
    for (double& v : xin) v = rng->bernoulli(rate) ? 0.0 : v * keep_scale;
  }

  std::vector<double> pre(H), act(H), hidden_mask(H, 1.0);
  for (std::size_t j = 0; j < H; ++j) {
    double s = m.b1[j];
    const auto w = m.w1.row(j);
    for (std::size_t k = 0; k < x.index.size(); ++k) s += w[x.index[k]] * xin[k];
    pre[j] = s;
    act[j] = s > 0.0 ? s : 0.0;
  }
  if (rate > 0.0) {
    for (std::size_t j = 0; j < H; ++j) {
      hidden_mask[j] = rng->bernoulli(rate) ? 0.0 : keep_scale;
      act[j] *= hidden_mask[j];
    }
  }

  std::vector<double> z(C);
  for (std::size_t c = 0; c < C; ++c) {
    const auto w = m.w2.row(c);
    z[c] = m.b2[c] + std::inner_product(w.begin(), w.end(), act.begin(), 0.0);
  }
  const double loss = log_sum_exp(z) - z[label];
  std::vector<double> dz = softmax(z);
  dz[label] -= 1.0;

  std::vector<double> dact(H, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const auto w = m.w2.row(c);
    auto g = grad.w2.row(c);
    for (std::size_t j = 0; j < H; ++j) {
      g[j] += dz[c] * act[j];
      dact[j] += w[j] * dz[c];
    }
    grad.b2[c] += dz[c];
  }
  for (std::size_t j = 0; j < H; ++j) {
    const double dh = pre[j] > 0.0 ? dact[j] * hidden_mask[j] : 0.0;
    if (dh == 0.0) continue;
    grad.b1[j] += dh;
    auto g = grad.w1.row(j);
    for (std::size_t k = 0; k < x.index.size(); ++k) g[x.index[k]] += dh * xin[k];
  }
  return loss;
}

inline void check_dataset(std::span<const FeatureVector> X, std::span<const std::size_t> y,
                          std::size_t num_classes) {
  if (X.empty()) throw InvalidArgument("training set is empty");
  if (X.size() != y.size()) {
    throw InvalidArgument("got " + std::to_string(X.size()) + " feature vectors but " +
                          std::to_string(y.size()) + " labels");
  }
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != X[0].size()) {
      throw InvalidArgument("feature vector " + std::to_string(i) + " has dimension " +
                            std::to_string(X[i].size()) + ", expected " +
                            std::to_string(X[0].size()));
    }
    if (y[i] >= num_classes) {
      throw InvalidArgument("label " + std::to_string(y[i]) + " of sample " + std::to_string(i) +
                            " is not below the class count " + std::to_string(num_classes));
    }
  }
}

}  // namespace detail

/// Output scores before softmax (inference mode).
inline std::vector<double> mlp_logits(const MlpModel& m, std::span<const double> x) {
  detail::check_input(m, x);
  const auto sx = detail::sparsify(x);
  std::vector<double> act(m.hidden_units());
  for (std::size_t j = 0; j < act.size(); ++j) {
    double s = m.b1[j];
    const auto w = m.w1.row(j);
    for (std::size_t k = 0; k < sx.index.size(); ++k) s += w[sx.index[k]] * sx.value[k];
    act[j] = s > 0.0 ? s : 0.0;
  }
  std::vector<double> z(m.num_classes());
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto w = m.w2.row(c);
    z[c] = m.b2[c] + std::inner_product(w.begin(), w.end(), act.begin(), 0.0);
  }
  return z;
}

inline std::vector<double> predict_proba(const MlpModel& m, std::span<const double> x) {
  return softmax(mlp_logits(m, x));
}

inline Prediction predict(const MlpModel& m, std::span<const double> x) {
  return argmax_prediction(predict_proba(m, x));
}

/// Mean cross-entropy over a dataset, dropout off.
inline double mlp_loss(const MlpModel& m, std::span<const FeatureVector> X,
                       std::span<const std::size_t> y) {
  detail::check_dataset(X, y, m.num_classes());
  double total = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto z = mlp_logits(m, X[i]);
    total += detail::log_sum_exp(z) - z[y[i]];
  }
  return total / static_cast<double>(X.size());
}

/// Analytic gradient of mlp_loss (dropout off), via the training backprop path.
inline MlpGradient mlp_gradient(const MlpModel& m, std::span<const FeatureVector> X,
                                std::span<const std::size_t> y) {
  detail::check_dataset(X, y, m.num_classes());
  auto g = detail::zero_gradient(m);
  for (std::size_t i = 0; i < X.size(); ++i) {
    detail::check_input(m, X[i]);
    detail::backprop_sample(m, detail::sparsify(X[i]), y[i], g, nullptr);
  }
  const double inv = 1.0 / static_cast<double>(X.size());
  for (double& v : g.w1.values()) v *= inv;
  for (double& v : g.b1) v *= inv;
  for (double& v : g.w2.values()) v *= inv;
  for (double& v : g.b2) v *= inv;
  return g;
}

inline double training_accuracy(const MlpModel& m, std::span<const FeatureVector> X,
                                std::span<const std::size_t> y) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < X.size(); ++i) correct += predict(m, X[i]).category == y[i];
  return X.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(X.size());
}

/// Mini-batch gradient descent with momentum on mean cross-entropy.
/// Inverted dropout at the input and hidden outputs during training only.
/// Fully determined by (X, y, configs): one generator seeded from
/// train.seed drives initialization, epoch shuffles and dropout masks.
inline MlpModel train_mlp(std::span<const FeatureVector> X, std::span<const std::size_t> y,
                          std::size_t num_classes, const MlpConfig& shape,
                          const TrainConfig& train) {
  train.validate();
  if (!(shape.dropout_rate >= 0.0 && shape.dropout_rate < 1.0)) {
    throw InvalidArgument("dropout_rate must be in [0, 1)");
  }
  detail::check_dataset(X, y, num_classes);

  Rng rng(train.seed);
  MlpModel m = make_mlp(X[0].size(), num_classes, shape, rng);

  std::vector<detail::SparseInput> inputs;
  inputs.reserve(X.size());
  for (const auto& x : X) inputs.push_back(detail::sparsify(x));

  auto velocity = detail::zero_gradient(m);
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  auto apply = [&](std::vector<double>& param, std::vector<double>& vel,
                   std::vector<double>& grad, double scale) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      vel[i] = train.momentum * vel[i] - train.learning_rate * grad[i] * scale;
      param[i] += vel[i];
      grad[i] = 0.0;
    }
  };

  auto grad = detail::zero_gradient(m);
  for (std::size_t epoch = 1; epoch <= train.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += train.batch_size) {
      const std::size_t end = std::min(order.size(), start + train.batch_size);
      for (std::size_t k = start; k < end; ++k) {
        detail::backprop_sample(m, inputs[order[k]], y[order[k]], grad,
                                m.dropout_rate > 0.0 ? &rng : nullptr);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      apply(m.w1.values(), velocity.w1.values(), grad.w1.values(), scale);
      apply(m.b1, velocity.b1, grad.b1, scale);
      apply(m.w2.values(), velocity.w2.values(), grad.w2.values(), scale);
      apply(m.b2, velocity.b2, grad.b2, scale);
    }
    EpochStats stats{mlp_loss(m, X, y), training_accuracy(m, X, y)};
    if (!std::isfinite(stats.loss)) {
      throw Error("training diverged: loss is not finite at epoch " + std::to_string(epoch));
    }
    m.history.push_back(stats);
  }
  return m;
}

}  // namespace helpdesk
