#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/matrix.hpp"

namespace domsift::learn {

struct LogisticParams {
  double l2 = 1e-4;
  double lr = 0.1;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;  // full-batch descent from zero weights consumes no randomness
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_history;  // loss before each epoch's update, then the final loss

  double predict_proba(std::span<const double> row) const {
    if (row.size() != weights.size())
      throw Error(ErrorCode::FeatureDimensionMismatch, "logistic model expects " + std::to_string(weights.size()) + " features");
    double z = bias;
    for (std::size_t j = 0; j < row.size(); ++j) z += weights[j] * row[j];
    return 1.0 / (1.0 + std::exp(-z));
  }

  Prediction predict(std::span<const double> row) const {
    const double p = predict_proba(row);
    return {p > 0.5 ? 1 : 0, p};
  }
};

namespace detail {

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace detail

/// Mean log-loss plus l2/2 * |w|^2 (bias unpenalized).
inline double logistic_loss(const TrainingData& data, std::span<const double> w, double b, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    double z = b;
    const auto x = data.row(i);
    for (std::size_t j = 0; j < data.cols; ++j) z += w[j] * x[j];
    // -[y log s(z) + (1-y) log(1-s(z))] == softplus(z) - y z
    loss += detail::softplus(z) - data.y[i] * z;
  }
  loss /= static_cast<double>(data.rows);
  double norm = 0.0;
  for (double v : w) norm += v * v;
  return loss + 0.5 * l2 * norm;
}

/// Gradient of logistic_loss; the last element is d/d bias.
inline std::vector<double> logistic_gradient(const TrainingData& data, std::span<const double> w, double b, double l2) {
  std::vector<double> g(data.cols + 1, 0.0);
  for (std::size_t i = 0; i < data.rows; ++i) {
    double z = b;
    const auto x = data.row(i);
    for (std::size_t j = 0; j < data.cols; ++j) z += w[j] * x[j];
    const double r = detail::sigmoid(z) - data.y[i];
    for (std::size_t j = 0; j < data.cols; ++j) g[j] += r * x[j];
    g[data.cols] += r;
  }
  const double n = static_cast<double>(data.rows);
  for (auto& v : g) v /= n;
  for (std::size_t j = 0; j < data.cols; ++j) g[j] += l2 * w[j];
  return g;
}

/// Full-batch gradient descent from zero weights.
inline LogisticModel train_logistic_regression(const TrainingData& data, const LogisticParams& params = {}) {
  data.validate();
  if (data.rows == 0) throw Error(ErrorCode::EmptyData, "logistic regression needs data");
  LogisticModel m;
  m.weights.assign(data.cols, 0.0);
  m.loss_history.reserve(params.epochs + 1);
  for (std::size_t epoch = 0; epoch <= params.epochs; ++epoch) {
    const double loss = logistic_loss(data, m.weights, m.bias, params.l2);
    if (!std::isfinite(loss))
      throw Error(ErrorCode::NonFiniteLoss, "loss diverged at epoch " + std::to_string(epoch));
    m.loss_history.push_back(loss);
    if (epoch == params.epochs) break;
    const auto g = logistic_gradient(data, m.weights, m.bias, params.l2);
    for (std::size_t j = 0; j < data.cols; ++j) m.weights[j] -= params.lr * g[j];
    m.bias -= params.lr * g[data.cols];
  }
  m.final_loss = m.loss_history.back();
  return m;
}

}  // namespace domsift::learn
