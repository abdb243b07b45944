#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/matrix.hpp"

namespace domsift::learn {

struct KnnParams {
  std::size_t k = 5;
};

/// Euclidean k-nearest-neighbour vote. score = share of label-1 rows
/// among the k nearest; label 1 only when score > 0.5. Equidistant rows
/// are ordered by row index.
inline Prediction predict_knn(const TrainingData& train, std::span<const double> query, std::size_t k = 5) {
  if (train.rows == 0) throw Error(ErrorCode::EmptyTrainSet, "kNN has no training rows");
  if (query.size() != train.cols)
    throw Error(ErrorCode::FeatureDimensionMismatch, "kNN expects " + std::to_string(train.cols) + " features");
  if (k == 0 || k > train.rows) throw Error(ErrorCode::InvalidArgument, "k must lie in [1, n]");

  std::vector<std::pair<double, std::size_t>> dist(train.rows);
  for (std::size_t i = 0; i < train.rows; ++i) {
    const auto x = train.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < train.cols; ++j) {
      const double diff = x[j] - query[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < k; ++i) pos += train.y[dist[i].second] == 1 ? 1 : 0;
  const double score = static_cast<double>(pos) / static_cast<double>(k);
  return {score > 0.5 ? 1 : 0, score};
}

/// Stores the (standardized) training rows for brute-force lookup.
struct KnnModel {
  TrainingData train;
  std::size_t k = 5;

  Prediction predict(std::span<const double> query) const { return predict_knn(train, query, k); }
  double predict_proba(std::span<const double> query) const { return predict(query).score; }
};

inline KnnModel fit_knn(const TrainingData& data, const KnnParams& params = {}) {
  data.validate();
  if (data.rows == 0) throw Error(ErrorCode::EmptyTrainSet, "kNN has no training rows");
  if (params.k == 0 || params.k > data.rows) throw Error(ErrorCode::InvalidArgument, "k must lie in [1, n]");
  return KnnModel{data, params.k};
}

}  // namespace domsift::learn
