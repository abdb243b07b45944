#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "domsift/error.hpp"

namespace domsift::learn {

/// Dense row-major design matrix with binary labels.
struct TrainingData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<int> y;

  TrainingData() = default;
  TrainingData(std::size_t r, std::size_t c) : rows(r), cols(c), x(r * c, 0.0), y(r, 0) {}

  std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {x.data() + i * cols, cols}; }
  double& at(std::size_t i, std::size_t j) { return x[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return x[i * cols + j]; }

  void validate() const {
    if (x.size() != rows * cols || y.size() != rows)
      throw Error(ErrorCode::LengthMismatch, "training data dimensions are inconsistent");
  }
};

/// Hard label plus the ranking score it was derived from.
struct Prediction {
  int label = 0;
  double score = 0.0;
};

}  // namespace domsift::learn
