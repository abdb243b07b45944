#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/matrix.hpp"

namespace domsift::learn {

using RawRow = std::vector<std::optional<double>>;

/// Median imputation followed by z-scoring, with statistics taken from the
/// training rows (population standard deviation).
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> impute;  // training median per column

  std::size_t size() const { return mean.size(); }

  std::vector<double> apply(std::span<const std::optional<double>> row) const {
    if (row.size() != size())
      throw Error(ErrorCode::FeatureDimensionMismatch,
                  "expected " + std::to_string(size()) + " features, got " + std::to_string(row.size()));
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j].value_or(impute[j]) - mean[j]) / stddev[j];
    return out;
  }
};

inline double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + n / 2);
  return (lo + hi) / 2.0;
}

inline Standardizer fit_standardizer(const std::vector<RawRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorCode::TooFewSamples, "standardizer needs at least 2 rows");
  const std::size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw Error(ErrorCode::FeatureDimensionMismatch, "ragged feature rows");

  Standardizer s;
  s.mean.resize(cols);
  s.stddev.resize(cols);
  s.impute.resize(cols);
  const double n = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> present;
    for (const auto& r : rows)
      if (r[j]) present.push_back(*r[j]);
    if (present.empty())
      throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(j) + " has no values");
    s.impute[j] = median(present);

    double sum = 0.0;
    for (const auto& r : rows) sum += r[j].value_or(s.impute[j]);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : rows) {
      const double d = r[j].value_or(s.impute[j]) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0))
      throw Error(ErrorCode::ConstantColumn, "column " + std::to_string(j) + " is constant after imputation");
    s.mean[j] = mean;
    s.stddev[j] = sd;
  }
  return s;
}

inline TrainingData apply_standardizer(const Standardizer& s, const std::vector<RawRow>& rows,
                                       const std::vector<int>& labels) {
  if (labels.size() != rows.size()) throw Error(ErrorCode::LengthMismatch, "labels do not match rows");
  TrainingData data(rows.size(), s.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto z = s.apply(rows[i]);
    std::copy(z.begin(), z.end(), data.row(i).begin());
    data.y[i] = labels[i];
  }
  return data;
}

}  // namespace domsift::learn
