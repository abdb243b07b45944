#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/types.hpp"

namespace domsift::select {

/// Sample Pearson correlation (two-pass). nullopt when either column is
/// constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "pearson: columns differ in length");
  if (x.size() < 2) throw Error(ErrorCode::TooFewSamples, "pearson: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

using Column = std::vector<std::optional<double>>;

/// Symmetric coefficient matrix; undefined cells (constant columns, too
/// few jointly present samples) are nullopt.
struct CorrelationMatrix {
  std::vector<std::size_t> feature_ids;
  std::vector<std::optional<double>> values;  // row-major, size() x size()
  std::vector<bool> constant;

  std::size_t size() const { return feature_ids.size(); }
  std::optional<double> at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
};

/// Pairwise-complete correlation: for each pair only rows where both
/// entries are present take part.
inline CorrelationMatrix correlation_matrix(const std::vector<Column>& columns, std::vector<std::size_t> feature_ids = {}) {
  const std::size_t p = columns.size();
  if (feature_ids.empty())
    for (std::size_t i = 0; i < p; ++i) feature_ids.push_back(i);
  if (feature_ids.size() != p) throw Error(ErrorCode::LengthMismatch, "feature id list does not match columns");
  const std::size_t rows = p ? columns[0].size() : 0;
  for (const auto& c : columns)
    if (c.size() != rows) throw Error(ErrorCode::LengthMismatch, "columns differ in length");
  if (rows < 2) throw Error(ErrorCode::TooFewSamples, "correlation matrix needs at least 2 rows");

  CorrelationMatrix m;
  m.feature_ids = std::move(feature_ids);
  m.values.assign(p * p, std::nullopt);
  m.constant.assign(p, false);

  std::vector<double> xs, ys;
  auto pair_r = [&](std::size_t a, std::size_t b) -> std::optional<double> {
    xs.clear();
    ys.clear();
    for (std::size_t r = 0; r < rows; ++r) {
      if (columns[a][r] && columns[b][r]) {
        xs.push_back(*columns[a][r]);
        ys.push_back(*columns[b][r]);
      }
    }
    if (xs.size() < 2) return std::nullopt;
    return pearson(xs, ys);
  };

  for (std::size_t i = 0; i < p; ++i) {
    m.constant[i] = !pair_r(i, i).has_value();
    m.values[i * p + i] = m.constant[i] ? std::nullopt : std::optional<double>(1.0);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      std::optional<double> r;
      if (!m.constant[i] && !m.constant[j]) r = pair_r(i, j);
      m.values[i * p + j] = m.values[j * p + i] = r;
    }
  }
  return m;
}

/// Greedy scan in matrix order: a feature survives unless it is constant
/// or |r| > threshold against a feature already kept. Returns feature ids.
inline std::vector<std::size_t> prune(const CorrelationMatrix& m, double threshold = 0.60) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.constant[i]) continue;
    bool drop = false;
    for (std::size_t k : kept_pos) {
      const auto r = m.at(i, k);
      if (r && std::fabs(*r) > threshold) {
        drop = true;
        break;
      }
    }
    if (!drop) kept_pos.push_back(i);
  }
  std::vector<std::size_t> ids;
  for (std::size_t k : kept_pos) ids.push_back(m.feature_ids[k]);
  return ids;
}

/// Published feature subsets, as zero-based indices (0 == F1).
inline std::optional<std::vector<std::size_t>> preset(std::string_view name) {
  if (name == "paper-d1") return std::vector<std::size_t>{0, 1, 2, 4, 7, 9, 10, 11, 13, 14, 16};
  if (name == "paper-d2") return std::vector<std::size_t>{1, 2, 4, 7, 9, 10, 11, 13, 14, 16};
  return std::nullopt;
}

inline void write_matrix_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "feature";
  for (std::size_t id : m.feature_ids) out << ',' << feature_name(id);
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << feature_name(m.feature_ids[i]);
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << ',';
      if (auto r = m.at(i, j)) out << *r;
    }
    out << '\n';
  }
}

}  // namespace domsift::select
