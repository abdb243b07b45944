#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/matrix.hpp"

namespace domsift::learn {

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_leaf = 5;
  /// Features examined per split; 0 means all of them.
  std::size_t max_features = 0;
};

/// Flat CART tree. A node with feature < 0 is a leaf holding P(label 1);
/// otherwise rows with x[feature] <= threshold go left.
struct DecisionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double prob = 0.0;
    friend bool operator==(const Node&, const Node&) = default;
  };

  std::vector<Node> nodes;
  std::size_t num_features = 0;

  double predict_proba(std::span<const double> row) const {
    if (row.size() != num_features)
      throw Error(ErrorCode::FeatureDimensionMismatch, "tree expects " + std::to_string(num_features) + " features");
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
      const Node& n = nodes[i];
      i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].prob;
  }

  Prediction predict(std::span<const double> row) const {
    const double p = predict_proba(row);
    return {p > 0.5 ? 1 : 0, p};
  }

  std::size_t depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      best = std::max(best, d[i]);
      if (nodes[i].feature >= 0) {
        d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
        d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
      }
    }
    return best;
  }
};

/// Weighted Gini impurity of a binary split given per-side counts.
inline double split_gini(double n_left, double pos_left, double n_right, double pos_right) {
  auto gini = [](double n, double pos) {
    if (n == 0.0) return 0.0;
    const double p = pos / n;
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  };
  const double n = n_left + n_right;
  return (n_left * gini(n_left, pos_left) + n_right * gini(n_right, pos_right)) / n;
}

namespace detail {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingData& data, const TreeParams& params, std::mt19937_64* rng)
      : data_(data), params_(params), rng_(rng) {
    all_features_.resize(data.cols);
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  DecisionTree build(std::vector<std::size_t> sample) {
    tree_.num_features = data_.cols;
    tree_.nodes.clear();
    grow(sample, 0);
    return std::move(tree_);
  }

 private:
  std::vector<std::size_t> candidate_features() {
    const std::size_t p = data_.cols;
    const std::size_t m = params_.max_features;
    if (m == 0 || m >= p || rng_ == nullptr) return all_features_;
    std::vector<std::size_t> f = all_features_;
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, p - 1);
      std::swap(f[i], f[pick(*rng_)]);
    }
    f.resize(m);
    std::sort(f.begin(), f.end());
    return f;
  }

  // Lowest impurity wins; ties keep the earlier (feature, threshold).
  SplitChoice best_split(const std::vector<std::size_t>& sample, double parent_impurity) {
    SplitChoice best;
    best.impurity = parent_impurity;
    const std::size_t n = sample.size();
    double total_pos = 0.0;
    for (std::size_t i : sample) total_pos += data_.y[i];

    std::vector<std::size_t> order(sample);
    for (std::size_t f : candidate_features()) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = data_.at(a, f), vb = data_.at(b, f);
        return va < vb || (va == vb && a < b);
      });
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_pos += data_.y[order[k]];
        const double v = data_.at(order[k], f), next = data_.at(order[k + 1], f);
        if (v == next) continue;
        const std::size_t n_left = k + 1;
        if (n_left < params_.min_leaf || n - n_left < params_.min_leaf) continue;
        const double imp = split_gini(static_cast<double>(n_left), left_pos, static_cast<double>(n - n_left),
                                      total_pos - left_pos);
        if (imp < best.impurity) {
          best.feature = static_cast<int>(f);
          const double mid = v + (next - v) / 2.0;
          best.threshold = mid < next ? mid : v;
          best.impurity = imp;
        }
      }
    }
    return best;
  }

  int grow(const std::vector<std::size_t>& sample, std::size_t depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double pos = 0.0;
    for (std::size_t i : sample) pos += data_.y[i];
    const double n = static_cast<double>(sample.size());
    tree_.nodes[id].prob = pos / n;

    const bool pure = pos == 0.0 || pos == n;
    if (pure || depth >= params_.max_depth || sample.size() < 2 * params_.min_leaf) return id;

    const double parent = split_gini(n, pos, 0.0, 0.0);
    const SplitChoice split = best_split(sample, parent);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : sample)
      (data_.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);

    tree_.nodes[id].feature = split.feature;
    tree_.nodes[id].threshold = split.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const TrainingData& data_;
  TreeParams params_;
  std::mt19937_64* rng_;
  std::vector<std::size_t> all_features_;
  DecisionTree tree_;
};

}  // namespace detail

/// Greedy CART on weighted Gini. Candidate thresholds are midpoints
/// between consecutive distinct values; growth stops at max_depth, on a
/// pure node, or when no split leaves min_leaf rows on both sides.
/// `rng` is only consulted when max_features restricts the search.
inline DecisionTree train_decision_tree(const TrainingData& data, const TreeParams& params = {},
                                        std::mt19937_64* rng = nullptr,
                                        std::vector<std::size_t> sample = {}) {
  data.validate();
  if (data.rows == 0 || data.rows < params.min_leaf)
    throw Error(ErrorCode::EmptyData, "decision tree needs at least min_leaf rows");
  if (params.min_leaf == 0) throw Error(ErrorCode::InvalidArgument, "min_leaf must be positive");
  if (sample.empty()) {
    sample.resize(data.rows);
    std::iota(sample.begin(), sample.end(), std::size_t{0});
  }
  return detail::TreeBuilder(data, params, rng).build(std::move(sample));
}

}  // namespace domsift::learn
