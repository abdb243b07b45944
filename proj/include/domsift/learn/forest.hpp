#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/matrix.hpp"
#include "domsift/learn/tree.hpp"

namespace domsift::learn {

struct ForestParams {
  std::size_t n_trees = 100;
  /// Features tried per split; 0 means ceil(sqrt(p)).
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  TreeParams tree;
  /// Worker threads for training; 0 means hardware concurrency. Does not
  /// affect the result.
  unsigned threads = 0;
};

struct RandomForest {
  std::vector<DecisionTree> trees;

  double predict_proba(std::span<const double> row) const {
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict_proba(row);
    return sum / static_cast<double>(trees.size());
  }

  Prediction predict(std::span<const double> row) const {
    const double p = predict_proba(row);
    return {p > 0.5 ? 1 : 0, p};
  }
};

inline std::size_t resolve_max_features(std::size_t requested, std::size_t p) {
  if (requested == 0) return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));
  return std::min(requested, p);
}

/// Tree i is grown from its own generator seeded with seed + i, so the
/// forest is identical for any thread count.
inline RandomForest train_random_forest(const TrainingData& data, const ForestParams& params = {}) {
  data.validate();
  if (data.rows == 0 || data.rows < params.tree.min_leaf)
    throw Error(ErrorCode::EmptyData, "random forest needs at least min_leaf rows");
  if (params.n_trees == 0) throw Error(ErrorCode::InvalidArgument, "n_trees must be positive");

  TreeParams tp = params.tree;
  tp.max_features = resolve_max_features(params.max_features, data.cols);

  RandomForest forest;
  forest.trees.resize(params.n_trees);

  auto grow_one = [&](std::size_t t) {
    std::mt19937_64 rng(params.seed + t);
    std::vector<std::size_t> sample(data.rows);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, data.rows - 1);
      for (auto& s : sample) s = pick(rng);
    } else {
      for (std::size_t i = 0; i < data.rows; ++i) sample[i] = i;
    }
    forest.trees[t] = train_decision_tree(data, tp, &rng, std::move(sample));
  };

  unsigned threads = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.n_trees));
  if (threads <= 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) grow_one(t);
    return forest;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = next++; t < params.n_trees; t = next++) grow_one(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return forest;
}

}  // namespace domsift::learn
