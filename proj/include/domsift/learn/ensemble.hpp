#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/forest.hpp"
#include "domsift/learn/knn.hpp"
#include "domsift/learn/logistic.hpp"
#include "domsift/learn/matrix.hpp"
#include "domsift/learn/standardizer.hpp"
#include "domsift/learn/tree.hpp"
#include "domsift/types.hpp"
#include "json.hpp"

namespace domsift::learn {

/// 1 iff strictly more than half of the K votes are 1; a tie is 0.
inline int majority_vote(std::span<const int> votes) {
  if (votes.empty()) throw Error(ErrorCode::EmptyVotes, "majority vote over zero classifiers");
  std::size_t ones = 0;
  for (int v : votes) ones += v == 1 ? 1 : 0;
  return 2 * ones > votes.size() ? 1 : 0;
}

using MemberModel = std::variant<RandomForest, DecisionTree, KnnModel, LogisticModel>;

struct Member {
  std::string name;  // "rf", "dt", "knn" or "lr"
  MemberModel model;

  Prediction predict(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.predict(row); }, model);
  }
};

inline std::string display_name(std::string_view member) {
  if (member == "rf") return "RF";
  if (member == "dt") return "DT";
  if (member == "knn") return "KNN";
  if (member == "lr") return "LR";
  return std::string(member);
}

struct EnsembleOptions {
  std::vector<std::string> models = {"rf", "dt", "knn", "lr"};
  TreeParams tree;
  ForestParams forest;
  LogisticParams logistic;
  KnnParams knn;
  std::uint64_t seed = 0;
};

inline constexpr int kModelFormatVersion = 1;

struct EnsembleModel {
  std::vector<Member> members;
  std::vector<std::size_t> selected_features;  // 0 == F1
  Standardizer standardizer;
  std::uint64_t seed = 0;
  int format_version = kModelFormatVersion;
  nlohmann::json params = nlohmann::json::object();

  std::size_t size() const { return members.size(); }
};

inline RawRow select_row(const FeatureVector& v, std::span<const std::size_t> selected) {
  RawRow row;
  row.reserve(selected.size());
  for (std::size_t idx : selected) row.push_back(v.value(idx));
  return row;
}

inline void validate_selection(std::span<const std::size_t> selected) {
  if (selected.empty()) throw Error(ErrorCode::InvalidArgument, "no features selected");
  std::set<std::size_t> seen;
  for (std::size_t idx : selected) {
    if (idx >= kFeatureCount) throw Error(ErrorCode::InvalidArgument, "feature index out of range");
    if (!seen.insert(idx).second) throw Error(ErrorCode::InvalidArgument, "duplicate feature index");
  }
}

inline nlohmann::json params_to_json(const EnsembleOptions& o) {
  return {
      {"models", o.models},
      {"tree", {{"max_depth", o.tree.max_depth}, {"min_leaf", o.tree.min_leaf}, {"criterion", "gini"}}},
      {"forest",
       {{"n_trees", o.forest.n_trees},
        {"max_features", o.forest.max_features},
        {"bootstrap", o.forest.bootstrap},
        {"max_depth", o.forest.tree.max_depth},
        {"min_leaf", o.forest.tree.min_leaf}}},
      {"lr", {{"l2", o.logistic.l2}, {"lr", o.logistic.lr}, {"epochs", o.logistic.epochs}}},
      {"knn", {{"k", o.knn.k}}},
  };
}

/// Fits the standardizer on the selected columns, then each requested
/// member on the standardized training matrix.
inline EnsembleModel fit_ensemble(const std::vector<FeatureVector>& rows, const std::vector<int>& labels,
                                  std::vector<std::size_t> selected, const EnsembleOptions& options = {}) {
  validate_selection(selected);
  if (rows.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "labels do not match rows");
  if (options.models.empty()) throw Error(ErrorCode::InvalidArgument, "ensemble needs at least one member");

  std::vector<RawRow> raw;
  raw.reserve(rows.size());
  for (const auto& v : rows) raw.push_back(select_row(v, selected));

  EnsembleModel model;
  model.selected_features = std::move(selected);
  model.standardizer = fit_standardizer(raw);
  model.seed = options.seed;
  model.params = params_to_json(options);
  const TrainingData data = apply_standardizer(model.standardizer, raw, labels);

  for (const auto& name : options.models) {
    if (name == "rf") {
      ForestParams fp = options.forest;
      fp.seed = options.seed;
      model.members.push_back({name, train_random_forest(data, fp)});
    } else if (name == "dt") {
      model.members.push_back({name, train_decision_tree(data, options.tree)});
    } else if (name == "knn") {
      model.members.push_back({name, fit_knn(data, options.knn)});
    } else if (name == "lr") {
      LogisticParams lp = options.logistic;
      lp.seed = options.seed;
      model.members.push_back({name, train_logistic_regression(data, lp)});
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown model '" + name + "' (expected rf, dt, knn, lr)");
    }
  }
  return model;
}

struct EnsemblePrediction {
  int label = 0;
  double score = 0.0;  // fraction of members voting 1
  std::vector<Prediction> members;
};

/// Majority vote over the members' hard labels for an already
/// standardized row.
inline EnsemblePrediction predict_standardized(const EnsembleModel& model, std::span<const double> row) {
  if (row.size() != model.selected_features.size())
    throw Error(ErrorCode::FeatureDimensionMismatch, "expected " + std::to_string(model.selected_features.size()) +
                                                         " features, got " + std::to_string(row.size()));
  EnsemblePrediction out;
  std::vector<int> votes;
  for (const auto& m : model.members) {
    out.members.push_back(m.predict(row));
    votes.push_back(out.members.back().label);
  }
  out.label = majority_vote(votes);
  out.score = static_cast<double>(std::count(votes.begin(), votes.end(), 1)) / static_cast<double>(votes.size());
  return out;
}

inline EnsemblePrediction ensemble_predict(const EnsembleModel& model, const FeatureVector& features) {
  const RawRow raw = select_row(features, model.selected_features);
  const auto z = model.standardizer.apply(raw);
  return predict_standardized(model, z);
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::json tree_to_json(const DecisionTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.prob});
  return {{"num_features", t.num_features}, {"nodes", std::move(nodes)}};
}

inline DecisionTree tree_from_json(const nlohmann::json& j) {
  DecisionTree t;
  t.num_features = j.at("num_features").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 5) throw Error(ErrorCode::CorruptPayload, "malformed tree node");
    t.nodes.push_back({n[0].get<int>(), n[1].get<double>(), n[2].get<int>(), n[3].get<int>(), n[4].get<double>()});
  }
  if (t.nodes.empty()) throw Error(ErrorCode::CorruptPayload, "empty tree");
  const int count = static_cast<int>(t.nodes.size());
  for (int i = 0; i < count; ++i) {
    const auto& n = t.nodes[static_cast<std::size_t>(i)];
    if (n.feature >= 0) {
      if (static_cast<std::size_t>(n.feature) >= t.num_features || n.left <= i || n.right <= i || n.left >= count ||
          n.right >= count)
        throw Error(ErrorCode::CorruptPayload, "tree node references out of range");
    } else if (!(n.prob >= 0.0 && n.prob <= 1.0)) {
      throw Error(ErrorCode::CorruptPayload, "leaf probability outside [0,1]");
    }
  }
  return t;
}

inline nlohmann::json member_to_json(const Member& m) {
  nlohmann::json j = {{"name", m.name}};
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, RandomForest>) {
          j["type"] = "random_forest";
          nlohmann::json trees = nlohmann::json::array();
          for (const auto& t : model.trees) trees.push_back(tree_to_json(t));
          j["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
          j["type"] = "decision_tree";
          j["tree"] = tree_to_json(model);
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          j["type"] = "knn";
          j["k"] = model.k;
          j["cols"] = model.train.cols;
          j["x"] = model.train.x;
          j["y"] = model.train.y;
        } else {
          j["type"] = "logistic_regression";
          j["weights"] = model.weights;
          j["bias"] = model.bias;
          j["final_loss"] = model.final_loss;
        }
      },
      m.model);
  return j;
}

inline Member member_from_json(const nlohmann::json& j) {
  Member m;
  m.name = j.at("name").get<std::string>();
  const auto type = j.at("type").get<std::string>();
  if (type == "random_forest") {
    RandomForest f;
    for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
    if (f.trees.empty()) throw Error(ErrorCode::CorruptPayload, "forest without trees");
    m.model = std::move(f);
  } else if (type == "decision_tree") {
    m.model = tree_from_json(j.at("tree"));
  } else if (type == "knn") {
    KnnModel k;
    k.k = j.at("k").get<std::size_t>();
    k.train.cols = j.at("cols").get<std::size_t>();
    k.train.x = j.at("x").get<std::vector<double>>();
    k.train.y = j.at("y").get<std::vector<int>>();
    k.train.rows = k.train.y.size();
    if (k.train.x.size() != k.train.rows * k.train.cols || k.k == 0 || k.k > k.train.rows)
      throw Error(ErrorCode::CorruptPayload, "inconsistent kNN payload");
    m.model = std::move(k);
  } else if (type == "logistic_regression") {
    LogisticModel lr;
    lr.weights = j.at("weights").get<std::vector<double>>();
    lr.bias = j.at("bias").get<double>();
    lr.final_loss = j.at("final_loss").get<double>();
    m.model = std::move(lr);
  } else {
    throw Error(ErrorCode::CorruptPayload, "unknown member type '" + type + "'");
  }
  return m;
}

}  // namespace detail

inline nlohmann::json to_json(const EnsembleModel& model) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : model.members) members.push_back(detail::member_to_json(m));
  return {
      {"format_version", model.format_version},
      {"seed", model.seed},
      {"selected_features", model.selected_features},
      {"params", model.params},
      {"standardizer",
       {{"mean", model.standardizer.mean}, {"stddev", model.standardizer.stddev}, {"impute", model.standardizer.impute}}},
      {"members", std::move(members)},
  };
}

inline std::string serialize_model(const EnsembleModel& model) { return to_json(model).dump() + "\n"; }

inline EnsembleModel deserialize_model(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptPayload, e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_number_integer())
    throw Error(ErrorCode::CorruptPayload, "missing format_version");
  const int version = j["format_version"].get<int>();
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch,
                "model format " + std::to_string(version) + ", expected " + std::to_string(kModelFormatVersion));

  EnsembleModel model;
  try {
    model.format_version = version;
    model.seed = j.at("seed").get<std::uint64_t>();
    model.selected_features = j.at("selected_features").get<std::vector<std::size_t>>();
    model.params = j.at("params");
    const auto& s = j.at("standardizer");
    model.standardizer.mean = s.at("mean").get<std::vector<double>>();
    model.standardizer.stddev = s.at("stddev").get<std::vector<double>>();
    model.standardizer.impute = s.at("impute").get<std::vector<double>>();
    for (const auto& m : j.at("members")) model.members.push_back(detail::member_from_json(m));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptPayload, e.what());
  }

  const std::size_t p = model.selected_features.size();
  try {
    validate_selection(model.selected_features);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptPayload, e.what());
  }
  if (model.members.empty()) throw Error(ErrorCode::CorruptPayload, "model has no members");
  if (model.standardizer.mean.size() != p || model.standardizer.stddev.size() != p ||
      model.standardizer.impute.size() != p)
    throw Error(ErrorCode::CorruptPayload, "standardizer does not match selected features");
  for (double sd : model.standardizer.stddev)
    if (!(sd > 0.0)) throw Error(ErrorCode::CorruptPayload, "non-positive stddev");
  for (const auto& m : model.members) {
    const bool ok = std::visit(
        [&](const auto& mm) {
          using T = std::decay_t<decltype(mm)>;
          if constexpr (std::is_same_v<T, RandomForest>) {
            return std::all_of(mm.trees.begin(), mm.trees.end(), [&](const auto& t) { return t.num_features == p; });
          } else if constexpr (std::is_same_v<T, DecisionTree>) {
            return mm.num_features == p;
          } else if constexpr (std::is_same_v<T, KnnModel>) {
            return mm.train.cols == p;
          } else {
            return mm.weights.size() == p;
          }
        },
        m.model);
    if (!ok) throw Error(ErrorCode::CorruptPayload, "member '" + m.name + "' dimension mismatch");
  }
  return model;
}

}  // namespace domsift::learn
