#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "domsift/error.hpp"
#include "domsift/learn/ensemble.hpp"
#include "domsift/types.hpp"
#include "json.hpp"

namespace domsift::eval {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded train/test split over row indices. Stratified mode shuffles each
/// class on its own and sends floor(fraction * n_class) of it to train.
inline SplitIndices split_indices(std::span<const int> labels, double train_fraction, std::uint64_t seed,
                                  bool stratified = true) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  if (labels.size() < 2) throw Error(ErrorCode::TooFewSamples, "split needs at least 2 rows");

  std::mt19937_64 rng(seed);
  SplitIndices out;
  auto take = [&](std::vector<std::size_t> idx) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto cut = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(idx.size())));
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  };

  if (stratified) {
    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (neg.size() < 2 || pos.size() < 2)
      throw Error(ErrorCode::ClassTooSmall, "each class needs at least 2 rows for a stratified split");
    take(std::move(neg));
    take(std::move(pos));
  } else {
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

inline std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds, double train_fraction,
                                                               std::uint64_t seed, bool stratified = true) {
  std::vector<int> labels;
  labels.reserve(ds.size());
  for (const auto& r : ds.rows) labels.push_back(r.label);
  const auto idx = split_indices(labels, train_fraction, seed, stratified);
  LabeledDataset train, test;
  train.coverage = test.coverage = ds.coverage;
  for (std::size_t i : idx.train) train.rows.push_back(ds.rows[i]);
  for (std::size_t i : idx.test) test.rows.push_back(ds.rows[i]);
  return {std::move(train), std::move(test)};
}

/// Positive class is 1 (malicious).
inline ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
  if (truth.empty()) throw Error(ErrorCode::EmptyCounts, "no rows to tally");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == 1, p = predicted[i] == 1;
    if (t && p) ++c.tp;
    else if (!t && !p) ++c.tn;
    else if (!t && p) ++c.fp;
    else ++c.fn;
  }
  return c;
}

struct Metrics {
  double acc = 0.0;
  std::optional<double> fpr;
  std::optional<double> fnr;
};

/// ACC = (TP+TN)/total, FPR = FP/(FP+TN), FNR = FN/(FN+TP); a rate whose
/// denominator is zero is absent.
inline Metrics metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(ErrorCode::EmptyCounts, "metrics of an empty tally");
  Metrics m;
  m.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.fp + c.tn > 0) m.fpr = static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
  if (c.fn + c.tp > 0) m.fnr = static_cast<double>(c.fn) / static_cast<double>(c.fn + c.tp);
  return m;
}

/// Threshold sweep over every distinct score (positive when score >=
/// threshold), bracketed by (0,0) and (1,1) and sorted by (fpr, tpr).
inline std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "scores and labels differ in length");
  std::size_t P = 0, N = 0;
  for (int l : labels) (l == 1 ? P : N)++;
  if (P == 0 || N == 0) throw Error(ErrorCode::SingleClass, "ROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> pts{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    while (k < order.size() && scores[order[k]] == threshold) {
      (labels[order[k]] == 1 ? tp : fp)++;
      ++k;
    }
    pts.push_back({static_cast<double>(fp) / static_cast<double>(N), static_cast<double>(tp) / static_cast<double>(P)});
  }
  pts.push_back({1.0, 1.0});
  std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Trapezoidal area under a ROC point list.
inline double auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  return area;
}

/// Assembles counts, rates, ROC and AUC for one classifier's outputs.
inline EvalReport evaluate_scores(std::string name, std::span<const int> truth, std::span<const int> predicted,
                                  std::span<const double> scores) {
  EvalReport r;
  r.classifier_name = std::move(name);
  r.counts = confusion(truth, predicted);
  const Metrics m = metrics(r.counts);
  r.acc = m.acc;
  r.fpr = m.fpr;
  r.fnr = m.fnr;
  const bool both = r.counts.tp + r.counts.fn > 0 && r.counts.tn + r.counts.fp > 0;
  if (both) {
    r.roc_points = roc_curve(scores, truth);
    r.auc = auc(r.roc_points);
  }
  return r;
}

struct Evaluation {
  std::vector<EvalReport> members;
  EvalReport ensemble;
};

/// Scores every test row with each member and with the vote; ensemble
/// ranking uses the vote fraction.
inline Evaluation evaluate(const learn::EnsembleModel& model, const std::vector<FeatureVector>& rows,
                           const std::vector<int>& labels) {
  if (rows.empty()) throw Error(ErrorCode::EmptyData, "empty test set");
  if (rows.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "labels do not match rows");
  const std::size_t K = model.size();
  std::vector<std::vector<int>> member_labels(K);
  std::vector<std::vector<double>> member_scores(K);
  std::vector<int> ens_labels;
  std::vector<double> ens_scores;
  for (const auto& row : rows) {
    const auto pred = learn::ensemble_predict(model, row);
    for (std::size_t k = 0; k < K; ++k) {
      member_labels[k].push_back(pred.members[k].label);
      member_scores[k].push_back(pred.members[k].score);
    }
    ens_labels.push_back(pred.label);
    ens_scores.push_back(pred.score);
  }
  Evaluation out;
  for (std::size_t k = 0; k < K; ++k)
    out.members.push_back(
        evaluate_scores(learn::display_name(model.members[k].name), labels, member_labels[k], member_scores[k]));
  out.ensemble = evaluate_scores("Ensemble", labels, ens_labels, ens_scores);
  return out;
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::json to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json roc = nlohmann::json::array();
  for (const auto& p : r.roc_points) roc.push_back({p.fpr, p.tpr});
  return {
      {"classifier", r.classifier_name},
      {"counts", {{"tp", r.counts.tp}, {"tn", r.counts.tn}, {"fp", r.counts.fp}, {"fn", r.counts.fn}}},
      {"acc", r.acc},
      {"fpr", opt(r.fpr)},
      {"fnr", opt(r.fnr)},
      {"auc", opt(r.auc)},
      {"roc", std::move(roc)},
  };
}

inline nlohmann::json to_json(const Evaluation& e) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : e.members) rows.push_back(to_json(m));
  rows.push_back(to_json(e.ensemble));
  return {{"classifiers", std::move(rows)}};
}

/// classifier,ACC,FPR,FNR,AUC with one row per member then the ensemble.
inline void write_table_csv(std::ostream& out, const Evaluation& e) {
  out << "classifier,ACC,FPR,FNR,AUC\n";
  out.precision(6);
  out << std::fixed;
  auto cell = [&](const std::optional<double>& v) {
    if (v) out << *v;
  };
  auto row = [&](const EvalReport& r) {
    out << r.classifier_name << ',' << r.acc << ',';
    cell(r.fpr);
    out << ',';
    cell(r.fnr);
    out << ',';
    cell(r.auc);
    out << '\n';
  };
  for (const auto& m : e.members) row(m);
  row(e.ensemble);
  out.unsetf(std::ios::floatfield);
}

inline void write_roc_csv(std::ostream& out, std::span<const RocPoint> points) {
  out << "fpr,tpr\n";
  out.precision(17);
  for (const auto& p : points) out << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace domsift::eval
