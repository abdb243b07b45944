#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domsift/date.hpp"
#include "domsift/domain.hpp"

namespace domsift {

/// Registration facts for one domain as parsed from a WHOIS response.
struct WhoisRecord {
  Domain domain;
  std::optional<Date> created;
  std::optional<Date> expires;
  std::optional<Date> updated;
  std::optional<std::string> registrar_raw;
  std::optional<std::string> registrar_canonical;
  Date fetched_on;
};

inline constexpr std::size_t kFeatureCount = 17;

/// F1..F17. WHOIS-derived counts are optional; absence is never encoded
/// as a sentinel number.
struct FeatureVector {
  std::optional<long> f1_reg_lifetime_days;
  std::optional<long> f2_remaining_days;
  std::optional<long> f3_days_since_update;
  long f4_dot_count = 0;
  double f5_entropy = 0.0;
  long f6_length = 0;
  long f7_digit_count = 0;
  long f8_hyphen_count = 0;
  long f9_vowel_count = 0;
  double f10_digit_pct = 0.0;
  long f11_unique_alnum = 0;
  int f12_tld_generic = 0;
  int f13_tld_unknown = 0;
  int f14_tld_abused = 0;
  int f15_reg_popular = 0;
  int f16_reg_notpopular = 0;
  int f17_reg_bad = 0;

  /// Feature by zero-based index (0 == F1).
  std::optional<double> value(std::size_t index) const {
    auto opt = [](const std::optional<long>& v) -> std::optional<double> {
      if (!v) return std::nullopt;
      return static_cast<double>(*v);
    };
    switch (index) {
      case 0: return opt(f1_reg_lifetime_days);
      case 1: return opt(f2_remaining_days);
      case 2: return opt(f3_days_since_update);
      case 3: return static_cast<double>(f4_dot_count);
      case 4: return f5_entropy;
      case 5: return static_cast<double>(f6_length);
      case 6: return static_cast<double>(f7_digit_count);
      case 7: return static_cast<double>(f8_hyphen_count);
      case 8: return static_cast<double>(f9_vowel_count);
      case 9: return f10_digit_pct;
      case 10: return static_cast<double>(f11_unique_alnum);
      case 11: return static_cast<double>(f12_tld_generic);
      case 12: return static_cast<double>(f13_tld_unknown);
      case 13: return static_cast<double>(f14_tld_abused);
      case 14: return static_cast<double>(f15_reg_popular);
      case 15: return static_cast<double>(f16_reg_notpopular);
      case 16: return static_cast<double>(f17_reg_bad);
      default: return std::nullopt;
    }
  }

  std::array<std::optional<double>, kFeatureCount> values() const {
    std::array<std::optional<double>, kFeatureCount> out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = value(i);
    return out;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// "F1".."F17"
inline std::string feature_name(std::size_t index) { return "F" + std::to_string(index + 1); }

enum class Label : int { Benign = 0, Malicious = 1 };

struct LabeledRow {
  Domain domain;
  std::optional<FeatureVector> features;
  int label = 0;
  std::string source;
  std::optional<Date> first_seen;
};

/// Which WHOIS regime the rows are known to satisfy. `Complete` and
/// `Missing` correspond to the with/without registration-lifetime
/// partitions; `Mixed` is everything before partitioning.
enum class WhoisCoverage { Mixed, Complete, Missing };

struct LabeledDataset {
  std::vector<LabeledRow> rows;
  WhoisCoverage coverage = WhoisCoverage::Mixed;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct EvalReport {
  std::string classifier_name;
  ConfusionCounts counts;
  double acc = 0.0;
  std::optional<double> fpr;  // absent when the test set has no negatives
  std::optional<double> fnr;  // absent when the test set has no positives
  std::optional<double> auc;  // absent for single-class test sets
  std::vector<RocPoint> roc_points;
};

}  // namespace domsift
