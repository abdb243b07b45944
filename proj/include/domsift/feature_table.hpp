#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "domsift/csv.hpp"
#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/types.hpp"

namespace domsift::table {

/// Extracted feature rows as exchanged between CLI stages:
///
///   # reference_date=2020-05-16
///   domain,label,f1,...,f17
///
/// Absent values are empty cells.
struct FeatureTable {
  std::optional<Date> reference_date;
  std::vector<Domain> domains;
  std::vector<int> labels;
  std::vector<FeatureVector> rows;

  std::size_t size() const { return rows.size(); }
};

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string cell(const std::optional<double>& v) {
  if (!v) return {};
  const double d = *v;
  if (d == static_cast<double>(static_cast<long>(d)) && d > -1e15 && d < 1e15) return std::to_string(static_cast<long>(d));
  return format_number(d);
}

inline std::optional<double> parse_number(const std::string& s, std::string_view context) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::SchemaMismatch, std::string(context) + ": not a number '" + s + "'");
  return v;
}

inline long as_count(const std::optional<double>& v, std::string_view context) {
  if (!v) throw Error(ErrorCode::SchemaMismatch, std::string(context) + ": lexical feature cannot be empty");
  return static_cast<long>(*v);
}

}  // namespace detail

inline void write_feature_table(std::ostream& out, const FeatureTable& t) {
  if (t.reference_date) out << "# reference_date=" << format_date(*t.reference_date) << '\n';
  csv::Record header{"domain", "label"};
  for (std::size_t i = 0; i < kFeatureCount; ++i) header.push_back("f" + std::to_string(i + 1));
  csv::write_record(out, header);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    csv::Record rec{t.domains[r].raw, std::to_string(t.labels[r])};
    for (std::size_t i = 0; i < kFeatureCount; ++i) rec.push_back(detail::cell(t.rows[r].value(i)));
    csv::write_record(out, rec);
  }
}

inline FeatureTable read_feature_table(std::istream& in, std::string_view context = "features") {
  const std::string ctx(context);
  FeatureTable t;
  std::vector<std::string> comments;
  auto first = csv::read_record(in, &comments);
  if (!first) throw Error(ErrorCode::SchemaMismatch, ctx + ": empty file");
  for (const auto& c : comments) {
    const auto pos = c.find("reference_date=");
    if (pos != std::string::npos) t.reference_date = parse_iso_date(c.substr(pos + 15));
  }
  csv::Header header(std::move(*first));
  const std::size_t c_domain = header.require("domain", ctx);
  const std::size_t c_label = header.require("label", ctx);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < kFeatureCount; ++i) cols.push_back(header.require("f" + std::to_string(i + 1), ctx));

  while (auto rec = csv::read_record(in)) {
    if (rec->size() == 1 && (*rec)[0].empty()) continue;
    if (rec->size() != header.names().size()) throw Error(ErrorCode::SchemaMismatch, ctx + ": row width differs from header");
    const std::string& lab = (*rec)[c_label];
    if (lab != "0" && lab != "1") throw Error(ErrorCode::SchemaMismatch, ctx + ": label must be 0 or 1");
    std::vector<std::optional<double>> v;
    for (std::size_t c : cols) v.push_back(detail::parse_number((*rec)[c], ctx));

    FeatureVector f;
    auto opt_count = [](const std::optional<double>& x) -> std::optional<long> {
      if (!x) return std::nullopt;
      return static_cast<long>(*x);
    };
    f.f1_reg_lifetime_days = opt_count(v[0]);
    f.f2_remaining_days = opt_count(v[1]);
    f.f3_days_since_update = opt_count(v[2]);
    f.f4_dot_count = detail::as_count(v[3], ctx);
    if (!v[4]) throw Error(ErrorCode::SchemaMismatch, ctx + ": f5 cannot be empty");
    f.f5_entropy = *v[4];
    f.f6_length = detail::as_count(v[5], ctx);
    f.f7_digit_count = detail::as_count(v[6], ctx);
    f.f8_hyphen_count = detail::as_count(v[7], ctx);
    f.f9_vowel_count = detail::as_count(v[8], ctx);
    if (!v[9]) throw Error(ErrorCode::SchemaMismatch, ctx + ": f10 cannot be empty");
    f.f10_digit_pct = *v[9];
    f.f11_unique_alnum = detail::as_count(v[10], ctx);
    f.f12_tld_generic = static_cast<int>(detail::as_count(v[11], ctx));
    f.f13_tld_unknown = static_cast<int>(detail::as_count(v[12], ctx));
    f.f14_tld_abused = static_cast<int>(detail::as_count(v[13], ctx));
    f.f15_reg_popular = static_cast<int>(detail::as_count(v[14], ctx));
    f.f16_reg_notpopular = static_cast<int>(detail::as_count(v[15], ctx));
    f.f17_reg_bad = static_cast<int>(detail::as_count(v[16], ctx));

    t.domains.push_back(parse_domain((*rec)[c_domain]));
    t.labels.push_back(lab == "1" ? 1 : 0);
    t.rows.push_back(f);
  }
  return t;
}

inline void save_feature_table(const std::filesystem::path& path, const FeatureTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  write_feature_table(out, t);
}

inline FeatureTable load_feature_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return read_feature_table(in, path.string());
}

/// Converts a dataset whose rows carry features.
inline FeatureTable from_dataset(const LabeledDataset& ds, std::optional<Date> reference_date) {
  FeatureTable t;
  t.reference_date = reference_date;
  for (const auto& row : ds.rows) {
    if (!row.features) throw Error(ErrorCode::InvalidArgument, "row " + row.domain.raw + " has no features");
    t.domains.push_back(row.domain);
    t.labels.push_back(row.label);
    t.rows.push_back(*row.features);
  }
  return t;
}

inline LabeledDataset to_dataset(const FeatureTable& t) {
  LabeledDataset ds;
  for (std::size_t i = 0; i < t.size(); ++i) {
    LabeledRow row;
    row.domain = t.domains[i];
    row.label = t.labels[i];
    row.features = t.rows[i];
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

}  // namespace domsift::table
