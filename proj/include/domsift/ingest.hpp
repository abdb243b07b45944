#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domsift/csv.hpp"
#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/types.hpp"

namespace domsift::ingest {

enum class FeedFormat {
  Auto,       // rank format if the first record looks like "<int>,<name>", else headered
  Headered,   // header row naming `domain_column` (and `date_column` if set)
  Rank,       // headerless "rank,domain" top-list
};

struct FeedSpec {
  std::filesystem::path path;
  std::string feed_id;
  int label = 0;
  std::optional<std::string> date_column = std::string("first_seen");
  std::string domain_column = "domain";
  FeedFormat format = FeedFormat::Auto;
};

struct FeedRecord {
  Domain domain;
  int label = 0;
  std::optional<Date> first_seen;
};

struct LoadedFeed {
  std::string feed_id;
  std::vector<FeedRecord> records;
  std::size_t skipped = 0;
};

namespace detail {

inline bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace detail

inline LoadedFeed load_feed(const FeedSpec& spec) {
  if (spec.label != 0 && spec.label != 1)
    throw Error(ErrorCode::InvalidArgument, "feed label must be 0 or 1");
  std::ifstream in(spec.path);
  if (!in) throw Error(ErrorCode::FileNotFound, spec.path.string());

  LoadedFeed feed;
  feed.feed_id = spec.feed_id;

  auto first = csv::read_record(in);
  if (!first) return feed;

  auto add = [&](std::string_view raw_domain, std::optional<std::string_view> raw_date) {
    FeedRecord rec;
    rec.label = spec.label;
    try {
      rec.domain = parse_domain(raw_domain);
    } catch (const Error&) {
      ++feed.skipped;
      return;
    }
    if (raw_date && !raw_date->empty()) {
      auto d = try_parse_iso_date(*raw_date);
      if (!d) {
        ++feed.skipped;
        return;
      }
      rec.first_seen = d;
    }
    feed.records.push_back(std::move(rec));
  };

  FeedFormat format = spec.format;
  if (format == FeedFormat::Auto)
    format = (first->size() == 2 && detail::is_integer((*first)[0])) ? FeedFormat::Rank
                                                                     : FeedFormat::Headered;

  if (format == FeedFormat::Rank) {
    auto rec = std::move(first);
    do {
      if (rec->size() < 2) {
        ++feed.skipped;
        continue;
      }
      add((*rec)[1], std::nullopt);
    } while ((rec = csv::read_record(in)));
    return feed;
  }

  csv::Header header(std::move(*first));
  const std::string context = spec.path.string();
  std::size_t domain_col = header.require(spec.domain_column, context);
  std::optional<std::size_t> date_col;
  if (spec.date_column) date_col = header.find(*spec.date_column);

  while (auto rec = csv::read_record(in)) {
    if (rec->size() == 1 && (*rec)[0].empty()) continue;  // blank line
    if (domain_col >= rec->size()) {
      ++feed.skipped;
      continue;
    }
    std::optional<std::string_view> date;
    if (date_col && *date_col < rec->size()) date = (*rec)[*date_col];
    add((*rec)[domain_col], date);
  }
  return feed;
}

/// Loads every feed, one task per file.
inline std::vector<LoadedFeed> load_feeds(const std::vector<FeedSpec>& specs) {
  std::vector<std::future<LoadedFeed>> tasks;
  tasks.reserve(specs.size());
  for (const auto& spec : specs) tasks.push_back(std::async(std::launch::async, load_feed, spec));
  std::vector<LoadedFeed> out;
  out.reserve(specs.size());
  for (auto& t : tasks) out.push_back(t.get());
  return out;
}

struct LabelConflict {
  std::string domain;
  std::string kept_source;
  std::string dropped_source;
};

struct MergeResult {
  LabeledDataset dataset;
  std::size_t input_rows = 0;
  std::size_t dedup_drops = 0;
  std::vector<LabelConflict> conflicts;
};

/// Union keyed on Domain::raw, in first-appearance order. A malicious
/// label beats a benign one for the same name; between equal labels the
/// earliest first_seen wins (a dated record beats an undated one).
inline MergeResult merge_dedup(const std::vector<LoadedFeed>& feeds) {
  if (feeds.empty()) throw Error(ErrorCode::InvalidArgument, "merge_dedup needs at least one feed");

  MergeResult result;
  std::unordered_map<std::string, std::size_t> index;
  auto& rows = result.dataset.rows;

  for (const auto& feed : feeds) {
    for (const auto& rec : feed.records) {
      ++result.input_rows;
      auto [it, inserted] = index.try_emplace(rec.domain.raw, rows.size());
      if (inserted) {
        rows.push_back(LabeledRow{rec.domain, std::nullopt, rec.label, feed.feed_id, rec.first_seen});
        continue;
      }
      ++result.dedup_drops;
      LabeledRow& existing = rows[it->second];
      if (existing.label != rec.label) {
        if (rec.label == 1) {
          result.conflicts.push_back({rec.domain.raw, feed.feed_id, existing.source});
          existing.label = 1;
          existing.source = feed.feed_id;
          existing.first_seen = rec.first_seen;
        } else {
          result.conflicts.push_back({rec.domain.raw, existing.source, feed.feed_id});
        }
        continue;
      }
      if (rec.first_seen && (!existing.first_seen || *rec.first_seen < *existing.first_seen)) {
        existing.first_seen = rec.first_seen;
        existing.source = feed.feed_id;
      }
    }
  }
  return result;
}

/// Keeps rows first seen within [from, to]; undated rows always survive.
inline LabeledDataset filter_by_date(const LabeledDataset& ds, const Date& from, const Date& to) {
  if (to < from)
    throw Error(ErrorCode::InvalidRange, format_date(from) + " is after " + format_date(to));
  LabeledDataset out;
  out.coverage = ds.coverage;
  for (const auto& row : ds.rows) {
    if (!row.first_seen || (*row.first_seen >= from && *row.first_seen <= to)) out.rows.push_back(row);
  }
  return out;
}

struct WhoisPartition {
  LabeledDataset with_lifetime;     // F1 present
  LabeledDataset without_lifetime;  // F1 absent
};

inline WhoisPartition partition_by_whois(const LabeledDataset& ds) {
  WhoisPartition p;
  p.with_lifetime.coverage = WhoisCoverage::Complete;
  p.without_lifetime.coverage = WhoisCoverage::Missing;
  for (const auto& row : ds.rows) {
    if (!row.features)
      throw Error(ErrorCode::InvalidArgument, "partition_by_whois: features not extracted for " + row.domain.raw);
    (row.features->f1_reg_lifetime_days ? p.with_lifetime : p.without_lifetime).rows.push_back(row);
  }
  return p;
}

// Canonical dataset CSV: domain,label,source,first_seen

inline void write_dataset(std::ostream& out, const LabeledDataset& ds) {
  csv::write_record(out, {"domain", "label", "source", "first_seen"});
  for (const auto& row : ds.rows) {
    csv::write_record(out, {row.domain.raw, std::to_string(row.label), row.source,
                            row.first_seen ? format_date(*row.first_seen) : std::string()});
  }
}

inline LabeledDataset read_dataset(std::istream& in, std::string_view context = "dataset") {
  LabeledDataset ds;
  auto first = csv::read_record(in);
  if (!first) throw Error(ErrorCode::SchemaMismatch, std::string(context) + ": empty file");
  csv::Header header(std::move(*first));
  const std::size_t c_domain = header.require("domain", context);
  const std::size_t c_label = header.require("label", context);
  const auto c_source = header.find("source");
  const auto c_seen = header.find("first_seen");

  while (auto rec = csv::read_record(in)) {
    if (rec->size() == 1 && (*rec)[0].empty()) continue;
    if (rec->size() <= std::max(c_domain, c_label))
      throw Error(ErrorCode::SchemaMismatch, std::string(context) + ": short row");
    LabeledRow row;
    row.domain = parse_domain((*rec)[c_domain]);
    const std::string& lab = (*rec)[c_label];
    if (lab != "0" && lab != "1")
      throw Error(ErrorCode::SchemaMismatch, std::string(context) + ": label must be 0 or 1, got '" + lab + "'");
    row.label = lab == "1" ? 1 : 0;
    if (c_source && *c_source < rec->size()) row.source = (*rec)[*c_source];
    if (c_seen && *c_seen < rec->size() && !(*rec)[*c_seen].empty())
      row.first_seen = parse_iso_date((*rec)[*c_seen]);
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

inline void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  write_dataset(out, ds);
}

inline LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return read_dataset(in, path.string());
}

}  // namespace domsift::ingest
