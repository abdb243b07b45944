// domsift command-line front end. Stages exchange files; every command
// writes JSON or headered CSV. Exit codes: 0 ok, 1 runtime failure,
// 2 usage or schema error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/eval.hpp"
#include "domsift/feature_table.hpp"
#include "domsift/features.hpp"
#include "domsift/ingest.hpp"
#include "domsift/learn/ensemble.hpp"
#include "domsift/segment.hpp"
#include "domsift/select.hpp"
#include "domsift/synthetic.hpp"
#include "domsift/whois.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace domsift;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDate:
    case ErrorCode::InvalidRange:
    case ErrorCode::VersionMismatch:
    case ErrorCode::CorruptPayload:
    case ErrorCode::IllegalCharacter:
    case ErrorCode::EmptyInput:
      return 2;
    default:
      return 1;
  }
}

std::string data_path(const std::string& file) {
  if (const char* dir = std::getenv("DOMSIFT_DATA"); dir && *dir) return (fs::path(dir) / file).string();
  return (fs::path(DOMSIFT_DATA_DIR) / file).string();
}

std::string default_cache() {
  if (const char* c = std::getenv("DOMSIFT_CACHE"); c && *c) return c;
  return "whois_cache.jsonl";
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << bytes;
}

/// "path:label:source", split from the right so paths may contain ':'.
ingest::FeedSpec parse_feed_flag(const std::string& flag) {
  const auto last = flag.rfind(':');
  const auto mid = last == std::string::npos || last == 0 ? std::string::npos : flag.rfind(':', last - 1);
  if (mid == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "--feed expects path:label:source, got '" + flag + "'");
  ingest::FeedSpec spec;
  spec.path = flag.substr(0, mid);
  const std::string label = flag.substr(mid + 1, last - mid - 1);
  spec.feed_id = flag.substr(last + 1);
  if (label == "1" || label == "malicious") spec.label = 1;
  else if (label == "0" || label == "benign") spec.label = 0;
  else throw Error(ErrorCode::InvalidArgument, "feed label must be 0/1 or benign/malicious, got '" + label + "'");
  if (spec.feed_id.empty()) throw Error(ErrorCode::InvalidArgument, "empty source id in --feed " + flag);
  return spec;
}

struct ListOptions {
  std::string tld_lists;
  std::string registrar_lists;

  features::TldLists tlds() const {
    return tld_lists.empty() ? features::TldLists::defaults() : features::load_tld_lists(tld_lists);
  }
  features::RegistrarLists registrars() const {
    return registrar_lists.empty() ? features::RegistrarLists::defaults()
                                   : features::load_registrar_lists(registrar_lists);
  }
};

std::optional<WhoisRecord> cached_record(const whois::WhoisCache* cache, const Domain& d,
                                         const features::RegistrarLists& lists) {
  if (!cache) return std::nullopt;
  auto hit = cache->find(d.raw);
  if (!hit) return std::nullopt;
  return whois::parse_whois(hit->raw, d, hit->fetched_on, lists);
}

json selection_json(const std::vector<std::size_t>& ids) {
  json names = json::array();
  for (auto i : ids) names.push_back(feature_name(i));
  return {{"indices", ids}, {"features", names}};
}

std::vector<std::size_t> read_selection(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
    return j.at("indices").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
  }
}

std::vector<select::Column> columns_of(const table::FeatureTable& t) {
  std::vector<select::Column> cols(kFeatureCount);
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < kFeatureCount; ++i) cols[i].push_back(row.value(i));
  return cols;
}

table::FeatureTable subset(const table::FeatureTable& t, const std::vector<std::size_t>& idx) {
  table::FeatureTable out;
  out.reference_date = t.reference_date;
  for (auto i : idx) {
    out.domains.push_back(t.domains[i]);
    out.labels.push_back(t.labels[i]);
    out.rows.push_back(t.rows[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> feeds;
  std::string out;
  std::string from, to;
  std::string date_column = "first_seen";
  std::string domain_column = "domain";
};

int run_ingest(const IngestArgs& a) {
  std::vector<ingest::FeedSpec> specs;
  for (const auto& f : a.feeds) {
    auto s = parse_feed_flag(f);
    s.date_column = a.date_column;
    s.domain_column = a.domain_column;
    specs.push_back(std::move(s));
  }
  const auto loaded = ingest::load_feeds(specs);
  auto merged = ingest::merge_dedup(loaded);
  LabeledDataset ds = std::move(merged.dataset);
  const std::size_t before = ds.size();
  if (!a.from.empty() || !a.to.empty()) {
    const Date from = a.from.empty() ? make_date(1, 1, 1) : parse_iso_date(a.from);
    const Date to = a.to.empty() ? make_date(9999, 12, 31) : parse_iso_date(a.to);
    ds = ingest::filter_by_date(ds, from, to);
  }
  ingest::save_dataset(a.out, ds);

  json skipped = json::object();
  for (const auto& f : loaded) skipped[f.feed_id] = f.skipped;
  json conflicts = json::array();
  for (const auto& c : merged.conflicts)
    conflicts.push_back({{"domain", c.domain}, {"kept", c.kept_source}, {"dropped", c.dropped_source}});
  std::size_t mal = 0;
  for (const auto& r : ds.rows) mal += r.label == 1;
  emit({{"rows", ds.size()},
        {"malicious", mal},
        {"benign", ds.size() - mal},
        {"input_rows", merged.input_rows},
        {"skipped", skipped},
        {"dedup_drops", merged.dedup_drops},
        {"date_filtered", before - ds.size()},
        {"conflicts", merged.conflicts.size()},
        {"conflict_details", conflicts},
        {"out", a.out}});
  return 0;
}

struct WhoisArgs {
  std::string in;
  std::string cache = default_cache();
  double timeout = 10.0;
  double rate = 1.0;
  bool offline = false;
};

int run_whois_fetch(const WhoisArgs& a) {
  const LabeledDataset ds = ingest::load_dataset(a.in);
  whois::WhoisCache cache(a.cache);
  whois::ClientOptions opts;
  opts.network_enabled = !a.offline;
  opts.rate_spacing = whois::Seconds(a.rate);
  whois::WhoisClient client(std::make_shared<whois::TcpTransport>(whois::proxy_from_env()), opts);
  const Date today = today_utc();

  std::size_t fetched = 0, hits = 0, failures = 0;
  std::map<std::string, std::size_t> errors;
  for (const auto& row : ds.rows) {
    if (cache.find(row.domain.raw)) {
      ++hits;
      continue;
    }
    try {
      whois::fetch_or_cache(row.domain, cache, client, whois::Seconds(a.timeout), today);
      ++fetched;
    } catch (const Error& e) {
      ++failures;
      ++errors[std::string(to_string(e.code()))];
    }
  }
  emit({{"rows", ds.size()},
        {"fetched", fetched},
        {"cache_hits", hits},
        {"failures", failures},
        {"errors", errors},
        {"cache", a.cache}});
  return 0;
}

struct ExtractArgs {
  std::string in, out, cache, reference_date;
  ListOptions lists;
};

int run_extract(const ExtractArgs& a) {
  const LabeledDataset ds = ingest::load_dataset(a.in);
  const Date ref = a.reference_date.empty() ? today_utc() : parse_iso_date(a.reference_date);
  const auto tlds = a.lists.tlds();
  const auto regs = a.lists.registrars();
  std::unique_ptr<whois::WhoisCache> cache;
  if (!a.cache.empty()) cache = std::make_unique<whois::WhoisCache>(a.cache);

  table::FeatureTable t;
  t.reference_date = ref;
  std::size_t with_whois = 0, with_lifetime = 0;
  for (const auto& row : ds.rows) {
    const auto rec = cached_record(cache.get(), row.domain, regs);
    with_whois += rec.has_value();
    t.domains.push_back(row.domain);
    t.labels.push_back(row.label);
    t.rows.push_back(features::extract_all(row.domain, rec, tlds, regs, ref));
    with_lifetime += t.rows.back().f1_reg_lifetime_days.has_value();
  }
  table::save_feature_table(a.out, t);
  emit({{"rows", t.size()},
        {"with_whois", with_whois},
        {"with_lifetime", with_lifetime},
        {"reference_date", format_date(ref)},
        {"out", a.out}});
  return 0;
}

struct SelectArgs {
  std::string in, out, preset, matrix;
  double threshold = 0.60;
};

int run_select(const SelectArgs& a) {
  json result;
  std::optional<select::CorrelationMatrix> m;
  if (!a.in.empty()) {
    const auto t = table::load_feature_table(a.in);
    m = select::correlation_matrix(columns_of(t));
  }
  if (!a.preset.empty()) {
    const auto ids = select::preset(a.preset);
    if (!ids) throw Error(ErrorCode::InvalidArgument, "unknown preset '" + a.preset + "' (paper-d1, paper-d2)");
    result = selection_json(*ids);
    result["preset"] = a.preset;
  } else {
    if (!m) throw Error(ErrorCode::InvalidArgument, "--in is required unless --preset is given");
    result = selection_json(select::prune(*m, a.threshold));
    result["threshold"] = a.threshold;
  }
  if (m) {
    json constant = json::array();
    for (std::size_t i = 0; i < m->size(); ++i)
      if (m->constant[i]) constant.push_back(feature_name(m->feature_ids[i]));
    result["constant"] = constant;
  }
  if (!a.matrix.empty()) {
    if (!m) throw Error(ErrorCode::InvalidArgument, "--matrix needs --in");
    std::ofstream out(a.matrix);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + a.matrix);
    select::write_matrix_csv(out, *m);
  }
  write_file(a.out, result.dump(2) + "\n");
  emit(result);
  return 0;
}

struct TrainArgs {
  std::string in, selection, out, test_out, train_out;
  std::string models = "rf,dt,knn,lr";
  std::string partition = "all";
  std::uint64_t seed = 42;
  double split = 0.8;
  bool no_stratify = false;
  learn::EnsembleOptions opts;
  std::size_t trees = 100, forest_max_features = 0, max_depth = 12, min_leaf = 5;
  bool no_bootstrap = false;
  unsigned threads = 0;
  std::size_t repeats = 1;
};

int run_train(TrainArgs a) {
  auto all = table::load_feature_table(a.in);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool has_f1 = all.rows[i].f1_reg_lifetime_days.has_value();
    if (a.partition == "all" || (a.partition == "d1" && has_f1) || (a.partition == "d2" && !has_f1)) keep.push_back(i);
  }
  if (a.partition != "all" && a.partition != "d1" && a.partition != "d2")
    throw Error(ErrorCode::InvalidArgument, "--partition must be all, d1 or d2");
  const auto t = subset(all, keep);
  if (t.size() == 0) throw Error(ErrorCode::EmptyData, "no rows in partition " + a.partition);

  a.opts.models.clear();
  std::stringstream ss(a.models);
  for (std::string m; std::getline(ss, m, ',');)
    if (!m.empty()) a.opts.models.push_back(m);
  a.opts.tree.max_depth = a.max_depth;
  a.opts.tree.min_leaf = a.min_leaf;
  a.opts.forest.n_trees = a.trees;
  a.opts.forest.max_features = a.forest_max_features;
  a.opts.forest.bootstrap = !a.no_bootstrap;
  a.opts.forest.tree = a.opts.tree;
  a.opts.forest.threads = a.threads;
  if (a.repeats == 0) throw Error(ErrorCode::InvalidArgument, "--repeats must be at least 1");

  struct Run {
    table::FeatureTable train, test;
    learn::EnsembleModel model;
    std::vector<std::string> dropped;
  };
  auto fit_once = [&](std::uint64_t seed) {
    Run r;
    const auto split = eval::split_indices(t.labels, a.split, seed, !a.no_stratify);
    r.train = subset(t, split.train);
    r.test = subset(t, split.test);
    std::vector<std::size_t> selected = a.selection.empty()
                                            ? select::prune(select::correlation_matrix(columns_of(r.train)), 0.60)
                                            : read_selection(a.selection);
    if (a.partition == "d2") {
      std::vector<std::size_t> s;
      for (auto i : selected) (i == 0 ? r.dropped.push_back(feature_name(i)) : s.push_back(i));
      selected = s;
    }
    auto opts = a.opts;
    opts.seed = seed;
    r.model = learn::fit_ensemble(r.train.rows, r.train.labels, selected, opts);
    return r;
  };

  const Run first = fit_once(a.seed);
  const auto& model = first.model;
  const auto& train = first.train;
  const auto& test = first.test;
  const auto& dropped = first.dropped;
  write_file(a.out, learn::serialize_model(model));
  if (!a.test_out.empty()) table::save_feature_table(a.test_out, test);
  if (!a.train_out.empty()) table::save_feature_table(a.train_out, train);

  // Per-classifier metric samples over seeds seed, seed+1, ...
  std::map<std::string, std::map<std::string, std::vector<double>>> samples;
  std::vector<std::string> order;
  if (a.repeats > 1) {
    auto record = [&](const EvalReport& r) {
      if (!samples.count(r.classifier_name)) order.push_back(r.classifier_name);
      auto& s = samples[r.classifier_name];
      s["acc"].push_back(r.acc);
      if (r.fpr) s["fpr"].push_back(*r.fpr);
      if (r.fnr) s["fnr"].push_back(*r.fnr);
      if (r.auc) s["auc"].push_back(*r.auc);
    };
    auto score = [&](const Run& run) {
      const auto e = eval::evaluate(run.model, run.test.rows, run.test.labels);
      for (const auto& m : e.members) record(m);
      record(e.ensemble);
    };
    score(first);
    for (std::size_t k = 1; k < a.repeats; ++k) score(fit_once(a.seed + k));
  }

  json members = json::array();
  for (const auto& m : model.members) members.push_back(learn::display_name(m.name));
  json summary = {{"train_rows", train.size()}, {"test_rows", test.size()},   {"members", members},
                  {"selected", selection_json(model.selected_features)["features"]},
                  {"seed", a.seed}, {"partition", a.partition}, {"model", a.out}};
  if (!dropped.empty()) summary["dropped_for_partition"] = dropped;
  if (!a.test_out.empty()) summary["test_out"] = a.test_out;
  if (a.repeats > 1) {
    json rep = json::array();
    for (const auto& name : order) {
      json row = {{"classifier", name}};
      for (const auto& [metric, xs] : samples[name]) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
        row[metric] = {{"mean", mean}, {"stddev", sd}, {"n", xs.size()}};
      }
      rep.push_back(row);
    }
    summary["repeats"] = {{"count", a.repeats}, {"classifiers", rep}};
  }
  emit(summary);
  return 0;
}

struct EvaluateArgs {
  std::string model, in, out, roc, table;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto model = learn::deserialize_model(read_file(a.model));
  const auto t = table::load_feature_table(a.in);
  const auto result = eval::evaluate(model, t.rows, t.labels);
  json report = eval::to_json(result);
  report["rows"] = t.size();
  if (t.reference_date) report["reference_date"] = format_date(*t.reference_date);
  if (!a.out.empty()) write_file(a.out, report.dump(2) + "\n");
  if (!a.roc.empty()) {
    std::ofstream out(a.roc);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + a.roc);
    eval::write_roc_csv(out, result.ensemble.roc_points);
  }
  if (!a.table.empty()) {
    std::ofstream out(a.table);
    if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + a.table);
    eval::write_table_csv(out, result);
  }
  emit(report);
  return 0;
}

struct PredictArgs {
  std::string model, domain, in, cache, reference_date;
  ListOptions lists;
};

int run_predict(const PredictArgs& a) {
  if (a.domain.empty() == a.in.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --domain or --in");
  const auto model = learn::deserialize_model(read_file(a.model));

  std::vector<Domain> domains;
  std::vector<FeatureVector> rows;
  std::optional<Date> ref;
  if (!a.in.empty()) {
    std::ifstream probe(a.in);
    if (!probe) throw Error(ErrorCode::FileNotFound, a.in);
    std::string first;
    while (std::getline(probe, first) && !first.empty() && first[0] == '#') {
    }
    if (first.find(",f1,") != std::string::npos || first.find(",f1") != std::string::npos) {
      auto t = table::load_feature_table(a.in);
      domains = t.domains;
      rows = t.rows;
      ref = t.reference_date;
    } else {
      for (const auto& r : ingest::load_dataset(a.in).rows) domains.push_back(r.domain);
    }
  } else {
    domains.push_back(parse_domain(a.domain));
  }
  if (rows.empty()) {
    ref = a.reference_date.empty() ? today_utc() : parse_iso_date(a.reference_date);
    const auto tlds = a.lists.tlds();
    const auto regs = a.lists.registrars();
    std::unique_ptr<whois::WhoisCache> cache;
    if (!a.cache.empty()) cache = std::make_unique<whois::WhoisCache>(a.cache);
    for (const auto& d : domains) rows.push_back(features::extract_all(d, cached_record(cache.get(), d, regs), tlds, regs, *ref));
  }

  csv::Record header{"domain", "label", "score"};
  for (const auto& m : model.members) header.push_back(learn::display_name(m.name));
  csv::write_record(std::cout, header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto p = learn::ensemble_predict(model, rows[i]);
    csv::Record rec{domains[i].raw, std::to_string(p.label), table::detail::format_number(p.score)};
    for (const auto& m : p.members) rec.push_back(std::to_string(m.label));
    csv::write_record(std::cout, rec);
  }
  return 0;
}

struct SegmentArgs {
  std::vector<std::string> words;
  std::string model = data_path("words.txt");
  std::string boost = data_path("boost.txt");
  bool no_boost = false;
};

int run_segment(const SegmentArgs& a) {
  const auto lm = segment::load_language_model(a.model, a.no_boost ? fs::path() : fs::path(a.boost));
  json out = json::array();
  for (const auto& w : a.words) {
    const Domain d = parse_domain(w);
    out.push_back({{"input", w}, {"tokens", segment::segment_keywords(d.label_part, lm)}});
  }
  emit({{"vocabulary", lm.size()}, {"boosted", lm.boosted_count()}, {"segments", out}});
  return 0;
}

struct SynthArgs {
  std::string out;
  synthetic::Params params;
  std::string reference_date = "2020-05-16";
};

int run_synth(SynthArgs a) {
  a.params.reference_date = parse_iso_date(a.reference_date);
  const auto ds = synthetic::generate(a.params);
  table::save_feature_table(a.out, table::from_dataset(ds, a.params.reference_date));
  std::size_t mal = 0;
  for (const auto& r : ds.rows) mal += r.label == 1;
  emit({{"rows", ds.size()}, {"malicious", mal}, {"benign", ds.size() - mal}, {"seed", a.params.seed},
        {"reference_date", a.reference_date}, {"out", a.out}});
  return 0;
}

void add_list_flags(CLI::App* cmd, ListOptions& l) {
  cmd->add_option("--tld-lists", l.tld_lists, "JSON file with generic/abused TLD lists");
  cmd->add_option("--registrar-lists", l.registrar_lists, "JSON file with registrar lists");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"domsift: themed malicious-domain detection pipeline"};
  app.require_subcommand(1);

  IngestArgs ing;
  auto* c_ing = app.add_subcommand("ingest", "Load, label, merge and date-filter domain feeds");
  c_ing->add_option("--feed", ing.feeds, "path:label:source (label 0/1 or benign/malicious)")->required();
  c_ing->add_option("--out", ing.out, "Canonical dataset CSV")->required();
  c_ing->add_option("--from", ing.from, "Earliest first_seen kept (YYYY-MM-DD)");
  c_ing->add_option("--to", ing.to, "Latest first_seen kept (YYYY-MM-DD)");
  c_ing->add_option("--date-column", ing.date_column, "Date column name in headered feeds");
  c_ing->add_option("--domain-column", ing.domain_column, "Domain column name in headered feeds");

  WhoisArgs who;
  auto* c_who = app.add_subcommand("whois-fetch", "Populate the WHOIS cache for a dataset");
  c_who->add_option("--in", who.in, "Canonical dataset CSV")->required();
  c_who->add_option("--cache", who.cache, "JSON-lines cache (default $DOMSIFT_CACHE or whois_cache.jsonl)");
  c_who->add_option("--timeout,--whois-timeout", who.timeout, "Per-query timeout in seconds");
  c_who->add_option("--rate", who.rate, "Minimum seconds between queries to one server");
  c_who->add_flag("--offline", who.offline, "Disable network access (cache only)");

  ExtractArgs ext;
  auto* c_ext = app.add_subcommand("extract", "Compute F1-F17 for every dataset row");
  c_ext->add_option("--in", ext.in, "Canonical dataset CSV")->required();
  c_ext->add_option("--out", ext.out, "features.csv")->required();
  c_ext->add_option("--cache", ext.cache, "WHOIS cache; rows without an entry get empty F1-F3");
  c_ext->add_option("--reference-date", ext.reference_date, "Date ages are measured to (default today)");
  add_list_flags(c_ext, ext.lists);

  SelectArgs sel;
  auto* c_sel = app.add_subcommand("select", "Pearson-correlation feature selection");
  c_sel->add_option("--in", sel.in, "features.csv");
  c_sel->add_option("--out", sel.out, "selection.json")->required();
  auto* o_thr = c_sel->add_option("--threshold", sel.threshold, "Drop a feature when |r| exceeds this")
                    ->check(CLI::Range(0.0, 1.0));
  c_sel->add_option("--preset", sel.preset, "paper-d1 or paper-d2")->excludes(o_thr);
  c_sel->add_option("--matrix", sel.matrix, "Write the correlation matrix as CSV");

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Split, fit the ensemble and save the model");
  c_tr->add_option("--in", tr.in, "features.csv")->required();
  c_tr->add_option("--selection", tr.selection, "selection.json (default: prune at 0.60 on the training split)");
  c_tr->add_option("--out", tr.out, "model.json")->required();
  c_tr->add_option("--test-out", tr.test_out, "Write the held-out rows as features.csv");
  c_tr->add_option("--train-out", tr.train_out, "Write the training rows as features.csv");
  c_tr->add_option("--models", tr.models, "Comma list of rf,dt,knn,lr");
  c_tr->add_option("--seed", tr.seed, "Seed for the split and every member");
  c_tr->add_option("--split", tr.split, "Training fraction")->check(CLI::Range(0.0, 1.0));
  c_tr->add_flag("--no-stratify", tr.no_stratify, "Plain random split");
  c_tr->add_option("--partition", tr.partition, "all, d1 (F1 present) or d2 (F1 absent)");
  c_tr->add_option("--trees", tr.trees, "Random forest size");
  c_tr->add_option("--max-features", tr.forest_max_features, "Features tried per forest split (0 = ceil sqrt p)");
  c_tr->add_flag("--no-bootstrap", tr.no_bootstrap, "Grow forest trees on the full training set");
  c_tr->add_option("--max-depth", tr.max_depth, "Tree depth limit");
  c_tr->add_option("--min-leaf", tr.min_leaf, "Minimum rows per leaf");
  c_tr->add_option("--k", tr.opts.knn.k, "kNN neighbours");
  c_tr->add_option("--lr-rate", tr.opts.logistic.lr, "Logistic regression step size");
  c_tr->add_option("--epochs", tr.opts.logistic.epochs, "Logistic regression epochs");
  c_tr->add_option("--l2", tr.opts.logistic.l2, "Logistic regression L2 penalty");
  c_tr->add_option("--repeats", tr.repeats, "Also report mean/stddev of test metrics over this many seeds");
  c_tr->add_option("--threads", tr.threads, "Forest training threads (result is thread-count independent)");

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score a model on held-out features");
  c_ev->add_option("--model", ev.model, "model.json")->required();
  c_ev->add_option("--in", ev.in, "Test features.csv")->required();
  c_ev->add_option("--out", ev.out, "report.json");
  c_ev->add_option("--roc", ev.roc, "Ensemble ROC points as fpr,tpr CSV");
  c_ev->add_option("--table", ev.table, "classifier,ACC,FPR,FNR,AUC CSV");

  PredictArgs pr;
  auto* c_pr = app.add_subcommand("predict", "Label domains with a trained model");
  c_pr->add_option("--model", pr.model, "model.json")->required();
  c_pr->add_option("--domain", pr.domain, "A single domain name");
  c_pr->add_option("--in", pr.in, "features.csv or canonical dataset CSV");
  c_pr->add_option("--cache", pr.cache, "WHOIS cache used when computing features");
  c_pr->add_option("--reference-date", pr.reference_date, "Date ages are measured to (default today)");
  add_list_flags(c_pr, pr.lists);

  SegmentArgs sg;
  auto* c_sg = app.add_subcommand("segment", "Split concatenated names into dictionary words");
  c_sg->add_option("--word", sg.words, "Name to split (repeatable)")->required();
  c_sg->add_option("--model", sg.model, "Ranked wordlist, one word per line");
  c_sg->add_option("--boost", sg.boost, "Theme words placed ahead of the ranking");
  c_sg->add_flag("--no-boost", sg.no_boost, "Use the wordlist ranking unchanged");

  SynthArgs sy;
  auto* c_sy = app.add_subcommand("synth", "Write the seeded synthetic benchmark as features.csv");
  c_sy->add_option("--out", sy.out, "features.csv")->required();
  c_sy->add_option("--rows", sy.params.rows, "Row count");
  c_sy->add_option("--seed", sy.params.seed, "Generator seed");
  c_sy->add_option("--malicious-fraction", sy.params.malicious_fraction, "Share of malicious rows");
  c_sy->add_option("--reference-date", sy.reference_date, "Anchor date for WHOIS ages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_ing) return run_ingest(ing);
    if (*c_who) return run_whois_fetch(who);
    if (*c_ext) return run_extract(ext);
    if (*c_sel) return run_select(sel);
    if (*c_tr) return run_train(tr);
    if (*c_ev) return run_evaluate(ev);
    if (*c_pr) return run_predict(pr);
    if (*c_sg) return run_segment(sg);
    if (*c_sy) return run_synth(sy);
  } catch (const Error& e) {
    std::cerr << "domsift: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "domsift: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
