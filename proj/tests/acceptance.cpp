// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "domsift/date.hpp"
#include "domsift/eval.hpp"
#include "domsift/features.hpp"
#include "domsift/learn/ensemble.hpp"
#include "domsift/segment.hpp"
#include "domsift/select.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace domsift;
using nlohmann::json;

namespace {

/// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

int g_failed = 0;

void criterion(const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  if (c.failed == 0) {
    std::cout << "PASS " << name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << '\n';
  } else {
    ++g_failed;
    std::cout << "FAIL " << name << " (" << c.failed << " failed";
    for (const auto& f : c.failures) std::cout << "; " << f;
    std::cout << ")\n";
  }
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream o;
  o.precision(prec);
  o << v;
  return o.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(DOMSIFT_CLI) + " " + args + " >" + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Calendar walk with its own month table; shares nothing with date.hpp.
bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }
int month_len(int y, int m) {
  static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : len[m - 1];
}
long ordinal(int y, int m, int d) {
  long n = 0;
  for (int yy = 1900; yy < y; ++yy) n += leap(yy) ? 366 : 365;
  for (int mm = 1; mm < m; ++mm) n += month_len(y, mm);
  return n + d;
}

learn::TrainingData blobs(std::size_t n, std::size_t p, double gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  learn::TrainingData d(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    d.y[i] = static_cast<int>(i % 2);
    for (std::size_t j = 0; j < p; ++j) d.at(i, j) = g(rng) + (d.y[i] ? gap : -gap);
  }
  return d;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("domsift_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(work);

  criterion("reference-table-documented", [](Check& c) {
    const auto j = json::parse(slurp(fs::path(DOMSIFT_DATA_DIR) / "reference_results.json"));
    const auto& rows = j.at("rows");
    c.require(rows.size() == 5, "expected 5 reference rows");
    std::string shown;
    for (const auto& r : rows) {
      for (std::size_t k = 1; k <= 4; ++k) c.require(r[k].get<double>() >= 0 && r[k].get<double>() <= 1, "value outside [0,1]");
      shown += (shown.empty() ? "" : ", ") + r[0].get<std::string>() + " ACC=" + fmt(r[1].get<double>(), 4);
    }
    c.require(rows[0][0] == "RF" && rows[0][1] == 0.9770 && rows[0][2] == 0.0401 && rows[0][3] == 0.0084 &&
                  rows[0][4] == 0.988,
              "RF reference row");
    c.require(rows[4][0] == "Ensemble" && rows[4][1] == 0.9769, "Ensemble reference row");
    c.detail = "reference only, not reproduced: " + shown;
  });

  criterion("synthetic-benchmark", [&](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path f = work / "synth.csv", m = work / "model.json", test = work / "test.csv", rep = work / "rep.json";
    c.require(run_cli("synth --rows 5000 --seed 1 --out " + f.string(), work / "synth.log") == 0, "synth failed");
    c.require(run_cli("train --in " + f.string() + " --seed 42 --split 0.8 --out " + m.string() + " --test-out " +
                          test.string(),
                      work / "train.log") == 0,
              "train failed: " + slurp(work / "train.log"));
    c.require(run_cli("evaluate --model " + m.string() + " --in " + test.string() + " --out " + rep.string(),
                      work / "eval.log") == 0,
              "evaluate failed");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto j = json::parse(slurp(rep));
    c.require(j["rows"] == 1000, "test split is not 20%");
    for (const auto& row : j["classifiers"]) {
      const std::string name = row["classifier"];
      if (name != "RF" && name != "Ensemble") continue;
      const double acc = row["acc"], auc = row["auc"];
      c.require(acc >= 0.95, name + " ACC " + fmt(acc));
      c.require(auc >= 0.98, name + " AUC " + fmt(auc));
      c.detail += name + " ACC=" + fmt(acc) + " AUC=" + fmt(auc) + "; ";
    }
    c.require(j["classifiers"].size() == 5, "expected 4 members plus ensemble");
    c.require(secs <= 60.0, "took " + fmt(secs) + " s");
    c.detail += fmt(secs, 3) + " s";
  });

  criterion("majority-vote-enumeration", [](Check& c) {
    std::size_t cases = 0;
    for (int k = 1; k <= 5; ++k)
      for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> v(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = mask >> i & 1;
        c.require(learn::majority_vote(v) == oracle::majority_by_sum(v), "vote mismatch");
        ++cases;
      }
    c.require(cases == 62, "case count");
    c.require(learn::majority_vote(std::vector<int>{1, 1, 0, 0}) == 0, "tie [1,1,0,0] must be 0");
    c.detail = std::to_string(cases) + " vote vectors";
  });

  criterion("metric-formulas", [](Check& c) {
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<std::size_t> cnt(0, 10000);
    std::size_t done = 0;
    while (done < 100) {
      ConfusionCounts k{cnt(rng), cnt(rng), cnt(rng), cnt(rng)};
      if (k.total() == 0) continue;
      const auto m = eval::metrics(k);
      auto n = [](std::size_t v) { return static_cast<std::int64_t>(v); };
      c.require(oracle::double_equals_rational(m.acc, oracle::Rational::make(n(k.tp + k.tn), n(k.total()))), "ACC");
      c.require(m.fpr.has_value() == (k.fp + k.tn > 0), "FPR presence");
      c.require(m.fnr.has_value() == (k.fn + k.tp > 0), "FNR presence");
      if (m.fpr) c.require(oracle::double_equals_rational(*m.fpr, oracle::Rational::make(n(k.fp), n(k.fp + k.tn))), "FPR");
      if (m.fnr) c.require(oracle::double_equals_rational(*m.fnr, oracle::Rational::make(n(k.fn), n(k.fn + k.tp))), "FNR");
      ++done;
    }
    const auto w = eval::metrics({.tp = 8, .tn = 90, .fp = 1, .fn = 1});
    c.require(w.acc == 0.98, "worked ACC");
    c.require(oracle::double_equals_rational(*w.fpr, oracle::Rational::make(1, 91)), "worked FPR");
    c.require(oracle::double_equals_rational(*w.fnr, oracle::Rational::make(1, 9)), "worked FNR");
    c.detail = "100 tallies + worked case";
  });

  criterion("auc-mann-whitney", [](Check& c) {
    std::mt19937_64 rng(200);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng() % 49;
      std::vector<double> s(n);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(rng() % 2);
        s[i] = static_cast<double>(rng() % 8) / 8.0;  // coarse grid forces ties
      }
      y[0] = 0;
      y[1] = 1;
      const double a = eval::auc(eval::roc_curve(s, y));
      worst = std::max(worst, std::fabs(a - oracle::mann_whitney(s, y)));
    }
    c.require(worst <= 1e-9, "max deviation " + fmt(worst));
    const std::vector<int> y{0, 0, 1, 1};
    c.require(eval::auc(eval::roc_curve(std::vector<double>{0.1, 0.2, 0.8, 0.9}, y)) == 1.0, "perfect ranking");
    c.require(eval::auc(eval::roc_curve(std::vector<double>{0.3, 0.3, 0.3, 0.3}, y)) == 0.5, "single threshold");
    c.detail = "200 instances, max deviation " + fmt(worst, 3);
  });

  criterion("pearson-oracle", [](Check& c) {
    std::mt19937_64 rng(300);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 5 + rng() % 60, p = 2 + rng() % 7;
      std::vector<std::vector<double>> raw(p, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const double shared = g(rng);
        for (std::size_t j = 0; j < p; ++j) raw[j][i] = shared * static_cast<double>(j % 3) + g(rng);
      }
      std::vector<select::Column> cols;
      for (const auto& col : raw) cols.emplace_back(col.begin(), col.end());
      const auto m = select::correlation_matrix(cols);
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) worst = std::max(worst, std::fabs(*m.at(a, b) - *oracle::pearson_two_pass(raw[a], raw[b])));
      const auto kept = select::prune(m, 0.60);
      for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t b = a + 1; b < kept.size(); ++b)
          c.require(std::fabs(*m.at(kept[a], kept[b])) <= 0.60, "kept pair above 0.60");
      std::vector<double> neg(raw[0]);
      for (auto& v : neg) v = -v;
      c.require(*select::pearson(raw[0], raw[0]) == 1.0, "r(x,x)");
      c.require(*select::pearson(raw[0], neg) == -1.0, "r(x,-x)");
    }
    c.require(worst <= 1e-9, "max deviation " + fmt(worst));
    c.detail = "100 matrices, max deviation " + fmt(worst, 3);
  });

  criterion("feature-fidelity", [](Check& c) {
    const auto any = features::lexical_features(parse_domain("any.com"));
    c.require(any.dot_count == 1, "any.com dots");
    c.require(any.length == 7, "any.com length");
    c.require(std::fabs(any.entropy - std::log2(7.0)) <= 1e-9, "any.com entropy");
    const auto cv = features::lexical_features(parse_domain("covid19.com"));
    c.require(cv.digit_count == 2, "covid19.com digits");
    c.require(cv.digit_pct == 2.0 / 11.0, "covid19.com digit_pct");
    c.require(cv.unique_alnum == 8, "covid19.com unique_alnum");
    c.require(std::fabs(cv.entropy - 3.095795) <= 1e-6, "covid19.com entropy " + fmt(cv.entropy, 10));

    const auto tlds = features::TldLists::defaults();
    using H = features::OneHot3;
    c.require(features::tld_features(parse_domain("any.com"), tlds) == H{1, 0, 0}, ".com generic");
    c.require(features::tld_features(parse_domain("covid.tk"), tlds) == H{0, 0, 1}, ".tk abused");
    c.require(features::tld_features(parse_domain("startup.io"), tlds) == H{0, 1, 0}, ".io unknown");
    const auto regs = features::RegistrarLists::defaults();
    auto reg = [&](const std::string& raw) {
      WhoisRecord r;
      r.registrar_raw = raw;
      return features::registrar_features(r, regs);
    };
    c.require(reg("NameCheap, Inc.") == H{1, 0, 0}, "namecheap popular");
    c.require(reg("DYNADOT LLC") == H{0, 0, 1}, "dynadot bad");
    c.require(reg("Tucows Domains Inc.") == H{0, 1, 0}, "tucows not popular");

    std::mt19937_64 rng(400);
    std::uniform_int_distribution<int> year(1996, 2032), month(1, 12);
    for (int t = 0; t < 1000; ++t) {
      const int y0 = year(rng), m0 = month(rng), y1 = year(rng), m1 = month(rng);
      const int d0 = 1 + static_cast<int>(rng() % month_len(y0, m0)), d1 = 1 + static_cast<int>(rng() % month_len(y1, m1));
      const long want = ordinal(y1, m1, d1) - ordinal(y0, m0, d0);
      c.require(days_between(make_date(y0, m0, d0), make_date(y1, m1, d1)) == want, "days_between");
      WhoisRecord r;
      r.created = make_date(y0, m0, d0);
      r.expires = make_date(y1, m1, d1);
      r.updated = make_date(y0, m0, d0);
      const Date ref = make_date(y1, m1, d1);
      const auto age = features::whois_age_features(r, ref);
      if (want >= 0) {
        c.require(age.reg_lifetime_days == want, "F1 age");
        c.require(age.days_since_update == want, "F3 age");
      } else {
        c.require(!age.reg_lifetime_days, "future creation must be absent");
      }
      c.require(age.remaining_days == 0L, "F2 on expiry day");
    }
    c.detail = "lexical, one-hot and 1000 date pairs";
  });

  criterion("segmentation-oracle", [](Check& c) {
    std::mt19937 rng(500);
    std::vector<std::string> vocab;
    std::set<std::string> seen;
    while (vocab.size() < 50) {
      std::string w;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < len; ++i) w += static_cast<char>('a' + rng() % 5);
      if (seen.insert(w).second) vocab.push_back(w);
    }
    const segment::LanguageModel small(vocab, {});
    std::size_t cases = 0;
    auto check = [&](const std::string& s) {
      c.require(segment::segment_chunk(s, small) == oracle::exhaustive_segment(s, small).tokens, "mismatch on " + s);
      ++cases;
    };
    for (const auto& a : vocab)
      for (const auto& b : vocab) check(a + b);
    while (cases < 10000) {
      std::string s;
      const int len = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < len; ++i) s += rng() % 8 == 0 ? static_cast<char>('v' + rng() % 4) : static_cast<char>('a' + rng() % 5);
      check(s);
    }

    const auto full = segment::load_language_model(fs::path(DOMSIFT_DATA_DIR) / "words.txt",
                                                   fs::path(DOMSIFT_DATA_DIR) / "boost.txt");
    c.require(segment::segment_keywords("mask", full) == std::vector<std::string>{"mask"}, "mask");
    const std::string themed = "coronaviruspreventionsanantonio";
    const auto first = segment::segment_keywords(themed, full);
    for (int r = 0; r < 5; ++r) c.require(segment::segment_keywords(themed, full) == first, "unstable split");
    c.require(first == oracle::branch_and_bound_segment(themed, full).tokens, "themed split is not the minimum");
    std::string joined;
    for (const auto& t : first) joined += (joined.empty() ? "" : " ") + t;
    c.detail = std::to_string(cases) + " strings; " + themed + " -> " + joined;
  });

  criterion("logistic-gradient", [](Check& c) {
    const auto d = blobs(50, 8, 0.4, 600);
    std::mt19937_64 rng(601);
    std::normal_distribution<double> g(0.0, 0.5);
    const double h = 1e-5, l2 = learn::LogisticParams{}.l2;
    double worst = 0.0;
    for (int point = 0; point < 20; ++point) {
      std::vector<double> w(8);
      for (auto& x : w) x = g(rng);
      const double b = g(rng);
      const auto grad = learn::logistic_gradient(d, w, b, l2);
      for (std::size_t j = 0; j <= 8; ++j) {
        auto wp = w, wm = w;
        double bp = b, bm = b;
        if (j < 8) wp[j] += h, wm[j] -= h;
        else bp += h, bm -= h;
        const double fd = (learn::logistic_loss(d, wp, bp, l2) - learn::logistic_loss(d, wm, bm, l2)) / (2 * h);
        const double rel = std::fabs(fd - grad[j]) / std::max({std::fabs(fd), std::fabs(grad[j]), 1e-8});
        worst = std::max(worst, rel);
      }
    }
    c.require(worst <= 1e-4, "max relative error " + fmt(worst));
    const auto m = learn::train_logistic_regression(d, {});
    c.require(m.loss_history.size() == 501, "expected 500 epochs");
    for (std::size_t e = 1; e < m.loss_history.size(); ++e)
      c.require(m.loss_history[e] <= m.loss_history[e - 1], "loss rose at epoch " + std::to_string(e));
    c.detail = "max relative error " + fmt(worst, 3) + ", loss " + fmt(m.loss_history.front(), 4) + " -> " +
               fmt(m.loss_history.back(), 4);
  });

  criterion("determinism", [&](Check& c) {
    const fs::path f = work / "det.csv";
    c.require(run_cli("synth --rows 1000 --seed 3 --out " + f.string(), work / "d.log") == 0, "synth failed");
    const std::string common = "train --in " + f.string() + " --seed 11 --trees 30 --out ";
    c.require(run_cli(common + (work / "a.json").string() + " --threads 1", work / "a.log") == 0, "train a");
    c.require(run_cli(common + (work / "b.json").string() + " --threads 4", work / "b.log") == 0, "train b");
    const auto a = slurp(work / "a.json"), b = slurp(work / "b.json");
    c.require(!a.empty() && a == b, "model files differ");

    const auto d = blobs(300, 5, 0.5, 700);
    learn::ForestParams fp{.n_trees = 40, .seed = 5};
    fp.threads = 1;
    const auto serial = learn::train_random_forest(d, fp);
    fp.threads = 4;
    const auto parallel = learn::train_random_forest(d, fp);
    const auto probe = blobs(500, 5, 0.5, 701);
    for (std::size_t i = 0; i < probe.rows; ++i) {
      const auto p = serial.predict(probe.row(i)), q = parallel.predict(probe.row(i));
      c.require(p.label == q.label && p.score == q.score, "forest predictions differ");
    }
    c.detail = "model files byte-identical (" + std::to_string(a.size()) + " bytes); 500 forest predictions match";
  });

  criterion("degenerate-forest-equals-tree", [](Check& c) {
    const auto d = blobs(200, 4, 0.3, 800);
    const learn::TreeParams tp{};
    const auto tree = learn::train_decision_tree(d, tp);
    const auto forest =
        learn::train_random_forest(d, {.n_trees = 1, .max_features = d.cols, .bootstrap = false, .seed = 123, .tree = tp});
    std::size_t same = 0;
    for (std::size_t i = 0; i < d.rows; ++i) {
      const auto p = forest.predict(d.row(i)), q = tree.predict(d.row(i));
      c.require(p.label == q.label && p.score == q.score, "row " + std::to_string(i));
      same += p.label == q.label;
    }
    c.detail = std::to_string(same) + "/200 identical";
  });

  fs::remove_all(work);
  std::cout << (g_failed ? "acceptance: " + std::to_string(g_failed) + " criteria failed\n" : "acceptance: all criteria passed\n");
  return g_failed ? 1 : 0;
}
