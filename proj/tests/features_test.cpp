#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "domsift/feature_table.hpp"
#include "domsift/features.hpp"
#include "domsift/synthetic.hpp"

using namespace domsift;
using namespace domsift::features;

namespace {

const Date kRef = make_date(2020, 5, 16);

WhoisRecord record(const std::string& domain, std::optional<std::string> registrar = std::nullopt) {
  WhoisRecord r;
  r.domain = parse_domain(domain);
  r.fetched_on = kRef;
  r.registrar_raw = registrar;
  return r;
}

}  // namespace

TEST(Entropy, Examples) {
  EXPECT_EQ(shannon_entropy("aaaa"), 0.0);
  EXPECT_NEAR(shannon_entropy("any.com"), std::log2(7.0), 1e-12);
  const double two = 2.0 / 11.0, one = 1.0 / 11.0;
  const double expected = -2 * two * std::log2(two) - 7 * one * std::log2(one);
  EXPECT_NEAR(shannon_entropy("covid19.com"), expected, 1e-12);
  EXPECT_NEAR(shannon_entropy("covid19.com"), 3.095795, 1e-6);
  EXPECT_THROW(shannon_entropy(""), Error);
}

TEST(Lexical, AnyDotCom) {
  const auto f = lexical_features(parse_domain("any.com"));
  EXPECT_EQ(f.dot_count, 1);
  EXPECT_EQ(f.length, 7);
  EXPECT_EQ(f.digit_count, 0);
  EXPECT_EQ(f.vowel_count, 2);
  EXPECT_EQ(f.unique_alnum, 6);
}

TEST(Lexical, Covid19DotCom) {
  const auto f = lexical_features(parse_domain("covid19.com"));
  EXPECT_EQ(f.digit_count, 2);
  EXPECT_DOUBLE_EQ(f.digit_pct, 2.0 / 11.0);
  EXPECT_EQ(f.unique_alnum, 8);
  EXPECT_EQ(f.length, 11);
}

TEST(Lexical, HyphensAndVowels) {
  const auto f = lexical_features(parse_domain("a-b-c.tk"));
  EXPECT_EQ(f.hyphen_count, 2);
  EXPECT_EQ(f.vowel_count, 1);
  EXPECT_EQ(lexical_features(parse_domain("yyy.xyz")).vowel_count, 0);
}

TEST(Lexical, PropertiesOnRandomDomains) {
  std::mt19937 rng(99);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-.";
  for (int n = 0; n < 3000; ++n) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    const auto f = lexical_features(parse_domain(s));
    ASSERT_GT(f.length, 0);
    EXPECT_LE(f.digit_count, f.length);
    EXPECT_LE(f.vowel_count, f.length);
    EXPECT_LE(f.unique_alnum, 36);
    EXPECT_GE(f.entropy, 0.0);
    EXPECT_LE(f.entropy, std::log2(static_cast<double>(f.length)) + 1e-12);
    EXPECT_NEAR(f.digit_pct * static_cast<double>(f.length), static_cast<double>(f.digit_count), 1e-12);
  }
}

TEST(TldOneHot, Categories) {
  const auto lists = TldLists::defaults();
  EXPECT_EQ(tld_features(parse_domain("example.com"), lists), (OneHot3{1, 0, 0}));
  EXPECT_EQ(tld_features(parse_domain("example.tk"), lists), (OneHot3{0, 0, 1}));
  EXPECT_EQ(tld_features(parse_domain("example.io"), lists), (OneHot3{0, 1, 0}));
  EXPECT_EQ(tld_features(parse_domain("localhost"), lists), (OneHot3{0, 1, 0}));
}

TEST(TldOneHot, DefaultListsAreDisjointAndComplete) {
  const auto l = TldLists::defaults();
  EXPECT_NO_THROW(l.validate());
  EXPECT_EQ(l.generic, (std::set<std::string>{"com", "net", "org", "xyz", "ru", "uk", "fr", "it", "info"}));
  EXPECT_EQ(l.abused,
            (std::set<std::string>{"live", "buzz", "gq", "tk", "fit", "cf", "ml", "wang", "top", "rest", "work"}));
  TldLists bad = l;
  bad.abused.insert("com");
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Registrar, Canonicalization) {
  const auto lists = RegistrarLists::defaults();
  EXPECT_EQ(canonicalize_registrar("Google Inc.", lists), "google domains");
  EXPECT_EQ(canonicalize_registrar("Google LLC", lists), "google domains");
  EXPECT_EQ(canonicalize_registrar("NameCheap, Inc.", lists), "namecheap");
  EXPECT_EQ(canonicalize_registrar("Totally Unknown Registrar SARL", lists), "totally unknown registrar");
  EXPECT_EQ(canonicalize_registrar("GoDaddy.com, LLC", lists), "godaddy");
  EXPECT_EQ(canonicalize_registrar("  1&1   Internet   SE ", lists), "1&1");
  EXPECT_EQ(canonicalize_registrar("CSC Corporate Domains, Inc.", lists), "csc corporate domains");
  EXPECT_EQ(canonicalize_registrar("Tucows Domains Inc.", lists), "tucows domains");
}

TEST(Registrar, Categories) {
  const auto lists = RegistrarLists::defaults();
  EXPECT_EQ(registrar_features(record("a.com", "NameCheap, Inc."), lists), (OneHot3{1, 0, 0}));
  EXPECT_EQ(registrar_features(record("a.com", "DYNADOT LLC"), lists), (OneHot3{0, 0, 1}));
  EXPECT_EQ(registrar_features(record("a.com", "Tucows"), lists), (OneHot3{0, 1, 0}));
  EXPECT_EQ(registrar_features(record("a.com"), lists), (OneHot3{0, 0, 0}));
  auto canonical_only = record("a.com");
  canonical_only.registrar_canonical = "dynadot";
  EXPECT_EQ(registrar_features(canonical_only, lists), (OneHot3{0, 0, 1}));
}

TEST(Registrar, DefaultListsMatchPublishedSets) {
  const auto l = RegistrarLists::defaults();
  EXPECT_NO_THROW(l.validate());
  EXPECT_EQ(l.popular.size(), 16u);
  EXPECT_EQ(l.bad.size(), 9u);
  for (const auto& n : l.popular) EXPECT_EQ(canonicalize_registrar(n, l), n);
  for (const auto& n : l.bad) EXPECT_EQ(canonicalize_registrar(n, l), n);
}

TEST(ShippedLists, DataFilesEqualCompiledDefaults) {
  const auto tlds = load_tld_lists(std::string(DOMSIFT_DATA_DIR) + "/tld_lists.json");
  EXPECT_EQ(tlds.generic, TldLists::defaults().generic);
  EXPECT_EQ(tlds.abused, TldLists::defaults().abused);
  const auto regs = load_registrar_lists(std::string(DOMSIFT_DATA_DIR) + "/registrar_lists.json");
  const auto def = RegistrarLists::defaults();
  EXPECT_EQ(regs.popular, def.popular);
  EXPECT_EQ(regs.bad, def.bad);
  EXPECT_EQ(regs.canonical_map, def.canonical_map);
}

TEST(ShippedLists, JsonRoundTripAndSchemaErrors) {
  const auto regs = registrar_lists_from_json(to_json(RegistrarLists::defaults()));
  EXPECT_EQ(regs.canonical_map, RegistrarLists::defaults().canonical_map);
  try {
    tld_lists_from_json(nlohmann::json{{"generic", {"com"}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
  }
  EXPECT_THROW(registrar_lists_from_json(nlohmann::json{{"popular", {"x"}}, {"bad", {"x"}}}), Error);
}

TEST(AgeFeatures, CalendarDifferences) {
  auto r = record("a.com");
  r.created = make_date(2020, 2, 1);
  r.expires = make_date(2021, 2, 1);
  r.updated = make_date(2020, 5, 1);
  const auto f = whois_age_features(r, kRef);
  EXPECT_EQ(f.reg_lifetime_days, 105);
  EXPECT_EQ(f.remaining_days, 261);
  EXPECT_EQ(f.days_since_update, 15);
}

TEST(AgeFeatures, AbsentAndWrongSideDates) {
  auto r = record("a.com");
  auto f = whois_age_features(r, kRef);
  EXPECT_FALSE(f.reg_lifetime_days);
  EXPECT_FALSE(f.remaining_days);
  EXPECT_FALSE(f.days_since_update);
  r.created = make_date(2020, 6, 1);
  r.expires = make_date(2020, 5, 1);
  r.updated = make_date(2020, 5, 17);
  f = whois_age_features(r, kRef);
  EXPECT_FALSE(f.reg_lifetime_days);
  EXPECT_FALSE(f.remaining_days);
  EXPECT_FALSE(f.days_since_update);
  r.created = kRef;
  r.expires = kRef;
  f = whois_age_features(r, kRef);
  EXPECT_EQ(f.reg_lifetime_days, 0);
  EXPECT_EQ(f.remaining_days, 0);
}

TEST(ExtractAll, WithoutWhois) {
  const auto v = extract_all(parse_domain("any.com"), std::nullopt, TldLists::defaults(), RegistrarLists::defaults(), kRef);
  EXPECT_EQ(v.f4_dot_count, 1);
  EXPECT_EQ(v.f6_length, 7);
  EXPECT_EQ(v.f12_tld_generic, 1);
  EXPECT_EQ(v.f15_reg_popular + v.f16_reg_notpopular + v.f17_reg_bad, 0);
  EXPECT_FALSE(v.f1_reg_lifetime_days);
  EXPECT_FALSE(v.f2_remaining_days);
  EXPECT_FALSE(v.f3_days_since_update);
}

TEST(ExtractAll, WithWhois) {
  auto r = record("any.com", "MarkMonitor Inc.");
  r.created = make_date(1999, 1, 1);
  r.expires = make_date(2025, 1, 1);
  r.updated = make_date(2019, 1, 1);
  const auto v = extract_all(r.domain, r, TldLists::defaults(), RegistrarLists::defaults(), kRef);
  EXPECT_TRUE(v.f1_reg_lifetime_days);
  EXPECT_TRUE(v.f2_remaining_days);
  EXPECT_TRUE(v.f3_days_since_update);
  EXPECT_EQ(v.f15_reg_popular, 1);
}

TEST(ExtractAll, AbusedTldWithDigitAndHyphen) {
  const auto v = extract_all(parse_domain("x-1.tk"), std::nullopt, TldLists::defaults(), RegistrarLists::defaults(), kRef);
  EXPECT_EQ(v.f14_tld_abused, 1);
  EXPECT_EQ(v.f8_hyphen_count, 1);
  EXPECT_EQ(v.f7_digit_count, 1);
}

TEST(ExtractAll, OneHotInvariantsAndPurityOnRandomInputs) {
  std::mt19937 rng(5);
  const std::vector<std::string> tlds = {"com", "tk", "io", "xyz", "top", "de", ""};
  const std::vector<std::optional<std::string>> regs = {std::nullopt, "GoDaddy.com, LLC", "NameSilo, LLC", "Gandi SAS"};
  const auto tl = TldLists::defaults();
  const auto rl = RegistrarLists::defaults();
  for (int n = 0; n < 1000; ++n) {
    std::string name = "n" + std::to_string(rng() % 100000);
    const auto& t = tlds[rng() % tlds.size()];
    if (!t.empty()) name += "." + t;
    auto r = record(name, regs[rng() % regs.size()]);
    r.created = add_days(kRef, -static_cast<long>(rng() % 4000));
    const auto v = extract_all(r.domain, r, tl, rl, kRef);
    EXPECT_EQ(v.f12_tld_generic + v.f13_tld_unknown + v.f14_tld_abused, 1);
    const int reg_sum = v.f15_reg_popular + v.f16_reg_notpopular + v.f17_reg_bad;
    EXPECT_EQ(reg_sum, r.registrar_raw ? 1 : 0);
    EXPECT_EQ(v, extract_all(r.domain, r, tl, rl, kRef));
  }
}

TEST(FeatureTable, RoundTripPreservesVectors) {
  synthetic::Params p;
  p.rows = 200;
  auto ds = synthetic::generate(p);
  ds.rows[3].features->f1_reg_lifetime_days.reset();
  ds.rows[4].features->f2_remaining_days.reset();
  const auto t = table::from_dataset(ds, kRef);
  std::stringstream ss;
  table::write_feature_table(ss, t);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# reference_date=2020-05-16\ndomain,label,f1,f2,", 0), 0u);
  const auto back = table::read_feature_table(ss);
  EXPECT_EQ(back.reference_date, kRef);
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back.rows[i], t.rows[i]);
    EXPECT_EQ(back.labels[i], t.labels[i]);
    EXPECT_EQ(back.domains[i], t.domains[i]);
  }
}

TEST(FeatureTable, MissingColumnIsSchemaError) {
  std::istringstream in("domain,label,f1\nx.com,1,3\n");
  try {
    table::read_feature_table(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
  }
}

TEST(Synthetic, SeededAndClassConditional) {
  synthetic::Params p;
  p.rows = 1000;
  const auto a = synthetic::generate(p);
  const auto b = synthetic::generate(p);
  ASSERT_EQ(a.size(), 1000u);
  std::set<std::string> names;
  std::size_t mal = 0, mal_abused = 0, ben_generic = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.rows[i].domain, b.rows[i].domain);
    EXPECT_EQ(a.rows[i].features, b.rows[i].features);
    names.insert(a.rows[i].domain.raw);
    const auto& f = *a.rows[i].features;
    ASSERT_TRUE(f.f1_reg_lifetime_days);
    if (a.rows[i].label == 1) {
      ++mal;
      EXPECT_GE(*f.f1_reg_lifetime_days, 1);
      EXPECT_LE(*f.f1_reg_lifetime_days, 60);
      mal_abused += f.f14_tld_abused;
    } else {
      EXPECT_GE(*f.f1_reg_lifetime_days, 700);
      EXPECT_LE(*f.f1_reg_lifetime_days, 5000);
      ben_generic += f.f12_tld_generic;
    }
  }
  EXPECT_EQ(names.size(), a.size());
  EXPECT_EQ(mal, 500u);
  EXPECT_NEAR(static_cast<double>(mal_abused) / 500.0, 0.5, 0.08);
  EXPECT_NEAR(static_cast<double>(ben_generic) / 500.0, 0.9, 0.05);
}
