#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/types.hpp"
#include "json.hpp"

namespace domsift::features {

// ---------------------------------------------------------------------------
// Reference lists

/// TLD categories for F12..F14. Anything in neither set is "unknown".
struct TldLists {
  std::set<std::string> generic;
  std::set<std::string> abused;

  static TldLists defaults() {
    return {{"com", "net", "org", "xyz", "ru", "uk", "fr", "it", "info"},
            {"live", "buzz", "gq", "tk", "fit", "cf", "ml", "wang", "top", "rest", "work"}};
  }

  void validate() const {
    for (const auto& t : generic)
      if (abused.count(t)) throw Error(ErrorCode::InvalidArgument, "tld '" + t + "' is both generic and abused");
  }
};

/// Registrar categories for F15..F17 plus the alias table used to merge
/// differently spelled registrar names.
struct RegistrarLists {
  std::set<std::string> popular;
  std::set<std::string> bad;
  std::map<std::string, std::string> canonical_map;  // cleaned-name prefix -> canonical

  static RegistrarLists defaults() {
    RegistrarLists l;
    l.popular = {"akamai",      "alibaba",     "godaddy",       "google domains",
                 "domain.com",  "namecheap",   "name.com",      "csc corporate domains",
                 "markmonitor", "1&1",         "dreamhost",     "hostinger",
                 "registrarsafe", "network solutions", "ovh",   "register.com"};
    l.bad = {"namesilo", "dynadot", "gmo", "r01-ru", "nawang", "eranet", "net-chinese", "zhengzhou", "shinjiru"};
    for (const auto& n : l.popular) l.canonical_map[n] = n;
    for (const auto& n : l.bad) l.canonical_map[n] = n;
    l.canonical_map.insert({
        {"google", "google domains"},
        {"akamai technologies", "akamai"},
        {"alibaba cloud", "alibaba"},
        {"hichina", "alibaba"},
        {"godaddy.com", "godaddy"},
        {"go daddy", "godaddy"},
        {"1&1 internet", "1&1"},
        {"1and1", "1&1"},
        {"ionos", "1&1"},
        {"csc", "csc corporate domains"},
        {"ovh sas", "ovh"},
        {"ovhcloud", "ovh"},
        {"gmo internet", "gmo"},
        {"r01", "r01-ru"},
        {"eranet international", "eranet"},
        {"zhengzhou century connect", "zhengzhou"},
        {"shinjiru technology", "shinjiru"},
    });
    return l;
  }

  void validate() const {
    for (const auto& r : popular)
      if (bad.count(r)) throw Error(ErrorCode::InvalidArgument, "registrar '" + r + "' is both popular and bad");
  }
};

inline TldLists tld_lists_from_json(const nlohmann::json& j) {
  TldLists l;
  try {
    l.generic = j.at("generic").get<std::set<std::string>>();
    l.abused = j.at("abused").get<std::set<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("tld lists: ") + e.what());
  }
  l.validate();
  return l;
}

inline nlohmann::json to_json(const TldLists& l) {
  return {{"generic", l.generic}, {"abused", l.abused}};
}

inline RegistrarLists registrar_lists_from_json(const nlohmann::json& j) {
  RegistrarLists l;
  try {
    l.popular = j.at("popular").get<std::set<std::string>>();
    l.bad = j.at("bad").get<std::set<std::string>>();
    if (j.contains("canonical_map")) l.canonical_map = j.at("canonical_map").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("registrar lists: ") + e.what());
  }
  l.validate();
  return l;
}

inline nlohmann::json to_json(const RegistrarLists& l) {
  return {{"popular", l.popular}, {"bad", l.bad}, {"canonical_map", l.canonical_map}};
}

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
  }
}

}  // namespace detail

inline TldLists load_tld_lists(const std::filesystem::path& path) {
  return tld_lists_from_json(detail::read_json_file(path));
}

inline RegistrarLists load_registrar_lists(const std::filesystem::path& path) {
  return registrar_lists_from_json(detail::read_json_file(path));
}

// ---------------------------------------------------------------------------
// Lexical / statistical features

/// Shannon entropy in bits over the character frequencies of `text`
/// (every character counts, dots included).
inline double shannon_entropy(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::EmptyInput, "entropy of empty text");
  std::array<std::size_t, 256> freq{};
  for (unsigned char c : text) ++freq[c];
  const double n = static_cast<double>(text.size());
  double h = 0.0;
  for (std::size_t f : freq) {
    if (f == 0) continue;
    const double p = static_cast<double>(f) / n;
    h -= p * std::log2(p);
  }
  return h;
}

struct LexicalFeatures {
  long dot_count = 0;        // F4
  double entropy = 0.0;      // F5
  long length = 0;           // F6
  long digit_count = 0;      // F7
  long hyphen_count = 0;     // F8
  long vowel_count = 0;      // F9
  double digit_pct = 0.0;    // F10
  long unique_alnum = 0;     // F11
};

inline LexicalFeatures lexical_features(const Domain& domain) {
  const std::string& s = domain.raw;
  LexicalFeatures f;
  std::array<bool, 256> seen{};
  for (unsigned char c : s) {
    if (c == '.') ++f.dot_count;
    if (c == '-') ++f.hyphen_count;
    if (c >= '0' && c <= '9') ++f.digit_count;
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ++f.vowel_count;
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      if (!seen[c]) ++f.unique_alnum;
      seen[c] = true;
    }
  }
  f.length = static_cast<long>(s.size());
  f.digit_pct = f.length > 0 ? static_cast<double>(f.digit_count) / static_cast<double>(f.length) : 0.0;
  f.entropy = s.empty() ? 0.0 : shannon_entropy(s);
  return f;
}

struct OneHot3 {
  int a = 0, b = 0, c = 0;
  friend bool operator==(const OneHot3&, const OneHot3&) = default;
};

/// (generic, unknown, abused)
inline OneHot3 tld_features(const Domain& domain, const TldLists& lists) {
  if (lists.generic.count(domain.tld)) return {1, 0, 0};
  if (lists.abused.count(domain.tld)) return {0, 0, 1};
  return {0, 1, 0};
}

// ---------------------------------------------------------------------------
// Registrar features

namespace detail {

inline bool is_trailing_punct(char c) { return c == '.' || c == ',' || c == ';' || c == ':'; }

inline std::string strip_trailing_punct(std::string s) {
  while (!s.empty() && (is_trailing_punct(s.back()) || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace detail

/// Lowercases, drops trailing corporate suffixes (inc, llc, ltd, corp, co,
/// gmbh, sarl) and punctuation, collapses whitespace, then maps the
/// longest matching alias prefix to its canonical name. Names with no
/// matching alias come back cleaned but otherwise unchanged.
inline std::string canonicalize_registrar(std::string_view raw, const RegistrarLists& lists) {
  static const std::set<std::string, std::less<>> kSuffixes = {"inc", "llc", "ltd", "corp", "co", "gmbh", "sarl"};

  std::vector<std::string> words;
  std::string word;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      if (!word.empty()) words.push_back(std::move(word));
      word.clear();
    } else {
      word += static_cast<char>(std::tolower(c));
    }
  }
  if (!word.empty()) words.push_back(std::move(word));

  while (!words.empty()) {
    std::string bare = detail::strip_trailing_punct(words.back());
    if (bare.empty()) {
      words.pop_back();
      continue;
    }
    if (words.size() > 1 && kSuffixes.count(bare)) {
      words.pop_back();
      continue;
    }
    words.back() = bare;
    break;
  }

  std::string cleaned;
  for (const auto& w : words) {
    if (!cleaned.empty()) cleaned += ' ';
    cleaned += w;
  }
  cleaned = detail::strip_trailing_punct(std::move(cleaned));

  const std::string* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& [pattern, canonical] : lists.canonical_map) {
    if (pattern.size() > best_len && cleaned.starts_with(pattern)) {
      best = &canonical;
      best_len = pattern.size();
    }
  }
  return best ? *best : cleaned;
}

/// (popular, not-popular, bad); all zero when no registrar is known.
inline OneHot3 registrar_features(const WhoisRecord& record, const RegistrarLists& lists) {
  std::optional<std::string> canonical;
  if (record.registrar_raw && !record.registrar_raw->empty())
    canonical = canonicalize_registrar(*record.registrar_raw, lists);
  else
    canonical = record.registrar_canonical;
  if (!canonical) return {0, 0, 0};
  if (lists.popular.count(*canonical)) return {1, 0, 0};
  if (lists.bad.count(*canonical)) return {0, 0, 1};
  return {0, 1, 0};
}

// ---------------------------------------------------------------------------
// WHOIS age features

struct AgeFeatures {
  std::optional<long> reg_lifetime_days;    // F1
  std::optional<long> remaining_days;       // F2
  std::optional<long> days_since_update;    // F3
};

/// Day counts relative to `reference_date`. Dates on the wrong side of the
/// reference (creation in the future, expiry in the past) yield absent.
inline AgeFeatures whois_age_features(const WhoisRecord& record, const Date& reference_date) {
  if (!reference_date.ok()) throw Error(ErrorCode::InvalidDate, "invalid reference date");
  AgeFeatures f;
  if (record.created && *record.created <= reference_date)
    f.reg_lifetime_days = days_between(*record.created, reference_date);
  if (record.expires && *record.expires >= reference_date)
    f.remaining_days = days_between(reference_date, *record.expires);
  if (record.updated && *record.updated <= reference_date)
    f.days_since_update = days_between(*record.updated, reference_date);
  return f;
}

// ---------------------------------------------------------------------------

inline FeatureVector extract_all(const Domain& domain, const std::optional<WhoisRecord>& whois,
                                 const TldLists& tlds, const RegistrarLists& registrars,
                                 const Date& reference_date) {
  FeatureVector v;
  if (whois) {
    const AgeFeatures age = whois_age_features(*whois, reference_date);
    v.f1_reg_lifetime_days = age.reg_lifetime_days;
    v.f2_remaining_days = age.remaining_days;
    v.f3_days_since_update = age.days_since_update;
    const OneHot3 reg = registrar_features(*whois, registrars);
    v.f15_reg_popular = reg.a;
    v.f16_reg_notpopular = reg.b;
    v.f17_reg_bad = reg.c;
  }
  const LexicalFeatures lex = lexical_features(domain);
  v.f4_dot_count = lex.dot_count;
  v.f5_entropy = lex.entropy;
  v.f6_length = lex.length;
  v.f7_digit_count = lex.digit_count;
  v.f8_hyphen_count = lex.hyphen_count;
  v.f9_vowel_count = lex.vowel_count;
  v.f10_digit_pct = lex.digit_pct;
  v.f11_unique_alnum = lex.unique_alnum;
  const OneHot3 tld = tld_features(domain, tlds);
  v.f12_tld_generic = tld.a;
  v.f13_tld_unknown = tld.b;
  v.f14_tld_abused = tld.c;
  return v;
}

}  // namespace domsift::features
