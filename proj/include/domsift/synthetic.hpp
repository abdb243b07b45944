#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/features.hpp"
#include "domsift/types.hpp"

namespace domsift::synthetic {

struct Params {
  std::size_t rows = 5000;
  double malicious_fraction = 0.5;
  std::uint64_t seed = 1;
  Date reference_date = make_date(2020, 5, 16);
};

namespace detail {

inline constexpr std::array<std::string_view, 64> kWords = {
    "news",   "shop",   "cloud",  "market", "green",  "blue",   "river",  "stone",  "media",  "travel", "home",
    "garden", "light",  "north",  "south",  "city",   "books",  "music",  "photo",  "design", "sport",  "health",
    "food",   "daily",  "world",  "bank",   "star",   "ocean",  "forest", "apple",  "house",  "smart",  "energy",
    "school", "art",    "studio", "kitchen", "motor", "pet",    "craft",  "data",   "labs",   "group",  "global",
    "local",  "family", "coffee", "wine",   "fresh",  "urban",  "pixel",  "tech",   "hub",    "point",  "line",
    "center", "online", "press",  "store",  "works",  "field",  "bridge", "valley", "summit"};

inline constexpr std::array<std::string_view, 12> kThemeWords = {
    "covid", "corona", "virus", "mask", "test", "vaccine", "relief", "cure", "pandemic", "quarantine", "help", "kit"};

inline constexpr std::array<std::string_view, 8> kUnknownTlds = {"io", "de", "co", "me", "us", "ca", "in", "app"};

inline constexpr std::array<std::string_view, 5> kOtherRegistrars = {"Tucows Domains Inc.", "Gandi SAS", "Porkbun LLC",
                                                                    "Hover", "eNom, LLC"};
inline constexpr std::array<std::string_view, 5> kPopularRegistrars = {"GoDaddy.com, LLC", "NameCheap, Inc.",
                                                                      "Google LLC", "MarkMonitor Inc.", "OVH sas"};
inline constexpr std::array<std::string_view, 4> kBadRegistrars = {"NameSilo, LLC", "DYNADOT LLC", "GMO Internet, Inc.",
                                                                  "Shinjiru Technology Sdn Bhd"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& a, std::mt19937_64& rng) {
  return a[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

inline std::string pick_set(const std::set<std::string>& s, std::mt19937_64& rng) {
  auto it = s.begin();
  std::advance(it, static_cast<long>(std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)));
  return *it;
}

inline bool chance(double p, std::mt19937_64& rng) { return std::bernoulli_distribution(p)(rng); }

inline long uniform(long lo, long hi, std::mt19937_64& rng) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline std::string random_label(std::mt19937_64& rng) {
  static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  const long len = uniform(8, 18, rng);
  std::string s;
  for (long i = 0; i < len; ++i) {
    if (i > 0 && i + 1 < len && s.back() != '-' && chance(0.08, rng)) {
      s.push_back('-');
      continue;
    }
    s.push_back(alphabet[static_cast<std::size_t>(uniform(0, 35, rng))]);
  }
  return s;
}

inline std::string malicious_label(std::mt19937_64& rng) {
  if (chance(0.6, rng)) return random_label(rng);
  std::string s(pick(kThemeWords, rng));
  s += chance(0.6, rng) ? "-" : "";
  s += pick(kThemeWords, rng);
  s += std::to_string(uniform(1, 999, rng));
  if (chance(0.5, rng)) s += "-" + random_label(rng).substr(0, 4);
  return s;
}

inline std::string benign_label(std::mt19937_64& rng) {
  std::string s(pick(kWords, rng));
  if (chance(0.7, rng)) s += pick(kWords, rng);
  if (chance(0.05, rng)) s += pick(kWords, rng);
  return s;
}

}  // namespace detail

/// Seeded two-class benchmark. Names, WHOIS dates and registrars are
/// drawn per class, then every vector is computed by extract_all, so the
/// lexical features are those of real strings.
///
/// Malicious: lifetime ~U[1,60] days, abused TLD with p=0.5, random or
/// themed names with digits and hyphens, registrars skewed to the bad list.
/// Benign: lifetime ~U[700,5000] days, generic TLD with p=0.9, dictionary
/// words, registrars mostly popular.
inline LabeledDataset generate(const Params& params = {}) {
  if (params.rows < 4) throw Error(ErrorCode::InvalidArgument, "synthetic benchmark needs at least 4 rows");
  if (!(params.malicious_fraction > 0.0 && params.malicious_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "malicious fraction must lie in (0, 1)");

  using namespace detail;
  std::mt19937_64 rng(params.seed);
  const auto tlds = features::TldLists::defaults();
  const auto registrars = features::RegistrarLists::defaults();
  const Date ref = params.reference_date;

  LabeledDataset ds;
  ds.coverage = WhoisCoverage::Complete;
  std::unordered_set<std::string> seen;
  const auto n_mal = static_cast<std::size_t>(static_cast<double>(params.rows) * params.malicious_fraction);

  for (std::size_t i = 0; i < params.rows; ++i) {
    const int label = i < n_mal ? 1 : 0;
    std::string name;
    do {
      std::string tld;
      if (label == 1) {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        tld = u < 0.5 ? pick_set(tlds.abused, rng) : u < 0.85 ? pick_set(tlds.generic, rng) : std::string(pick(kUnknownTlds, rng));
        name = malicious_label(rng) + "." + tld;
      } else {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        tld = u < 0.9 ? pick_set(tlds.generic, rng) : u < 0.98 ? std::string(pick(kUnknownTlds, rng)) : pick_set(tlds.abused, rng);
        name = benign_label(rng) + "." + tld;
      }
    } while (!seen.insert(name).second);

    WhoisRecord w;
    w.domain = parse_domain(name);
    w.fetched_on = ref;
    long lifetime, remaining, since_update;
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (label == 1) {
      lifetime = uniform(1, 60, rng);
      remaining = std::max<long>(1, 365 - lifetime + uniform(-5, 5, rng));
      since_update = uniform(0, lifetime, rng);
      w.registrar_raw = std::string(u < 0.45 ? pick(kBadRegistrars, rng) : u < 0.85 ? pick(kPopularRegistrars, rng)
                                                                                   : pick(kOtherRegistrars, rng));
    } else {
      lifetime = uniform(700, 5000, rng);
      remaining = uniform(30, 3000, rng);
      since_update = uniform(0, std::min<long>(lifetime, 1000), rng);
      w.registrar_raw = std::string(u < 0.75 ? pick(kPopularRegistrars, rng) : u < 0.97 ? pick(kOtherRegistrars, rng)
                                                                                      : pick(kBadRegistrars, rng));
    }
    w.created = add_days(ref, -lifetime);
    w.expires = add_days(ref, remaining);
    w.updated = add_days(ref, -since_update);
    w.registrar_canonical = features::canonicalize_registrar(*w.registrar_raw, registrars);

    LabeledRow row;
    row.domain = w.domain;
    row.features = features::extract_all(row.domain, w, tlds, registrars, ref);
    row.label = label;
    row.source = label == 1 ? "synthetic-malicious" : "synthetic-benign";
    ds.rows.push_back(std::move(row));
  }
  std::shuffle(ds.rows.begin(), ds.rows.end(), rng);
  return ds;
}

}  // namespace domsift::synthetic
