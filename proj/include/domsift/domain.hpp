#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

#include "domsift/error.hpp"

namespace domsift {

/// A registered domain name. `raw` is the normalized name; `tld` is
/// whatever follows the last dot (no public-suffix handling), so
/// "a.co.uk" has tld "uk".
struct Domain {
  std::string raw;
  std::string label_part;
  std::string tld;

  friend bool operator==(const Domain&, const Domain&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

/// Normalizes a feed entry into a Domain: lowercases, strips an http(s)
/// scheme and anything from the first '/' onwards, then splits at the
/// last dot.
inline Domain parse_domain(std::string_view input) {
  std::string_view trimmed = detail::trim(input);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyInput, "empty domain");

  std::string s = detail::to_lower(trimmed);
  for (std::string_view scheme : {"http://", "https://"}) {
    if (s.starts_with(scheme)) {
      s.erase(0, scheme.size());
      break;
    }
  }
  if (auto slash = s.find('/'); slash != std::string::npos) s.erase(slash);
  if (s.empty()) throw Error(ErrorCode::EmptyInput, "no host in '" + std::string(trimmed) + "'");

  for (unsigned char c : s) {
    if (std::isspace(c) || std::iscntrl(c))
      throw Error(ErrorCode::IllegalCharacter, "whitespace or control character in '" + s + "'");
  }

  Domain d;
  d.raw = s;
  if (auto dot = s.rfind('.'); dot != std::string::npos) {
    d.label_part = s.substr(0, dot);
    d.tld = s.substr(dot + 1);
  } else {
    d.label_part = s;
  }
  return d;
}

}  // namespace domsift
