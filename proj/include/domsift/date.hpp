#pragma once

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "domsift/error.hpp"

namespace domsift {

/// Calendar date at day granularity (UTC).
using Date = std::chrono::year_month_day;

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Parses the leading YYYY-MM-DD of `text`; any time-of-day suffix
/// ("T00:00:00Z", " 12:00:00") is discarded.
inline std::optional<Date> try_parse_iso_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto digits = [](std::string_view s, auto& out) {
    for (char c : s)
      if (c < '0' || c > '9') return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
  };
  if (!digits(text.substr(0, 4), y) || !digits(text.substr(5, 2), m) ||
      !digits(text.substr(8, 2), d))
    return std::nullopt;
  if (text.size() > 10 && std::isdigit(static_cast<unsigned char>(text[10])))
    return std::nullopt;
  Date date = make_date(y, m, d);
  if (!date.ok()) return std::nullopt;
  return date;
}

inline Date parse_iso_date(std::string_view text) {
  auto d = try_parse_iso_date(text);
  if (!d) throw Error(ErrorCode::InvalidDate, "not an ISO-8601 date: '" + std::string(text) + "'");
  return *d;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

/// Signed number of days from `from` to `to`.
inline long days_between(const Date& from, const Date& to) {
  return (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count();
}

inline Date add_days(const Date& d, long n) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{n}};
}

inline Date today_utc() {
  return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

}  // namespace domsift
