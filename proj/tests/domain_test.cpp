#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "domsift/csv.hpp"
#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/types.hpp"

using namespace domsift;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no domsift::Error thrown";
  return ErrorCode::InvalidArgument;
}

// Day counting by walking the calendar one day at a time with its own
// month-length table.
bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }
int month_len(int y, int m) {
  static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : len[m - 1];
}
long walk_days(int y0, int m0, int d0, int y1, int m1, int d1) {
  auto key = [](int y, int m, int d) { return y * 10000L + m * 100 + d; };
  long sign = 1;
  if (key(y0, m0, d0) > key(y1, m1, d1)) {
    std::swap(y0, y1), std::swap(m0, m1), std::swap(d0, d1);
    sign = -1;
  }
  long n = 0;
  while (key(y0, m0, d0) != key(y1, m1, d1)) {
    if (++d0 > month_len(y0, m0)) {
      d0 = 1;
      if (++m0 > 12) m0 = 1, ++y0;
    }
    ++n;
  }
  return sign * n;
}

}  // namespace

TEST(ParseDomain, LowercasesAndSplitsAtLastDot) {
  const Domain d = parse_domain("ANY.COM");
  EXPECT_EQ(d.raw, "any.com");
  EXPECT_EQ(d.label_part, "any");
  EXPECT_EQ(d.tld, "com");
}

TEST(ParseDomain, StripsSchemeAndPath) {
  const Domain d = parse_domain("https://covid19.com/path");
  EXPECT_EQ(d, (Domain{"covid19.com", "covid19", "com"}));
  EXPECT_EQ(parse_domain("http://x.tk/a/b?c").raw, "x.tk");
}

TEST(ParseDomain, DotlessNameHasEmptyTld) {
  EXPECT_EQ(parse_domain("localhost"), (Domain{"localhost", "localhost", ""}));
}

TEST(ParseDomain, MultiLabelUsesFinalSuffix) {
  const Domain d = parse_domain("shop.example.co.uk");
  EXPECT_EQ(d.label_part, "shop.example.co");
  EXPECT_EQ(d.tld, "uk");
  EXPECT_EQ(d.label_part + "." + d.tld, d.raw);
}

TEST(ParseDomain, TrimsSurroundingWhitespace) { EXPECT_EQ(parse_domain("  Example.ORG\t").raw, "example.org"); }

TEST(ParseDomain, Errors) {
  EXPECT_EQ(code_of([] { parse_domain(""); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { parse_domain("   "); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { parse_domain("https:///x"); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { parse_domain("bad name.com"); }), ErrorCode::IllegalCharacter);
  EXPECT_EQ(code_of([] { parse_domain(std::string("a\x01.com")); }), ErrorCode::IllegalCharacter);
}

TEST(ParseDomain, IdempotentOnRandomInputs) {
  std::mt19937 rng(7);
  const std::string alphabet = "abcXYZ019-.";
  for (int n = 0; n < 2000; ++n) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    if (rng() % 3 == 0) s = "HTTPS://" + s;
    const Domain once = parse_domain(s);
    const Domain twice = parse_domain(once.raw);
    EXPECT_EQ(once, twice) << s;
    if (!once.tld.empty()) EXPECT_EQ(once.label_part + "." + once.tld, once.raw);
  }
}

TEST(Dates, ParseAndFormat) {
  EXPECT_EQ(parse_iso_date("2020-03-15"), make_date(2020, 3, 15));
  EXPECT_EQ(parse_iso_date("2020-03-15T00:00:00Z"), make_date(2020, 3, 15));
  EXPECT_EQ(format_date(make_date(2020, 2, 1)), "2020-02-01");
  EXPECT_FALSE(try_parse_iso_date("2020-02-30"));
  EXPECT_FALSE(try_parse_iso_date("2020/02/01"));
  EXPECT_FALSE(try_parse_iso_date("2020-02-011"));
  EXPECT_EQ(code_of([] { parse_iso_date("yesterday"); }), ErrorCode::InvalidDate);
}

TEST(Dates, DayDifferenceMatchesWalkingCalendar) {
  std::mt19937 rng(20200516);
  std::uniform_int_distribution<int> year(1996, 2032), month(1, 12);
  for (int n = 0; n < 1000; ++n) {
    const int y0 = year(rng), m0 = month(rng), y1 = year(rng), m1 = month(rng);
    const int d0 = 1 + static_cast<int>(rng() % month_len(y0, m0));
    const int d1 = 1 + static_cast<int>(rng() % month_len(y1, m1));
    const Date a = make_date(y0, m0, d0), b = make_date(y1, m1, d1);
    EXPECT_EQ(days_between(a, b), walk_days(y0, m0, d0, y1, m1, d1));
    EXPECT_EQ(add_days(a, days_between(a, b)), b);
  }
}

TEST(Dates, LeapYearDifferences) {
  EXPECT_EQ(days_between(make_date(2020, 2, 1), make_date(2020, 5, 16)), 105);
  EXPECT_EQ(days_between(make_date(2020, 5, 16), make_date(2021, 2, 1)), 261);
  EXPECT_EQ(days_between(make_date(2000, 2, 28), make_date(2000, 3, 1)), 2);
  EXPECT_EQ(days_between(make_date(1900, 2, 28), make_date(1900, 3, 1)), 1);
}

TEST(FeatureVectorType, IndexedAccessAndNames) {
  FeatureVector v;
  v.f1_reg_lifetime_days = 12;
  v.f5_entropy = 2.5;
  v.f17_reg_bad = 1;
  EXPECT_EQ(v.value(0), 12.0);
  EXPECT_FALSE(v.value(1).has_value());
  EXPECT_EQ(v.value(4), 2.5);
  EXPECT_EQ(v.value(16), 1.0);
  EXPECT_FALSE(v.value(17).has_value());
  EXPECT_EQ(feature_name(0), "F1");
  EXPECT_EQ(feature_name(16), "F17");
}

TEST(Csv, QuotedFieldsAndComments) {
  std::istringstream in("# note=1\na,\"b,c\",\"d\"\"e\"\n\"multi\nline\",x\n");
  std::vector<std::string> comments;
  auto r1 = csv::read_record(in, &comments);
  ASSERT_TRUE(r1);
  EXPECT_EQ(*r1, (csv::Record{"a", "b,c", "d\"e"}));
  EXPECT_EQ(comments, (std::vector<std::string>{" note=1"}));
  auto r2 = csv::read_record(in);
  ASSERT_TRUE(r2);
  EXPECT_EQ(*r2, (csv::Record{"multi\nline", "x"}));
  EXPECT_FALSE(csv::read_record(in));
}

TEST(Csv, WriteReadRoundTrip) {
  const csv::Record rec{"plain", "with,comma", "with\"quote", "", "line\nbreak"};
  std::stringstream ss;
  csv::write_record(ss, rec);
  EXPECT_EQ(csv::read_record(ss), rec);
}

TEST(Csv, HeaderRequireReportsMissingColumn) {
  csv::Header h({"domain", "label"});
  EXPECT_EQ(h.require("label", "x"), 1u);
  EXPECT_EQ(code_of([&] { h.require("first_seen", "feed.csv"); }), ErrorCode::SchemaMismatch);
}
