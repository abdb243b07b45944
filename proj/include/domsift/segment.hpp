#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "domsift/domain.hpp"
#include "domsift/error.hpp"

namespace domsift::segment {

/// Ranked vocabulary for word segmentation. Theme words passed as
/// `boosted` are moved to the front, in order, ahead of the base ranking.
class LanguageModel {
 public:
  LanguageModel() = default;

  LanguageModel(const std::vector<std::string>& words, const std::vector<std::string>& boosted) {
    auto add = [this](const std::string& w) {
      if (w.empty()) return;
      for (char c : w)
        if (c < 'a' || c > 'z') throw Error(ErrorCode::InvalidArgument, "vocabulary word '" + w + "' is not a-z");
      if (rank_.try_emplace(w, ranked_.size() + 1).second) {
        ranked_.push_back(w);
        if (w.size() > max_len_) max_len_ = w.size();
      }
    };
    for (const auto& w : boosted) add(w);
    boosted_count_ = ranked_.size();
    for (const auto& w : words) add(w);

    const double n = static_cast<double>(ranked_.size());
    log_n_ = std::log(n + 1.0);
    oov_char_cost_ = 10.0 + log_n_;
  }

  std::size_t size() const { return ranked_.size(); }
  std::size_t boosted_count() const { return boosted_count_; }
  std::size_t max_word_length() const { return max_len_; }
  const std::vector<std::string>& words() const { return ranked_; }

  /// 1-based rank, 0 when out of vocabulary.
  std::size_t rank(std::string_view w) const {
    auto it = rank_.find(std::string(w));
    return it == rank_.end() ? 0 : it->second;
  }

  /// ln(rank * ln(N+1)) for an in-vocabulary word.
  double word_cost(std::size_t rank) const { return std::log(static_cast<double>(rank) * log_n_); }

  /// Cost of an unmatched run of `length` characters.
  double oov_cost(std::size_t length) const { return static_cast<double>(length) * oov_char_cost_; }

 private:
  std::vector<std::string> ranked_;
  std::unordered_map<std::string, std::size_t> rank_;
  std::size_t boosted_count_ = 0;
  std::size_t max_len_ = 0;
  double log_n_ = 0.0;
  double oov_char_cost_ = 10.0;
};

namespace detail {

inline std::vector<std::string> read_word_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view w = ::domsift::detail::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.push_back(::domsift::detail::to_lower(w));
  }
  return words;
}

}  // namespace detail

/// Newline-delimited wordlist, most frequent first, plus an optional
/// boost file in the same format.
inline LanguageModel load_language_model(const std::filesystem::path& wordlist,
                                         const std::filesystem::path& boost = {}) {
  std::vector<std::string> boosted;
  if (!boost.empty()) boosted = detail::read_word_lines(boost);
  return LanguageModel(detail::read_word_lines(wordlist), boosted);
}

/// Minimum-cost split of one separator-free chunk. Candidates are ordered
/// by (total cost, word count, token sequence); unmatched characters are
/// grouped into maximal runs.
inline std::vector<std::string> segment_chunk(std::string_view text, const LanguageModel& model) {
  const std::size_t n = text.size();
  if (n == 0) return {};

  // state[i][after_oov]: best segmentation of text[i..n). When after_oov is
  // set the preceding token was an unmatched run, so the next token must be
  // a vocabulary word (runs are maximal).
  struct State {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    std::size_t next = 0;
    bool oov = false;
  };
  std::vector<std::array<State, 2>> best(n + 1);
  best[n][0] = best[n][1] = State{0.0, 0, n, false};

  auto tokens_from = [&](std::size_t i, int after_oov) {
    std::vector<std::string_view> out;
    while (i < n) {
      const State& s = best[i][after_oov];
      out.push_back(text.substr(i, s.next - i));
      after_oov = s.oov ? 1 : 0;
      i = s.next;
    }
    return out;
  };

  // Is [token] + tail(j, tail_state) better than the current best at (i, st)?
  auto better = [&](std::size_t i, int st, double cost, std::size_t count, std::size_t j, bool oov) {
    const State& cur = best[i][st];
    if (cost != cur.cost) return cost < cur.cost;
    if (count != cur.count) return count < cur.count;
    std::vector<std::string_view> cand{text.substr(i, j - i)};
    auto tail = tokens_from(j, oov ? 1 : 0);
    cand.insert(cand.end(), tail.begin(), tail.end());
    return cand < tokens_from(i, st);
  };

  for (std::size_t i = n; i-- > 0;) {
    for (int st = 0; st < 2; ++st) {
      const std::size_t max_j = std::min(n, i + model.max_word_length());
      for (std::size_t j = i + 1; j <= max_j; ++j) {
        const std::size_t r = model.rank(text.substr(i, j - i));
        if (r == 0) continue;
        const State& tail = best[j][0];
        if (!std::isfinite(tail.cost)) continue;
        const double cost = model.word_cost(r) + tail.cost;
        const std::size_t count = tail.count + 1;
        if (better(i, st, cost, count, j, false)) best[i][st] = State{cost, count, j, false};
      }
      if (st == 1) continue;
      for (std::size_t j = i + 1; j <= n; ++j) {
        const State& tail = best[j][1];
        if (!std::isfinite(tail.cost)) continue;
        const double cost = model.oov_cost(j - i) + tail.cost;
        const std::size_t count = tail.count + 1;
        if (better(i, st, cost, count, j, true)) best[i][st] = State{cost, count, j, true};
      }
    }
  }

  std::vector<std::string> out;
  for (auto t : tokens_from(0, 0)) out.emplace_back(t);
  return out;
}

/// Splits a domain label into words. Dots and hyphens are hard
/// boundaries; each piece between them is segmented on its own.
inline std::vector<std::string> segment_keywords(std::string_view label_part, const LanguageModel& model) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= label_part.size(); ++i) {
    if (i == label_part.size() || label_part[i] == '.' || label_part[i] == '-') {
      auto piece = segment_chunk(label_part.substr(start, i - start), model);
      out.insert(out.end(), piece.begin(), piece.end());
      start = i + 1;
    }
  }
  return out;
}

}  // namespace domsift::segment
