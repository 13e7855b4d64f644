// Copyright (c) 2026 The fidel-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Edit-distance error rates (WER, CER) and BLEU.
//
// All corpus-level figures are reduced from integer counts or from sorted
// per-pair values, so the result does not depend on pair order.

#ifndef FIDEL_EVAL_METRICS_HPP_
#define FIDEL_EVAL_METRICS_HPP_

#include <unicode/uchar.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fidel_eval/error.hpp"
#include "fidel_eval/ethiopic.hpp"
#include "fidel_eval/unicode.hpp"

namespace fidel {

inline constexpr int kDefaultMaxOrder = 4;

struct TextOptions {
  // Drop ASCII punctuation and Ethiopic full stop / comma; the Ethiopic
  // wordspace (U+1361) becomes a space since it separates words.
  bool strip_punct = false;
  // Simple case folding of non-Ethiopic letters.
  bool case_fold = false;
};

enum class Aggregation {
  kPooled,            // total edits / total reference length
  kPerUtteranceMean,  // mean of per-pair rates
};

template <class P>
concept TextPairLike = requires(const P& p) {
  { std::string_view(p.id) };
  { std::string_view(p.ref) };
  { std::string_view(p.hyp) };
};

template <class R>
concept TextPairRange =
    std::ranges::forward_range<R> && TextPairLike<std::ranges::range_value_t<R>>;

// ---------------------------------------------------------------------------
// Text preparation

namespace detail {

inline bool IsStrippedPunct(char32_t c) {
  if (c < 0x80) return std::ispunct(static_cast<int>(c)) != 0;
  return c == 0x1362 || c == 0x1363;
}

}  // namespace detail

// NFC composition, then homophone normalization (if `table` is given), then
// the optional punctuation stripping and case folding.
inline std::u32string PrepareText(std::string_view text, const TextOptions& options = {},
                                  const NormalizationTable* table = nullptr,
                                  NormalizationStats* stats = nullptr) {
  std::u32string codepoints = unicode::DecodeUtf8(unicode::ToNfc(text));
  if (table != nullptr) NormalizeCodepoints(codepoints, *table, stats);
  if (options.strip_punct) {
    std::u32string kept;
    kept.reserve(codepoints.size());
    for (char32_t c : codepoints) {
      if (c == 0x1361) {
        kept.push_back(U' ');
      } else if (!detail::IsStrippedPunct(c)) {
        kept.push_back(c);
      }
    }
    codepoints.swap(kept);
  }
  if (options.case_fold) {
    for (char32_t& c : codepoints) {
      if (!IsEthiopic(c)) {
        c = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
      }
    }
  }
  return codepoints;
}

inline std::vector<std::string> TokenizeWords(std::string_view text,
                                              const TextOptions& options = {}) {
  const std::u32string prepared = PrepareText(text, options);
  std::vector<std::string> words;
  for (std::u32string_view w : unicode::SplitWhitespace(prepared)) {
    words.push_back(unicode::EncodeUtf8(w));
  }
  return words;
}

// ---------------------------------------------------------------------------
// Levenshtein distance, unit costs. Two-row DP over the shorter sequence.

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t EditDistance(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  if (n < m) return EditDistance(b, a);
  if (m == 0) return n;
  auto ai = std::ranges::begin(a);
  auto bi = std::ranges::begin(b);
  std::vector<std::size_t> row(m + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t up = row[j];
      const std::size_t substitute = diag + (ai[i - 1] == bi[j - 1] ? 0 : 1);
      row[j] = std::min({substitute, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[m];
}

// ---------------------------------------------------------------------------
// BLEU counting

struct BleuCounts {
  std::vector<std::size_t> matches;     // clipped n-gram matches, index n-1
  std::vector<std::size_t> candidates;  // hypothesis n-grams, index n-1
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  explicit BleuCounts(int max_order = kDefaultMaxOrder)
      : matches(static_cast<std::size_t>(max_order), 0),
        candidates(static_cast<std::size_t>(max_order), 0) {}

  int max_order() const { return static_cast<int>(matches.size()); }

  BleuCounts& operator+=(const BleuCounts& other) {
    for (std::size_t n = 0; n < matches.size() && n < other.matches.size(); ++n) {
      matches[n] += other.matches[n];
      candidates[n] += other.candidates[n];
    }
    hyp_length += other.hyp_length;
    ref_length += other.ref_length;
    return *this;
  }
};

struct BleuBreakdown {
  std::vector<double> precisions;  // 0 for orders with no candidates
  double brevity_penalty = 0.0;
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;
};

struct BleuResult {
  double score = 0.0;  // percent
  BleuBreakdown breakdown;
};

namespace detail {

template <class Token>
std::vector<std::span<const Token>> SortedNgrams(std::span<const Token> tokens, std::size_t n) {
  std::vector<std::span<const Token>> grams;
  if (tokens.size() < n) return grams;
  grams.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) grams.push_back(tokens.subspan(i, n));
  std::sort(grams.begin(), grams.end(), [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  return grams;
}

// Sum over distinct hypothesis n-grams of min(hyp count, ref count).
template <class Token>
std::size_t ClippedMatches(const std::vector<std::span<const Token>>& ref,
                           const std::vector<std::span<const Token>>& hyp) {
  const auto less = [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  const auto equal = [](const auto& x, const auto& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
  };
  std::size_t matches = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ref.size() && j < hyp.size()) {
    if (less(ref[i], hyp[j])) {
      ++i;
    } else if (less(hyp[j], ref[i])) {
      ++j;
    } else {
      std::size_t ref_count = 0;
      std::size_t hyp_count = 0;
      const auto gram = hyp[j];
      while (i < ref.size() && equal(ref[i], gram)) ++i, ++ref_count;
      while (j < hyp.size() && equal(hyp[j], gram)) ++j, ++hyp_count;
      matches += std::min(ref_count, hyp_count);
    }
  }
  return matches;
}

}  // namespace detail

template <class Token>
BleuCounts CountNgrams(std::span<const Token> ref, std::span<const Token> hyp,
                       int max_order = kDefaultMaxOrder) {
  BleuCounts counts(max_order);
  counts.hyp_length = hyp.size();
  counts.ref_length = ref.size();
  for (int n = 1; n <= max_order; ++n) {
    const auto order = static_cast<std::size_t>(n);
    if (hyp.size() < order) break;
    const auto hyp_grams = detail::SortedNgrams(hyp, order);
    counts.candidates[order - 1] = hyp_grams.size();
    if (ref.size() >= order) {
      counts.matches[order - 1] = detail::ClippedMatches(detail::SortedNgrams(ref, order), hyp_grams);
    }
  }
  return counts;
}

inline double BrevityPenalty(std::size_t hyp_length, std::size_t ref_length) {
  if (hyp_length == 0) return 0.0;
  if (hyp_length >= ref_length) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_length) / static_cast<double>(hyp_length));
}

// Unsmoothed BLEU with uniform weights; zero if any pooled precision is zero.
inline BleuResult CorpusBleuFromCounts(const BleuCounts& counts) {
  BleuResult result;
  BleuBreakdown& b = result.breakdown;
  b.hyp_length = counts.hyp_length;
  b.ref_length = counts.ref_length;
  b.brevity_penalty = BrevityPenalty(counts.hyp_length, counts.ref_length);
  bool any_zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < counts.matches.size(); ++n) {
    const double p = counts.candidates[n] == 0
                         ? 0.0
                         : static_cast<double>(counts.matches[n]) /
                               static_cast<double>(counts.candidates[n]);
    b.precisions.push_back(p);
    if (p == 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  if (any_zero || counts.matches.empty()) {
    result.score = 0.0;
  } else {
    result.score = 100.0 * b.brevity_penalty *
                   std::exp(log_sum / static_cast<double>(counts.matches.size()));
  }
  return result;
}

// Smoothed single-pair BLEU. Orders with no hypothesis n-grams are dropped
// and the weights renormalized over the rest; an order n >= 2 with zero
// matches uses (0 + 1) / (candidates + 1). Zero unigram matches give 0.
inline double SentenceBleuFromCounts(const BleuCounts& counts) {
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t n = 0; n < counts.matches.size(); ++n) {
    const std::size_t c = counts.candidates[n];
    if (c == 0) continue;
    const std::size_t m = counts.matches[n];
    double p;
    if (m > 0) {
      p = static_cast<double>(m) / static_cast<double>(c);
    } else if (n == 0) {
      return 0.0;
    } else {
      p = 1.0 / static_cast<double>(c + 1);
    }
    log_sum += std::log(p);
    ++used;
  }
  if (used == 0) return 0.0;
  return 100.0 * BrevityPenalty(counts.hyp_length, counts.ref_length) *
         std::exp(log_sum / used);
}

// ---------------------------------------------------------------------------
// Per-pair scoring

struct EditCounts {
  std::size_t edits = 0;
  std::size_t ref_length = 0;

  double Rate() const {
    return 100.0 * static_cast<double>(edits) / static_cast<double>(ref_length);
  }
};

struct PairScore {
  EditCounts words;
  EditCounts chars;
  BleuCounts bleu;
  double sentence_bleu = 0.0;
};

// Scores prepared (see PrepareText) codepoint strings. Throws
// ErrorCode::kEmptyReference naming `id` when the reference has no words.
inline PairScore ScorePreparedPair(std::string_view id, std::u32string_view ref,
                                   std::u32string_view hyp, int max_order = kDefaultMaxOrder) {
  const auto ref_words = unicode::SplitWhitespace(ref);
  if (ref_words.empty()) {
    throw Error(ErrorCode::kEmptyReference, "empty reference for pair '" + std::string(id) + "'",
                0, std::string(id));
  }
  const auto hyp_words = unicode::SplitWhitespace(hyp);
  const std::u32string ref_chars = unicode::CollapseWhitespace(ref);
  const std::u32string hyp_chars = unicode::CollapseWhitespace(hyp);

  PairScore score;
  score.words = {EditDistance(ref_words, hyp_words), ref_words.size()};
  score.chars = {EditDistance(ref_chars, hyp_chars), ref_chars.size()};
  score.bleu = CountNgrams(std::span<const std::u32string_view>(ref_words),
                           std::span<const std::u32string_view>(hyp_words), max_order);
  score.sentence_bleu = SentenceBleuFromCounts(score.bleu);
  return score;
}

inline PairScore ScorePair(std::string_view id, std::string_view ref, std::string_view hyp,
                           const TextOptions& options = {}, int max_order = kDefaultMaxOrder,
                           const NormalizationTable* table = nullptr,
                           NormalizationStats* stats = nullptr) {
  const std::u32string r = PrepareText(ref, options, table, stats);
  const std::u32string h = PrepareText(hyp, options, table, stats);
  return ScorePreparedPair(id, r, h, max_order);
}

// ---------------------------------------------------------------------------
// Corpus reduction

struct MetricScores {
  double wer = 0.0;  // percent, may exceed 100
  double cer = 0.0;  // percent, may exceed 100
  double corpus_bleu = 0.0;
  double avg_bleu = 0.0;
  std::size_t pair_count = 0;

  friend bool operator==(const MetricScores&, const MetricScores&) = default;
};

namespace detail {

// Sorting first makes the floating-point sum independent of pair order.
inline double OrderIndependentMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace detail

class CorpusAccumulator {
 public:
  explicit CorpusAccumulator(int max_order = kDefaultMaxOrder) : bleu_(max_order) {}

  void Add(const PairScore& score) {
    words_.edits += score.words.edits;
    words_.ref_length += score.words.ref_length;
    chars_.edits += score.chars.edits;
    chars_.ref_length += score.chars.ref_length;
    bleu_ += score.bleu;
    word_rates_.push_back(score.words.Rate());
    char_rates_.push_back(score.chars.Rate());
    sentence_bleu_.push_back(score.sentence_bleu);
  }

  std::size_t size() const { return sentence_bleu_.size(); }

  double Wer(Aggregation aggregation = Aggregation::kPooled) const {
    RequireNonEmpty();
    return aggregation == Aggregation::kPooled ? words_.Rate()
                                               : detail::OrderIndependentMean(word_rates_);
  }

  double Cer(Aggregation aggregation = Aggregation::kPooled) const {
    RequireNonEmpty();
    return aggregation == Aggregation::kPooled ? chars_.Rate()
                                               : detail::OrderIndependentMean(char_rates_);
  }

  BleuResult CorpusBleu() const {
    RequireNonEmpty();
    return CorpusBleuFromCounts(bleu_);
  }

  double AvgBleu() const {
    RequireNonEmpty();
    return detail::OrderIndependentMean(sentence_bleu_);
  }

  MetricScores Finish(Aggregation aggregation = Aggregation::kPooled) const {
    return {Wer(aggregation), Cer(aggregation), CorpusBleu().score, AvgBleu(), size()};
  }

  const EditCounts& word_counts() const { return words_; }
  const EditCounts& char_counts() const { return chars_; }
  const BleuCounts& bleu_counts() const { return bleu_; }

 private:
  void RequireNonEmpty() const {
    if (sentence_bleu_.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus contains no pairs");
  }

  EditCounts words_;
  EditCounts chars_;
  BleuCounts bleu_;
  std::vector<double> word_rates_;
  std::vector<double> char_rates_;
  std::vector<double> sentence_bleu_;
};

template <TextPairRange R>
CorpusAccumulator AccumulateCorpus(const R& pairs, const TextOptions& options = {},
                                   int max_order = kDefaultMaxOrder,
                                   const NormalizationTable* table = nullptr,
                                   NormalizationStats* stats = nullptr) {
  CorpusAccumulator acc(max_order);
  for (const auto& pair : pairs) {
    acc.Add(ScorePair(pair.id, pair.ref, pair.hyp, options, max_order, table, stats));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Single-pair metrics

inline double Wer(std::string_view ref, std::string_view hyp, const TextOptions& options = {}) {
  return ScorePair("", ref, hyp, options).words.Rate();
}

inline double Cer(std::string_view ref, std::string_view hyp, const TextOptions& options = {}) {
  return ScorePair("", ref, hyp, options).chars.Rate();
}

inline double SentenceBleu(std::string_view ref, std::string_view hyp,
                           const TextOptions& options = {}, int max_order = kDefaultMaxOrder) {
  return ScorePair("", ref, hyp, options, max_order).sentence_bleu;
}

// ---------------------------------------------------------------------------
// Corpus metrics

template <TextPairRange R>
double CorpusWer(const R& pairs, const TextOptions& options = {},
                 Aggregation aggregation = Aggregation::kPooled) {
  return AccumulateCorpus(pairs, options).Wer(aggregation);
}

template <TextPairRange R>
double CorpusCer(const R& pairs, const TextOptions& options = {},
                 Aggregation aggregation = Aggregation::kPooled) {
  return AccumulateCorpus(pairs, options).Cer(aggregation);
}

// Pooled BLEU. Unlike the other corpus metrics this accepts pairs whose
// reference is empty; they only contribute hypothesis n-grams.
template <TextPairRange R>
BleuResult CorpusBleu(const R& pairs, const TextOptions& options = {},
                      int max_order = kDefaultMaxOrder) {
  BleuCounts counts(max_order);
  std::size_t n = 0;
  for (const auto& pair : pairs) {
    const std::u32string ref = PrepareText(pair.ref, options);
    const std::u32string hyp = PrepareText(pair.hyp, options);
    const auto ref_words = unicode::SplitWhitespace(ref);
    const auto hyp_words = unicode::SplitWhitespace(hyp);
    counts += CountNgrams(std::span<const std::u32string_view>(ref_words),
                          std::span<const std::u32string_view>(hyp_words), max_order);
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus contains no pairs");
  return CorpusBleuFromCounts(counts);
}

template <TextPairRange R>
double AvgBleu(const R& pairs, const TextOptions& options = {},
               int max_order = kDefaultMaxOrder) {
  return AccumulateCorpus(pairs, options, max_order).AvgBleu();
}

}  // namespace fidel

#endif  // FIDEL_EVAL_METRICS_HPP_
