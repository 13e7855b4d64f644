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


#ifndef FIDEL_EVAL_DIAGNOSTICS_HPP_
#define FIDEL_EVAL_DIAGNOSTICS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fidel_eval/ethiopic.hpp"
#include "fidel_eval/metrics.hpp"
#include "fidel_eval/unicode.hpp"

namespace fidel {

// Degenerate hypothesis detection: off-script output and runaway repetition.

struct DiagnosticThresholds {
  double min_ethiopic_ratio = 0.5;  // non_ethiopic when ratio < this
  std::size_t max_char_run = 10;    // repetitive when a char run >= this
  std::size_t max_token_run = 5;    // repetitive when a token run >= this
};

enum class Verdict : std::uint8_t { kNonEthiopic = 0, kRepetitive = 1, kEmpty = 2 };

inline const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kNonEthiopic: return "non_ethiopic";
    case Verdict::kRepetitive: return "repetitive";
    case Verdict::kEmpty: return "empty";
  }
  return "unknown";
}

class VerdictSet {
 public:
  static constexpr Verdict kAll[] = {Verdict::kNonEthiopic, Verdict::kRepetitive, Verdict::kEmpty};

  void Insert(Verdict v) { bits_ |= Bit(v); }
  bool Contains(Verdict v) const { return (bits_ & Bit(v)) != 0; }
  bool empty() const { return bits_ == 0; }
  // Set inclusion.
  bool IsSubsetOf(const VerdictSet& other) const { return (bits_ & ~other.bits_) == 0; }

  std::vector<std::string> Names() const {
    std::vector<std::string> names;
    for (Verdict v : kAll) {
      if (Contains(v)) names.emplace_back(VerdictName(v));
    }
    return names;
  }

  friend bool operator==(const VerdictSet&, const VerdictSet&) = default;

 private:
  static std::uint8_t Bit(Verdict v) { return static_cast<std::uint8_t>(1u << static_cast<int>(v)); }
  std::uint8_t bits_ = 0;
};

struct DiagnosticFlags {
  double ethiopic_ratio = 0.0;
  std::size_t max_char_run = 0;
  std::size_t max_token_run = 0;
  VerdictSet verdicts;
};

namespace detail {

inline double EthiopicRatio(std::u32string_view text) {
  std::size_t ethiopic = 0;
  std::size_t visible = 0;
  for (char32_t c : text) {
    if (unicode::IsWhitespace(c)) continue;
    ++visible;
    if (IsEthiopic(c)) ++ethiopic;
  }
  return visible == 0 ? 0.0 : static_cast<double>(ethiopic) / static_cast<double>(visible);
}

}  // namespace detail

// Ethiopic codepoints over non-whitespace codepoints; 0 for blank text.
inline double EthiopicRatio(std::string_view text) {
  return detail::EthiopicRatio(unicode::DecodeUtf8Lenient(text));
}

struct RepetitionRuns {
  std::size_t max_char_run = 0;
  std::size_t max_token_run = 0;

  friend bool operator==(const RepetitionRuns&, const RepetitionRuns&) = default;
};

// Whitespace breaks character runs and is never counted in one.
inline RepetitionRuns MaxRepetitionRuns(std::string_view text) {
  const std::u32string codepoints = unicode::DecodeUtf8Lenient(text);
  RepetitionRuns runs;
  std::size_t current = 0;
  char32_t previous = 0;
  for (char32_t c : codepoints) {
    if (unicode::IsWhitespace(c)) {
      current = 0;
      continue;
    }
    current = (current > 0 && c == previous) ? current + 1 : 1;
    previous = c;
    runs.max_char_run = std::max(runs.max_char_run, current);
  }
  const auto tokens = unicode::SplitWhitespace(codepoints);
  current = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    current = (i > 0 && tokens[i] == tokens[i - 1]) ? current + 1 : 1;
    runs.max_token_run = std::max(runs.max_token_run, current);
  }
  return runs;
}

inline DiagnosticFlags Diagnose(std::string_view hyp, const DiagnosticThresholds& thresholds = {}) {
  const std::u32string codepoints = unicode::DecodeUtf8Lenient(hyp);
  DiagnosticFlags flags;
  flags.ethiopic_ratio = detail::EthiopicRatio(codepoints);
  const RepetitionRuns runs = MaxRepetitionRuns(hyp);
  flags.max_char_run = runs.max_char_run;
  flags.max_token_run = runs.max_token_run;
  if (unicode::SplitWhitespace(codepoints).empty()) {
    flags.verdicts.Insert(Verdict::kEmpty);
    return flags;
  }
  if (flags.ethiopic_ratio < thresholds.min_ethiopic_ratio) {
    flags.verdicts.Insert(Verdict::kNonEthiopic);
  }
  if (flags.max_char_run >= thresholds.max_char_run ||
      flags.max_token_run >= thresholds.max_token_run) {
    flags.verdicts.Insert(Verdict::kRepetitive);
  }
  return flags;
}

struct FlaggedPair {
  std::string id;
  DiagnosticFlags flags;
};

struct DiagnosticSummary {
  std::size_t pair_count = 0;
  std::size_t non_ethiopic = 0;
  std::size_t repetitive = 0;
  std::size_t empty = 0;
  std::vector<FlaggedPair> flagged;  // input order

  double FlaggedFraction() const {
    return pair_count == 0 ? 0.0
                           : static_cast<double>(flagged.size()) / static_cast<double>(pair_count);
  }
};

template <TextPairRange R>
DiagnosticSummary DiagnoseCorpus(const R& pairs, const DiagnosticThresholds& thresholds = {}) {
  DiagnosticSummary summary;
  for (const auto& pair : pairs) {
    ++summary.pair_count;
    DiagnosticFlags flags = Diagnose(pair.hyp, thresholds);
    if (flags.verdicts.empty()) continue;
    if (flags.verdicts.Contains(Verdict::kNonEthiopic)) ++summary.non_ethiopic;
    if (flags.verdicts.Contains(Verdict::kRepetitive)) ++summary.repetitive;
    if (flags.verdicts.Contains(Verdict::kEmpty)) ++summary.empty;
    summary.flagged.push_back({std::string(pair.id), flags});
  }
  return summary;
}

}  // namespace fidel

#endif  // FIDEL_EVAL_DIAGNOSTICS_HPP_
