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


// Ethiopic script model: syllable decomposition into consonant series and
// vowel order, and homophone normalization.
//
// The core Ethiopic block is laid out in 8-codepoint series starting at
// U+1200; the offset within a series is the vowel order. Homophone families
// are sets of series that share a pronunciation in modern Amharic. A
// NormalizationTable folds every member series onto a canonical series slot
// by slot, so the vowel order of each character is preserved.

#ifndef FIDEL_EVAL_ETHIOPIC_HPP_
#define FIDEL_EVAL_ETHIOPIC_HPP_

#include <unicode/uchar.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fidel_eval/error.hpp"
#include "fidel_eval/unicode.hpp"

namespace fidel {

inline constexpr char32_t kEthiopicBlockBegin = 0x1200;
inline constexpr char32_t kEthiopicBlockEnd = 0x1380;  // exclusive
inline constexpr char32_t kSeriesWidth = 8;
inline constexpr std::size_t kEthiopicBlockSize = kEthiopicBlockEnd - kEthiopicBlockBegin;

struct EthiopicSyllable {
  char32_t codepoint = 0;
  char32_t family_base = 0;  // first codepoint of the 8-slot series
  int order_index = 0;       // 1..8

  friend bool operator==(const EthiopicSyllable&, const EthiopicSyllable&) = default;
};

// Ethiopic, Ethiopic Supplement and Ethiopic Extended blocks.
inline bool IsEthiopic(char32_t c) {
  return (c >= 0x1200 && c <= 0x139F) || (c >= 0x2D80 && c <= 0x2DDF);
}

inline std::optional<EthiopicSyllable> Decompose(char32_t c) {
  if (c < kEthiopicBlockBegin || c >= kEthiopicBlockEnd) return std::nullopt;
  if (u_charType(static_cast<UChar32>(c)) != U_OTHER_LETTER) return std::nullopt;
  const char32_t offset = (c - kEthiopicBlockBegin) % kSeriesWidth;
  return EthiopicSyllable{c, c - offset, static_cast<int>(offset) + 1};
}

inline bool IsSeriesBase(char32_t c) {
  const auto syllable = Decompose(c);
  return syllable.has_value() && syllable->order_index == 1;
}

struct HomophoneFamily {
  std::string name;
  char32_t canonical_base = 0;
  std::vector<char32_t> member_bases;  // includes canonical_base
};

// Labialized runs that sit outside a series' own 8 slots (e.g. ኈ..ኍ for ኀ).
// Normalization leaves them untouched and counts them as skipped.
struct LabiovelarRun {
  char32_t series_base;
  char32_t first;
  char32_t last;
};

inline constexpr std::array<LabiovelarRun, 5> kLabiovelarRuns{{
    {0x1240, 0x1248, 0x124D},  // ቀ -> ቈ..ቍ
    {0x1250, 0x1258, 0x125D},  // ቐ -> ቘ..ቝ
    {0x1280, 0x1288, 0x128D},  // ኀ -> ኈ..ኍ
    {0x12A8, 0x12B0, 0x12B5},  // ከ -> ኰ..ኵ
    {0x1308, 0x1310, 0x1315},  // ገ -> ጐ..ጕ
}};

struct NormalizationStats {
  std::size_t replacements = 0;
  std::size_t skipped = 0;
  std::vector<std::size_t> by_family;  // parallel to NormalizationTable::families()

  NormalizationStats& operator+=(const NormalizationStats& other) {
    replacements += other.replacements;
    skipped += other.skipped;
    if (by_family.size() < other.by_family.size()) by_family.resize(other.by_family.size());
    for (std::size_t i = 0; i < other.by_family.size(); ++i) by_family[i] += other.by_family[i];
    return *this;
  }

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

class NormalizationTable {
 public:
  // Validates the families and builds the slot-by-slot mapping. Throws
  // ErrorCode::kTableFormat when a base is not a series start, a base
  // appears twice, or the canonical base is not a member.
  static NormalizationTable FromFamilies(std::vector<HomophoneFamily> families) {
    NormalizationTable table;
    for (std::size_t i = 0; i < kEthiopicBlockSize; ++i) {
      table.target_[i] = kEthiopicBlockBegin + static_cast<char32_t>(i);
    }
    table.family_.fill(-1);
    table.skipped_family_.fill(-1);

    std::vector<char32_t> seen;
    for (std::size_t f = 0; f < families.size(); ++f) {
      const HomophoneFamily& family = families[f];
      if (family.member_bases.empty()) {
        throw Error(ErrorCode::kTableFormat, "family '" + family.name + "' has no members");
      }
      if (std::find(family.member_bases.begin(), family.member_bases.end(),
                    family.canonical_base) == family.member_bases.end()) {
        throw Error(ErrorCode::kTableFormat,
                    "family '" + family.name + "': canonical base is not a member");
      }
      for (char32_t base : family.member_bases) {
        if (!IsSeriesBase(base)) {
          throw Error(ErrorCode::kTableFormat,
                      "family '" + family.name + "': " + HexCodepoint(base) +
                          " is not the first syllable of an Ethiopic series");
        }
        if (std::find(seen.begin(), seen.end(), base) != seen.end()) {
          throw Error(ErrorCode::kTableFormat,
                      "family '" + family.name + "': " + HexCodepoint(base) +
                          " already belongs to a family");
        }
        seen.push_back(base);
      }
      for (char32_t base : family.member_bases) {
        if (base == family.canonical_base) continue;
        for (char32_t k = 0; k < kSeriesWidth; ++k) {
          const char32_t source = base + k;
          const char32_t target = family.canonical_base + k;
          if (!Decompose(source) || !Decompose(target)) continue;
          table.target_[source - kEthiopicBlockBegin] = target;
          table.family_[source - kEthiopicBlockBegin] = static_cast<std::int16_t>(f);
          ++table.mapped_count_;
        }
        for (const LabiovelarRun& run : kLabiovelarRuns) {
          if (run.series_base != base) continue;
          for (char32_t c = run.first; c <= run.last; ++c) {
            if (Decompose(c)) {
              table.skipped_family_[c - kEthiopicBlockBegin] = static_cast<std::int16_t>(f);
            }
          }
        }
      }
    }
    table.families_ = std::move(families);
    return table;
  }

  char32_t Map(char32_t c) const noexcept {
    if (c < kEthiopicBlockBegin || c >= kEthiopicBlockEnd) return c;
    return target_[c - kEthiopicBlockBegin];
  }

  // Index into families() of the family that rewrites `c`, or -1.
  int FamilyOf(char32_t c) const noexcept {
    if (c < kEthiopicBlockBegin || c >= kEthiopicBlockEnd) return -1;
    return family_[c - kEthiopicBlockBegin];
  }

  bool IsSkipped(char32_t c) const noexcept {
    if (c < kEthiopicBlockBegin || c >= kEthiopicBlockEnd) return false;
    return skipped_family_[c - kEthiopicBlockBegin] >= 0;
  }

  std::size_t mapped_count() const noexcept { return mapped_count_; }
  const std::vector<HomophoneFamily>& families() const noexcept { return families_; }

  static std::string HexCodepoint(char32_t c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(c));
    return buf;
  }

 private:
  NormalizationTable() = default;

  std::array<char32_t, kEthiopicBlockSize> target_{};
  std::array<std::int16_t, kEthiopicBlockSize> family_{};
  std::array<std::int16_t, kEthiopicBlockSize> skipped_family_{};
  std::vector<HomophoneFamily> families_;
  std::size_t mapped_count_ = 0;
};

// Canonical series for the four default families.
struct DefaultCanonicals {
  char32_t ha = 0x1200;   // ሀ  (ሀ ሐ ኀ)
  char32_t a = 0x12A0;    // አ  (አ ዐ)
  char32_t sa = 0x1230;   // ሰ  (ሠ ሰ)
  char32_t tsa = 0x1338;  // ጸ  (ጸ ፀ)
};

inline std::vector<HomophoneFamily> DefaultFamilies(const DefaultCanonicals& canon = {}) {
  return {
      {"ha", canon.ha, {0x1200, 0x1210, 0x1280}},
      {"a", canon.a, {0x12A0, 0x12D0}},
      {"sa", canon.sa, {0x1220, 0x1230}},
      {"tsa", canon.tsa, {0x1338, 0x1340}},
  };
}

inline NormalizationTable BuildDefaultTable(const DefaultCanonicals& canon = {}) {
  return NormalizationTable::FromFamilies(DefaultFamilies(canon));
}

// Rewrites `text` in place. Stats are accumulated into `stats` when given.
inline void NormalizeCodepoints(std::u32string& text, const NormalizationTable& table,
                                NormalizationStats* stats = nullptr) {
  if (stats != nullptr && stats->by_family.size() < table.families().size()) {
    stats->by_family.resize(table.families().size());
  }
  for (char32_t& c : text) {
    const char32_t mapped = table.Map(c);
    if (stats != nullptr) {
      if (mapped != c) {
        ++stats->replacements;
        ++stats->by_family[static_cast<std::size_t>(table.FamilyOf(c))];
      } else if (table.IsSkipped(c)) {
        ++stats->skipped;
      }
    }
    c = mapped;
  }
}

struct NormalizedText {
  std::string text;
  NormalizationStats stats;
};

// `text` must be well-formed UTF-8 (ErrorCode::kEncoding otherwise).
inline NormalizedText NormalizeText(std::string_view text, const NormalizationTable& table) {
  NormalizedText result;
  result.stats.by_family.assign(table.families().size(), 0);
  if (unicode::IsAscii(text)) {
    result.text.assign(text);
    return result;
  }
  std::u32string codepoints = unicode::DecodeUtf8(text);
  NormalizeCodepoints(codepoints, table, &result.stats);
  result.text = unicode::EncodeUtf8(codepoints);
  return result;
}

namespace detail {

inline std::string_view Trim(std::string_view s) {
  const auto not_space = [](char ch) { return ch != ' ' && ch != '\t' && ch != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::optional<char32_t> ParseHexCodepoint(std::string_view s) {
  s = Trim(s);
  if (s.size() > 2 && (s.substr(0, 2) == "U+" || s.substr(0, 2) == "u+" ||
                       s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X")) {
    s.remove_prefix(2);
  }
  if (s.empty() || s.size() > 6) return std::nullopt;
  char32_t value = 0;
  for (char ch : s) {
    int digit;
    if (ch >= '0' && ch <= '9') digit = ch - '0';
    else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
    else return std::nullopt;
    value = value * 16 + static_cast<char32_t>(digit);
  }
  return value;
}

}  // namespace detail

// Table override format, one family per line:
//   canonical_base_hex: member_base_hex,member_base_hex,...
// e.g. "1200: 1210,1280". Lines starting with '#' and blank lines are
// ignored. Errors carry the 1-based line number.
inline NormalizationTable ParseTableOverride(std::istream& in) {
  std::vector<HomophoneFamily> families;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kTableFormat,
                 "table override line " + std::to_string(line_no) + ": " + what, line_no);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::Trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto colon = view.find(':');
    if (colon == std::string_view::npos) throw fail("expected 'canonical: member,member,...'");
    const auto canonical = detail::ParseHexCodepoint(view.substr(0, colon));
    if (!canonical) throw fail("bad canonical codepoint '" + std::string(view.substr(0, colon)) + "'");

    HomophoneFamily family;
    family.name = NormalizationTable::HexCodepoint(*canonical);
    family.canonical_base = *canonical;
    family.member_bases.push_back(*canonical);
    std::string_view rest = view.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto member = detail::ParseHexCodepoint(item);
      if (!member) throw fail("bad member codepoint '" + std::string(detail::Trim(item)) + "'");
      if (*member != *canonical) family.member_bases.push_back(*member);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    // Per-family validation here so the error points at this line.
    try {
      auto probe = families;
      probe.push_back(family);
      (void)NormalizationTable::FromFamilies(std::move(probe));
    } catch (const Error& e) {
      throw fail(e.what());
    }
    families.push_back(std::move(family));
  }
  if (families.empty()) {
    throw Error(ErrorCode::kTableFormat, "table override defines no families");
  }
  return NormalizationTable::FromFamilies(std::move(families));
}

inline NormalizationTable LoadTableOverride(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open table override " + path.string());
  return ParseTableOverride(in);
}

}  // namespace fidel

#endif  // FIDEL_EVAL_ETHIOPIC_HPP_
