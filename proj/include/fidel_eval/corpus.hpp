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


// Reference/hypothesis manifests.
//
// JSONL: one object per line, {"id": string, "ref": string, "hyp": string};
//        unknown keys are ignored.
// TSV:   id<TAB>ref<TAB>hyp, no header, no quoting.
//
// Text is NFC-composed on load. Every error carries the 1-based line number.

#ifndef FIDEL_EVAL_CORPUS_HPP_
#define FIDEL_EVAL_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "fidel_eval/diagnostics.hpp"
#include "fidel_eval/error.hpp"
#include "fidel_eval/unicode.hpp"

namespace fidel {

inline constexpr std::size_t kMaxManifestLineBytes = 1 << 20;

struct EvalPair {
  std::string id;
  std::string ref;
  std::string hyp;
  std::size_t line = 0;  // source line, 0 when built in memory

  // Line numbers are provenance, not content.
  friend bool operator==(const EvalPair& a, const EvalPair& b) {
    return a.id == b.id && a.ref == b.ref && a.hyp == b.hyp;
  }
};

enum class ManifestFormat { kJsonl, kTsv };

inline std::optional<ManifestFormat> ParseManifestFormat(std::string_view name) {
  if (name == "jsonl") return ManifestFormat::kJsonl;
  if (name == "tsv") return ManifestFormat::kTsv;
  return std::nullopt;
}

inline ManifestFormat InferManifestFormat(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return (ext == ".tsv" || ext == ".txt") ? ManifestFormat::kTsv : ManifestFormat::kJsonl;
}

struct Manifest {
  std::vector<EvalPair> pairs;
  std::string source_label;

  const EvalPair* Find(std::string_view id) const {
    for (const EvalPair& p : pairs) {
      if (p.id == id) return &p;
    }
    return nullptr;
  }
};

namespace detail {

inline Error ParseError(std::size_t line, const std::string& what) {
  return Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what, line);
}

inline EvalPair ParseJsonlLine(const std::string& line, std::size_t line_no) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line_no, "expected a JSON object");
  EvalPair pair;
  pair.line = line_no;
  for (const char* key : {"id", "ref", "hyp"}) {
    const auto it = record.find(key);
    if (it == record.end()) throw ParseError(line_no, std::string("missing key \"") + key + "\"");
    if (!it->is_string()) throw ParseError(line_no, std::string("\"") + key + "\" must be a string");
  }
  pair.id = record["id"].get<std::string>();
  pair.ref = record["ref"].get<std::string>();
  pair.hyp = record["hyp"].get<std::string>();
  return pair;
}

inline EvalPair ParseTsvLine(std::string_view line, std::size_t line_no) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 3) {
    throw ParseError(line_no, "expected 3 tab-separated fields (id, ref, hyp), got " +
                                  std::to_string(fields.size()));
  }
  EvalPair pair;
  pair.line = line_no;
  pair.id = std::string(fields[0]);
  pair.ref = std::string(fields[1]);
  pair.hyp = std::string(fields[2]);
  return pair;
}

inline bool IsBlank(std::string_view text) {
  for (char32_t c : unicode::DecodeUtf8(text)) {
    if (!unicode::IsWhitespace(c)) return false;
  }
  return true;
}

}  // namespace detail

inline Manifest ReadManifest(std::istream& in, ManifestFormat format,
                             std::string source_label = {}) {
  Manifest manifest;
  manifest.source_label = std::move(source_label);
  std::unordered_map<std::string, std::size_t> first_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.size() > kMaxManifestLineBytes) {
      throw detail::ParseError(line_no, "line exceeds " + std::to_string(kMaxManifestLineBytes) +
                                            " bytes");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (const auto bad = unicode::FindInvalidUtf8(line)) {
      throw Error(ErrorCode::kEncoding,
                  "line " + std::to_string(line_no) + ": invalid UTF-8 at byte " +
                      std::to_string(*bad),
                  line_no);
    }
    EvalPair pair = format == ManifestFormat::kJsonl ? detail::ParseJsonlLine(line, line_no)
                                                     : detail::ParseTsvLine(line, line_no);
    if (pair.id.empty()) throw detail::ParseError(line_no, "empty id");
    // JSON escapes can smuggle in ill-formed surrogates; re-check decoded text.
    for (const std::string* field : {&pair.id, &pair.ref, &pair.hyp}) {
      if (!unicode::IsValidUtf8(*field)) {
        throw Error(ErrorCode::kEncoding, "line " + std::to_string(line_no) + ": invalid UTF-8",
                    line_no);
      }
    }
    const auto [it, inserted] = first_seen.emplace(pair.id, line_no);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id \"" + pair.id +
                      "\" (first seen on line " + std::to_string(it->second) + ")",
                  line_no, pair.id);
    }
    pair.ref = unicode::ToNfc(pair.ref);
    pair.hyp = unicode::ToNfc(pair.hyp);
    if (detail::IsBlank(pair.ref)) {
      throw Error(ErrorCode::kEmptyReference,
                  "line " + std::to_string(line_no) + ": empty reference for id \"" + pair.id + "\"",
                  line_no, pair.id);
    }
    manifest.pairs.push_back(std::move(pair));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error after line " + std::to_string(line_no));
  if (manifest.pairs.empty()) throw Error(ErrorCode::kEmptyCorpus, "manifest contains no pairs");
  return manifest;
}

inline Manifest LoadManifest(const std::filesystem::path& path, ManifestFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  try {
    return ReadManifest(in, format, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.line(), e.id());
  }
}

inline Manifest LoadManifest(const std::filesystem::path& path) {
  return LoadManifest(path, InferManifestFormat(path));
}

// JSONL output keeps key order id, ref, hyp.
inline void WriteManifest(std::ostream& out, const Manifest& manifest, ManifestFormat format) {
  const auto dump = [](const std::string& s) {
    return nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
  };
  for (const EvalPair& p : manifest.pairs) {
    if (format == ManifestFormat::kJsonl) {
      out << "{\"id\": " << dump(p.id) << ", \"ref\": " << dump(p.ref)
          << ", \"hyp\": " << dump(p.hyp) << "}\n";
    } else {
      for (const std::string* field : {&p.id, &p.ref, &p.hyp}) {
        if (field->find_first_of("\t\n") != std::string::npos) {
          throw Error(ErrorCode::kInvalidArgument,
                      "pair \"" + p.id + "\" contains a tab or newline; not representable as TSV",
                      p.line, p.id);
        }
      }
      out << p.id << '\t' << p.ref << '\t' << p.hyp << '\n';
    }
  }
}

struct PairValidation {
  std::string id;
  std::size_t line = 0;
  bool empty_hyp = false;
  bool non_ethiopic_ref = false;
  double ref_ethiopic_ratio = 0.0;
  std::size_t ref_codepoints = 0;
  std::size_t hyp_codepoints = 0;
};

struct ValidationReport {
  std::string source_label;
  std::vector<PairValidation> pairs;
  std::size_t empty_hyp_count = 0;
  std::size_t non_ethiopic_ref_count = 0;

  std::size_t flag_count() const { return empty_hyp_count + non_ethiopic_ref_count; }
};

inline ValidationReport ValidateManifest(const Manifest& manifest,
                                         double min_ethiopic_ratio = 0.5) {
  ValidationReport report;
  report.source_label = manifest.source_label;
  for (const EvalPair& p : manifest.pairs) {
    PairValidation v;
    v.id = p.id;
    v.line = p.line;
    v.ref_codepoints = unicode::CodepointCount(p.ref);
    v.hyp_codepoints = unicode::CodepointCount(p.hyp);
    v.empty_hyp = unicode::SplitWhitespace(unicode::DecodeUtf8Lenient(p.hyp)).empty();
    v.ref_ethiopic_ratio = EthiopicRatio(p.ref);
    v.non_ethiopic_ref = v.ref_ethiopic_ratio < min_ethiopic_ratio;
    if (v.empty_hyp) ++report.empty_hyp_count;
    if (v.non_ethiopic_ref) ++report.non_ethiopic_ref_count;
    report.pairs.push_back(std::move(v));
  }
  return report;
}

}  // namespace fidel

#endif  // FIDEL_EVAL_CORPUS_HPP_
