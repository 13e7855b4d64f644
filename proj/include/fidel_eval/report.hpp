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


// JSON (canonical), Markdown and CSV renderings of evaluation reports.
// Percentages are rounded to two decimals. Output is a pure function of the
// report: no timestamps or environment data unless the caller adds them.

#ifndef FIDEL_EVAL_REPORT_HPP_
#define FIDEL_EVAL_REPORT_HPP_

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fidel_eval/corpus.hpp"
#include "fidel_eval/diagnostics.hpp"
#include "fidel_eval/evaluator.hpp"

namespace fidel {

using OrderedJson = nlohmann::ordered_json;

enum class OutputFormat { kJson, kMarkdown, kCsv };

inline std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "markdown") return OutputFormat::kMarkdown;
  if (name == "csv") return OutputFormat::kCsv;
  return std::nullopt;
}

namespace detail {

inline std::string Fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", RoundToReported(value));
  return buf;
}

inline std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string MarkdownCell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string Bold(const std::string& s, bool bold) { return bold ? "**" + s + "**" : s; }

inline OrderedJson MetricsJson(const MetricScores& s) {
  OrderedJson j;
  j["wer"] = RoundToReported(s.wer);
  j["cer"] = RoundToReported(s.cer);
  j["corpus_bleu"] = RoundToReported(s.corpus_bleu);
  j["avg_bleu"] = RoundToReported(s.avg_bleu);
  return j;
}

inline OrderedJson DeltaJson(const MetricDeltas& d) {
  OrderedJson j;
  j["wer"] = RoundToReported(d.wer);
  j["cer"] = RoundToReported(d.cer);
  j["corpus_bleu"] = RoundToReported(d.corpus_bleu);
  j["avg_bleu"] = RoundToReported(d.avg_bleu);
  return j;
}

inline OrderedJson BleuJson(const BleuBreakdown& b) {
  OrderedJson j;
  j["precisions"] = b.precisions;
  j["brevity_penalty"] = b.brevity_penalty;
  j["hyp_length"] = b.hyp_length;
  j["ref_length"] = b.ref_length;
  return j;
}

inline OrderedJson StatsJson(const NormalizationStats& stats,
                             const std::vector<std::string>& family_names) {
  OrderedJson j;
  j["replacements"] = stats.replacements;
  j["skipped"] = stats.skipped;
  OrderedJson by_family = OrderedJson::object();
  for (std::size_t i = 0; i < family_names.size() && i < stats.by_family.size(); ++i) {
    by_family[family_names[i]] = stats.by_family[i];
  }
  j["by_family"] = by_family;
  return j;
}

inline OrderedJson BestJson(const BestFlags& f) {
  OrderedJson j = OrderedJson::array();
  if (f.wer) j.push_back("wer");
  if (f.cer) j.push_back("cer");
  if (f.corpus_bleu) j.push_back("corpus_bleu");
  if (f.avg_bleu) j.push_back("avg_bleu");
  return j;
}

inline std::string MetricCells(const MetricScores& s, const BestFlags& best) {
  return " | " + Bold(Fixed2(s.wer), best.wer) + " | " + Bold(Fixed2(s.cer), best.cer) + " | " +
         Bold(Fixed2(s.corpus_bleu), best.corpus_bleu) + " | " +
         Bold(Fixed2(s.avg_bleu), best.avg_bleu) + " |\n";
}

inline std::string DeltaCells(const MetricDeltas& d) {
  return " | " + Fixed2(d.wer) + " | " + Fixed2(d.cer) + " | " + Fixed2(d.corpus_bleu) + " | " +
         Fixed2(d.avg_bleu) + " |\n";
}

inline constexpr std::string_view kTableHeader =
    "| Model | WER(%) | CER(%) | corpusBLEU(%) | avg.BLEU |\n"
    "|:--|--:|--:|--:|--:|\n";

inline constexpr std::string_view kCsvHeader = "model,condition,wer,cer,corpus_bleu,avg_bleu\n";

inline std::string CsvRow(std::string_view model, std::string_view condition, double wer,
                          double cer, double corpus_bleu, double avg_bleu) {
  return CsvField(model) + "," + std::string(condition) + "," + Fixed2(wer) + "," + Fixed2(cer) +
         "," + Fixed2(corpus_bleu) + "," + Fixed2(avg_bleu) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Diagnostics

inline OrderedJson ToJson(const DiagnosticSummary& summary,
                          const std::optional<DiagnosticThresholds>& thresholds = std::nullopt) {
  OrderedJson j;
  j["pair_count"] = summary.pair_count;
  if (thresholds) {
    j["thresholds"] = {{"min_ethiopic_ratio", thresholds->min_ethiopic_ratio},
                       {"max_char_run", thresholds->max_char_run},
                       {"max_token_run", thresholds->max_token_run}};
  }
  j["counts"] = {{"flagged", summary.flagged.size()},
                 {"non_ethiopic", summary.non_ethiopic},
                 {"repetitive", summary.repetitive},
                 {"empty", summary.empty}};
  j["flagged_fraction"] = summary.FlaggedFraction();
  OrderedJson flagged = OrderedJson::array();
  for (const FlaggedPair& f : summary.flagged) {
    OrderedJson item;
    item["id"] = f.id;
    item["verdicts"] = f.flags.verdicts.Names();
    item["ethiopic_ratio"] = f.flags.ethiopic_ratio;
    item["max_char_run"] = f.flags.max_char_run;
    item["max_token_run"] = f.flags.max_token_run;
    flagged.push_back(std::move(item));
  }
  j["flagged"] = std::move(flagged);
  return j;
}

inline std::string Join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string Render(const DiagnosticSummary& summary, OutputFormat format,
                          const std::string& test_set = {},
                          const std::optional<DiagnosticThresholds>& thresholds = std::nullopt) {
  using detail::Fixed2;
  if (format == OutputFormat::kJson) {
    OrderedJson j;
    j["test_set"] = test_set;
    j["diagnostics"] = ToJson(summary, thresholds);
    return j.dump(2) + "\n";
  }
  std::string out;
  if (format == OutputFormat::kCsv) {
    out = "id,verdicts,ethiopic_ratio,max_char_run,max_token_run\n";
    for (const FlaggedPair& f : summary.flagged) {
      char ratio[32];
      std::snprintf(ratio, sizeof(ratio), "%.4f", f.flags.ethiopic_ratio);
      out += detail::CsvField(f.id) + "," + Join(f.flags.verdicts.Names(), ";") + "," + ratio +
             "," + std::to_string(f.flags.max_char_run) + "," +
             std::to_string(f.flags.max_token_run) + "\n";
    }
    return out;
  }
  out = "### Diagnostics: " + detail::MarkdownCell(test_set) + " (" +
        std::to_string(summary.flagged.size()) + " of " + std::to_string(summary.pair_count) +
        " flagged)\n\n";
  out += "| Id | Verdicts | Ethiopic ratio | Max char run | Max token run |\n";
  out += "|:--|:--|--:|--:|--:|\n";
  for (const FlaggedPair& f : summary.flagged) {
    char ratio[32];
    std::snprintf(ratio, sizeof(ratio), "%.4f", f.flags.ethiopic_ratio);
    out += "| " + detail::MarkdownCell(f.id) + " | " + Join(f.flags.verdicts.Names(), ", ") +
           " | " + ratio + " | " + std::to_string(f.flags.max_char_run) + " | " +
           std::to_string(f.flags.max_token_run) + " |\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-manifest score report

inline OrderedJson ToJson(const ScoreReport& report,
                          const std::vector<std::string>& family_names = {}) {
  OrderedJson j;
  j["test_set"] = report.test_set;
  j["pair_count"] = report.pair_count;
  OrderedJson conditions = OrderedJson::object();
  const MetricScores* raw = nullptr;
  const MetricScores* normalized = nullptr;
  for (const ConditionResult& c : report.conditions) {
    OrderedJson item = detail::MetricsJson(c.scores);
    item["bleu"] = detail::BleuJson(c.bleu);
    if (c.normalization) item["normalization"] = detail::StatsJson(*c.normalization, family_names);
    conditions[c.condition] = std::move(item);
    (c.normalization ? normalized : raw) = &c.scores;
  }
  j["conditions"] = std::move(conditions);
  if (raw != nullptr && normalized != nullptr) {
    j["delta"] = detail::DeltaJson(Delta(*raw, *normalized));
  }
  j["diagnostics"] = ToJson(report.diagnostics);
  return j;
}

inline std::string Render(const ScoreReport& report, OutputFormat format,
                          const std::vector<std::string>& family_names = {}) {
  if (format == OutputFormat::kJson) return ToJson(report, family_names).dump(2) + "\n";
  if (format == OutputFormat::kCsv) {
    std::string out(detail::kCsvHeader);
    for (const ConditionResult& c : report.conditions) {
      out += detail::CsvRow(report.test_set, c.condition, c.scores.wer, c.scores.cer,
                            c.scores.corpus_bleu, c.scores.avg_bleu);
    }
    return out;
  }
  std::string out = "### " + detail::MarkdownCell(report.test_set) + " (" +
                    std::to_string(report.pair_count) + " pairs)\n\n";
  out += detail::kTableHeader;
  for (const ConditionResult& c : report.conditions) {
    out += "| " + detail::MarkdownCell(report.test_set) + " (" + c.condition + ")" +
           detail::MetricCells(c.scores, {});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multi-model comparison

inline OrderedJson ToJson(const ComparisonReport& report) {
  OrderedJson j;
  j["test_set"] = report.test_set;
  j["pair_count"] = report.pair_count;
  OrderedJson rows = OrderedJson::array();
  for (const ModelRow& r : report.rows) {
    OrderedJson row;
    row["model"] = r.model;
    row["raw"] = detail::MetricsJson(r.raw.scores);
    row["normalized"] = detail::MetricsJson(r.normalized.scores);
    row["delta"] = detail::DeltaJson(r.delta);
    row["best"] = {{"raw", detail::BestJson(r.best_raw)},
                   {"normalized", detail::BestJson(r.best_normalized)}};
    row["bleu"] = {{"raw", detail::BleuJson(r.raw.bleu)},
                   {"normalized", detail::BleuJson(r.normalized.bleu)}};
    if (r.normalized.normalization) {
      row["normalization"] = detail::StatsJson(*r.normalized.normalization, report.family_names);
    }
    row["diagnostics"] = ToJson(r.diagnostics);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string Render(const ComparisonReport& report, OutputFormat format) {
  if (format == OutputFormat::kJson) return ToJson(report).dump(2) + "\n";
  if (format == OutputFormat::kCsv) {
    std::string out(detail::kCsvHeader);
    for (const ModelRow& r : report.rows) {
      const MetricScores& a = r.raw.scores;
      const MetricScores& b = r.normalized.scores;
      out += detail::CsvRow(r.model, "raw", a.wer, a.cer, a.corpus_bleu, a.avg_bleu);
      out += detail::CsvRow(r.model, "normalized", b.wer, b.cer, b.corpus_bleu, b.avg_bleu);
      out += detail::CsvRow(r.model, "delta", r.delta.wer, r.delta.cer, r.delta.corpus_bleu,
                            r.delta.avg_bleu);
    }
    return out;
  }
  std::string out = "### " + detail::MarkdownCell(report.test_set) + " (" +
                    std::to_string(report.pair_count) + " pairs)\n\n";
  out += detail::kTableHeader;
  out += "| *Raw* | | | | |\n";
  for (const ModelRow& r : report.rows) {
    out += "| " + detail::MarkdownCell(r.model) + detail::MetricCells(r.raw.scores, r.best_raw);
  }
  out += "| *Normalized* | | | | |\n";
  for (const ModelRow& r : report.rows) {
    out += "| " + detail::MarkdownCell(r.model) +
           detail::MetricCells(r.normalized.scores, r.best_normalized);
  }
  out += "| *Delta (normalized - raw)* | | | | |\n";
  for (const ModelRow& r : report.rows) {
    out += "| " + detail::MarkdownCell(r.model) + detail::DeltaCells(r.delta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest validation

inline OrderedJson ToJson(const ValidationReport& report) {
  OrderedJson j;
  j["test_set"] = report.source_label;
  j["pair_count"] = report.pairs.size();
  j["flags"] = {{"empty_hyp", report.empty_hyp_count},
                {"non_ethiopic_ref", report.non_ethiopic_ref_count}};
  OrderedJson pairs = OrderedJson::array();
  for (const PairValidation& v : report.pairs) {
    OrderedJson item;
    item["id"] = v.id;
    item["line"] = v.line;
    item["empty_hyp"] = v.empty_hyp;
    item["non_ethiopic_ref"] = v.non_ethiopic_ref;
    item["ref_ethiopic_ratio"] = v.ref_ethiopic_ratio;
    item["ref_codepoints"] = v.ref_codepoints;
    item["hyp_codepoints"] = v.hyp_codepoints;
    pairs.push_back(std::move(item));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

inline std::string Render(const ValidationReport& report, OutputFormat format) {
  if (format == OutputFormat::kJson) return ToJson(report).dump(2) + "\n";
  std::string out;
  if (format == OutputFormat::kCsv) {
    out = "id,line,empty_hyp,non_ethiopic_ref,ref_ethiopic_ratio,ref_codepoints,hyp_codepoints\n";
    for (const PairValidation& v : report.pairs) {
      char ratio[32];
      std::snprintf(ratio, sizeof(ratio), "%.4f", v.ref_ethiopic_ratio);
      out += detail::CsvField(v.id) + "," + std::to_string(v.line) + "," +
             (v.empty_hyp ? "1" : "0") + "," + (v.non_ethiopic_ref ? "1" : "0") + "," + ratio +
             "," + std::to_string(v.ref_codepoints) + "," + std::to_string(v.hyp_codepoints) +
             "\n";
    }
    return out;
  }
  out = "### Validation: " + detail::MarkdownCell(report.source_label) + " (" +
        std::to_string(report.pairs.size()) + " pairs, " +
        std::to_string(report.empty_hyp_count) + " empty hyp, " +
        std::to_string(report.non_ethiopic_ref_count) + " non-Ethiopic ref)\n\n";
  out += "| Id | Line | Flags |\n|:--|--:|:--|\n";
  for (const PairValidation& v : report.pairs) {
    if (!v.empty_hyp && !v.non_ethiopic_ref) continue;
    std::vector<std::string> flags;
    if (v.empty_hyp) flags.emplace_back("empty_hyp");
    if (v.non_ethiopic_ref) flags.emplace_back("non_ethiopic_ref");
    out += "| " + detail::MarkdownCell(v.id) + " | " + std::to_string(v.line) + " | " +
           Join(flags, ", ") + " |\n";
  }
  return out;
}

}  // namespace fidel

#endif  // FIDEL_EVAL_REPORT_HPP_
