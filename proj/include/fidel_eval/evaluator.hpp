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


// Raw vs. homophone-normalized scoring and multi-model comparison.

#ifndef FIDEL_EVAL_EVALUATOR_HPP_
#define FIDEL_EVAL_EVALUATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fidel_eval/corpus.hpp"
#include "fidel_eval/diagnostics.hpp"
#include "fidel_eval/error.hpp"
#include "fidel_eval/ethiopic.hpp"
#include "fidel_eval/metrics.hpp"

namespace fidel {

class EvalCondition {
 public:
  static EvalCondition Raw() { return EvalCondition(nullptr); }

  static EvalCondition Normalized(std::shared_ptr<const NormalizationTable> table) {
    if (!table) throw Error(ErrorCode::kInvalidArgument, "normalized condition needs a table");
    return EvalCondition(std::move(table));
  }

  std::string_view label() const { return table_ ? "normalized" : "raw"; }
  bool is_normalized() const { return table_ != nullptr; }
  const NormalizationTable* table() const { return table_.get(); }

 private:
  explicit EvalCondition(std::shared_ptr<const NormalizationTable> table)
      : table_(std::move(table)) {}

  std::shared_ptr<const NormalizationTable> table_;
};

struct ScoringOptions {
  TextOptions text;
  Aggregation aggregation = Aggregation::kPooled;
  int max_order = kDefaultMaxOrder;
};

struct ConditionResult {
  std::string condition;  // "raw" | "normalized"
  MetricScores scores;
  BleuBreakdown bleu;
  std::optional<NormalizationStats> normalization;  // normalized condition only
};

// Normalization, when the condition carries a table, is applied to both ref
// and hyp of every pair before tokenization. The manifest is not modified.
inline ConditionResult ScoreCondition(const Manifest& manifest, const EvalCondition& condition,
                                      const ScoringOptions& options = {}) {
  ConditionResult result;
  result.condition = std::string(condition.label());
  NormalizationStats stats;
  NormalizationStats* stats_ptr = nullptr;
  if (condition.is_normalized()) {
    stats.by_family.assign(condition.table()->families().size(), 0);
    stats_ptr = &stats;
  }
  const CorpusAccumulator acc = AccumulateCorpus(manifest.pairs, options.text, options.max_order,
                                                 condition.table(), stats_ptr);
  result.scores = acc.Finish(options.aggregation);
  result.bleu = acc.CorpusBleu().breakdown;
  if (condition.is_normalized()) result.normalization = std::move(stats);
  return result;
}

struct MetricDeltas {
  double wer = 0.0;
  double cer = 0.0;
  double corpus_bleu = 0.0;
  double avg_bleu = 0.0;
};

inline MetricDeltas Delta(const MetricScores& raw, const MetricScores& normalized) {
  return {normalized.wer - raw.wer, normalized.cer - raw.cer,
          normalized.corpus_bleu - raw.corpus_bleu, normalized.avg_bleu - raw.avg_bleu};
}

struct BestFlags {
  bool wer = false;
  bool cer = false;
  bool corpus_bleu = false;
  bool avg_bleu = false;
};

struct ScoreReport {
  std::string test_set;
  std::size_t pair_count = 0;
  std::vector<ConditionResult> conditions;
  DiagnosticSummary diagnostics;
};

inline ScoreReport ScoreManifest(const Manifest& manifest,
                                 const std::vector<EvalCondition>& conditions,
                                 const ScoringOptions& options = {},
                                 const DiagnosticThresholds& thresholds = {}) {
  ScoreReport report;
  report.test_set = manifest.source_label;
  report.pair_count = manifest.pairs.size();
  for (const EvalCondition& condition : conditions) {
    report.conditions.push_back(ScoreCondition(manifest, condition, options));
  }
  report.diagnostics = DiagnoseCorpus(manifest.pairs, thresholds);
  return report;
}

struct ModelRow {
  std::string model;
  ConditionResult raw;
  ConditionResult normalized;
  MetricDeltas delta;
  BestFlags best_raw;
  BestFlags best_normalized;
  DiagnosticSummary diagnostics;
};

struct ComparisonReport {
  std::string test_set;
  std::size_t pair_count = 0;
  std::vector<std::string> family_names;
  std::vector<ModelRow> rows;  // normalized WER ascending, then model name
};

// Reporting precision: two decimals.
inline double RoundToReported(double value) {
  const double r = std::round(value * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.00"
}

namespace detail {

// Lower-is-better when `minimize`; ties at reporting precision go to the
// lexicographically smallest model name.
template <class Getter, class Setter>
void FlagBest(std::vector<ModelRow>& rows, bool minimize, Getter get, Setter set) {
  const ModelRow* best = nullptr;
  for (const ModelRow& row : rows) {
    if (best == nullptr) {
      best = &row;
      continue;
    }
    const double a = RoundToReported(get(row));
    const double b = RoundToReported(get(*best));
    const bool better = minimize ? a < b : a > b;
    if (better || (a == b && row.model < best->model)) best = &row;
  }
  for (ModelRow& row : rows) {
    if (&row == best) set(row);
  }
}

inline void CheckAligned(const std::string& reference_name, const Manifest& reference,
                         const std::string& model, const Manifest& manifest) {
  std::map<std::string_view, const EvalPair*> by_id;
  for (const EvalPair& p : manifest.pairs) by_id.emplace(p.id, &p);
  for (const EvalPair& p : reference.pairs) {
    const auto it = by_id.find(p.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kIdMismatch,
                  "id \"" + p.id + "\" is in " + reference_name + " but missing from " + model, 0,
                  p.id);
    }
    if (it->second->ref != p.ref) {
      throw Error(ErrorCode::kRefMismatch,
                  "reference for id \"" + p.id + "\" differs between " + reference_name +
                      " and " + model,
                  it->second->line, p.id);
    }
  }
  if (manifest.pairs.size() != reference.pairs.size()) {
    std::set<std::string_view> known;
    for (const EvalPair& p : reference.pairs) known.insert(p.id);
    for (const EvalPair& p : manifest.pairs) {
      if (!known.contains(p.id)) {
        throw Error(ErrorCode::kIdMismatch,
                    "id \"" + p.id + "\" is in " + model + " but missing from " + reference_name,
                    p.line, p.id);
      }
    }
  }
}

}  // namespace detail

// All manifests must cover the same ids with byte-identical references. When
// `reference` is given it is the authority; otherwise the first model is.
inline ComparisonReport CompareModels(const std::map<std::string, Manifest>& models,
                                      std::shared_ptr<const NormalizationTable> table,
                                      const ScoringOptions& options = {},
                                      const DiagnosticThresholds& thresholds = {},
                                      std::string test_set = {},
                                      const Manifest* reference = nullptr) {
  if (models.empty()) throw Error(ErrorCode::kInvalidArgument, "no models to compare");
  const std::string reference_name = reference ? "reference manifest" : models.begin()->first;
  const Manifest& authority = reference ? *reference : models.begin()->second;
  for (const auto& [name, manifest] : models) {
    detail::CheckAligned(reference_name, authority, name, manifest);
  }

  ComparisonReport report;
  report.test_set = test_set.empty() ? authority.source_label : std::move(test_set);
  report.pair_count = authority.pairs.size();
  for (const HomophoneFamily& f : table->families()) report.family_names.push_back(f.name);

  const EvalCondition raw = EvalCondition::Raw();
  const EvalCondition normalized = EvalCondition::Normalized(table);
  for (const auto& [name, manifest] : models) {
    ModelRow row;
    row.model = name;
    row.raw = ScoreCondition(manifest, raw, options);
    row.normalized = ScoreCondition(manifest, normalized, options);
    row.delta = Delta(row.raw.scores, row.normalized.scores);
    row.diagnostics = DiagnoseCorpus(manifest.pairs, thresholds);
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const ModelRow& a, const ModelRow& b) {
    if (a.normalized.scores.wer != b.normalized.scores.wer) {
      return a.normalized.scores.wer < b.normalized.scores.wer;
    }
    return a.model < b.model;
  });

  auto& rows = report.rows;
  detail::FlagBest(rows, true, [](const ModelRow& r) { return r.raw.scores.wer; },
                   [](ModelRow& r) { r.best_raw.wer = true; });
  detail::FlagBest(rows, true, [](const ModelRow& r) { return r.raw.scores.cer; },
                   [](ModelRow& r) { r.best_raw.cer = true; });
  detail::FlagBest(rows, false, [](const ModelRow& r) { return r.raw.scores.corpus_bleu; },
                   [](ModelRow& r) { r.best_raw.corpus_bleu = true; });
  detail::FlagBest(rows, false, [](const ModelRow& r) { return r.raw.scores.avg_bleu; },
                   [](ModelRow& r) { r.best_raw.avg_bleu = true; });
  detail::FlagBest(rows, true, [](const ModelRow& r) { return r.normalized.scores.wer; },
                   [](ModelRow& r) { r.best_normalized.wer = true; });
  detail::FlagBest(rows, true, [](const ModelRow& r) { return r.normalized.scores.cer; },
                   [](ModelRow& r) { r.best_normalized.cer = true; });
  detail::FlagBest(rows, false, [](const ModelRow& r) { return r.normalized.scores.corpus_bleu; },
                   [](ModelRow& r) { r.best_normalized.corpus_bleu = true; });
  detail::FlagBest(rows, false, [](const ModelRow& r) { return r.normalized.scores.avg_bleu; },
                   [](ModelRow& r) { r.best_normalized.avg_bleu = true; });
  return report;
}

// Applies the table to ref and hyp of every pair; ids and order are kept.
inline Manifest NormalizeManifest(const Manifest& manifest, const NormalizationTable& table,
                                  NormalizationStats* stats = nullptr) {
  Manifest out;
  out.source_label = manifest.source_label;
  out.pairs.reserve(manifest.pairs.size());
  for (const EvalPair& p : manifest.pairs) {
    NormalizedText ref = NormalizeText(p.ref, table);
    NormalizedText hyp = NormalizeText(p.hyp, table);
    if (stats != nullptr) {
      *stats += ref.stats;
      *stats += hyp.stats;
    }
    out.pairs.push_back({p.id, std::move(ref.text), std::move(hyp.text), p.line});
  }
  return out;
}

}  // namespace fidel

#endif  // FIDEL_EVAL_EVALUATOR_HPP_
