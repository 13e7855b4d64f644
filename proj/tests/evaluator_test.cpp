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


#include "fidel_eval/evaluator.hpp"

#include <memory>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace fidel {
namespace {

std::shared_ptr<const NormalizationTable> DefaultTable() {
  return std::make_shared<const NormalizationTable>(BuildDefaultTable());
}

Manifest Make(std::vector<EvalPair> pairs, std::string label = "t") {
  Manifest m;
  m.pairs = std::move(pairs);
  m.source_label = std::move(label);
  return m;
}

TEST(EvalConditionTest, Labels) {
  EXPECT_EQ(EvalCondition::Raw().label(), "raw");
  EXPECT_FALSE(EvalCondition::Raw().is_normalized());
  EXPECT_EQ(EvalCondition::Raw().table(), nullptr);
  const EvalCondition n = EvalCondition::Normalized(DefaultTable());
  EXPECT_EQ(n.label(), "normalized");
  EXPECT_NE(n.table(), nullptr);
}

TEST(ScoreConditionTest, PerfectManifest) {
  Manifest m = LoadManifest(testing::DataPath("clean_amharic.jsonl"));
  for (EvalPair& p : m.pairs) p.hyp = p.ref;
  for (const EvalCondition& c : {EvalCondition::Raw(), EvalCondition::Normalized(DefaultTable())}) {
    const MetricScores s = ScoreCondition(m, c).scores;
    EXPECT_EQ(s.wer, 0.0);
    EXPECT_EQ(s.cer, 0.0);
    EXPECT_DOUBLE_EQ(s.corpus_bleu, 100.0);
    EXPECT_DOUBLE_EQ(s.avg_bleu, 100.0);
    EXPECT_EQ(s.pair_count, m.pairs.size());
  }
}

TEST(ScoreConditionTest, HomophoneOnlyErrors) {
  const Manifest m = Make({{"a", "ሀገር ሰላም ጸሐይ", "ሐገር ሠላም ፀሀይ"}, {"b", "ዓለም ኀይል", "ኣለም ሀይል"}});
  const ConditionResult raw = ScoreCondition(m, EvalCondition::Raw());
  const ConditionResult norm = ScoreCondition(m, EvalCondition::Normalized(DefaultTable()));
  EXPECT_GT(raw.scores.wer, 0.0);
  EXPECT_EQ(norm.scores.wer, 0.0);
  EXPECT_EQ(norm.scores.cer, 0.0);
  EXPECT_FALSE(raw.normalization.has_value());
  ASSERT_TRUE(norm.normalization.has_value());
  EXPECT_GT(norm.normalization->replacements, 0u);
}

TEST(ScoreConditionTest, OffFamilySubstitution) {
  const Manifest m = Make({{"a", "ቤት ቡና ሻይ ዳቦ", "ቤት ቡና ወተት ዳቦ"}});
  EXPECT_DOUBLE_EQ(ScoreCondition(m, EvalCondition::Raw()).scores.wer, 25.0);
  EXPECT_DOUBLE_EQ(ScoreCondition(m, EvalCondition::Normalized(DefaultTable())).scores.wer, 25.0);
}

TEST(ScoreConditionTest, EmptyReferenceNamesPair) {
  const Manifest m = Make({{"ok", "ሀ", "ሀ"}, {"blank", "  ", "ሀ"}});
  try {
    ScoreCondition(m, EvalCondition::Raw());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyReference);
    EXPECT_EQ(e.id(), "blank");
  }
}

TEST(ScoreConditionTest, PerUtteranceMean) {
  const Manifest m = Make({{"a", "a b c d", "a b x d"}, {"b", "a b c d e f", "a b c d e f"}});
  ScoringOptions options;
  EXPECT_DOUBLE_EQ(ScoreCondition(m, EvalCondition::Raw(), options).scores.wer, 10.0);
  options.aggregation = Aggregation::kPerUtteranceMean;
  EXPECT_DOUBLE_EQ(ScoreCondition(m, EvalCondition::Raw(), options).scores.wer, 12.5);
}

TEST(ScoreManifestTest, ConditionIndependence) {
  const Manifest m = LoadManifest(testing::DataPath("homophone_mix_50.jsonl"));
  const Manifest copy = m;
  const auto table = DefaultTable();
  const ScoreReport a = ScoreManifest(m, {EvalCondition::Raw(), EvalCondition::Normalized(table)});
  const ScoreReport b = ScoreManifest(m, {EvalCondition::Normalized(table), EvalCondition::Raw()});
  const ConditionResult raw_again = ScoreCondition(m, EvalCondition::Raw());
  EXPECT_EQ(m.pairs, copy.pairs);
  EXPECT_EQ(a.conditions[0].scores, b.conditions[1].scores);
  EXPECT_EQ(a.conditions[1].scores, b.conditions[0].scores);
  EXPECT_EQ(a.conditions[0].scores, raw_again.scores);
  EXPECT_EQ(a.pair_count, 50u);
  EXPECT_EQ(a.test_set, "homophone_mix_50");
}

TEST(ScoreManifestTest, HomophoneFixtureImproves) {
  const Manifest m = LoadManifest(testing::DataPath("homophone_mix_50.jsonl"));
  const MetricScores raw = ScoreCondition(m, EvalCondition::Raw()).scores;
  const MetricScores norm = ScoreCondition(m, EvalCondition::Normalized(DefaultTable())).scores;
  EXPECT_LT(norm.wer, raw.wer);
  EXPECT_LT(norm.cer, raw.cer);
  EXPECT_GT(norm.corpus_bleu, raw.corpus_bleu);
  // plain errors survive normalization
  EXPECT_GT(norm.wer, 0.0);
}

std::map<std::string, Manifest> LoadModels() {
  std::map<std::string, Manifest> models;
  for (const char* name : {"strong", "medium", "weak"}) {
    models[name] = LoadManifest(testing::DataPath(std::string("models/") + name + ".jsonl"));
  }
  return models;
}

TEST(CompareModelsTest, ThreeModels) {
  const ComparisonReport r = CompareModels(LoadModels(), DefaultTable());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].model, "strong");
  EXPECT_EQ(r.rows[1].model, "medium");
  EXPECT_EQ(r.rows[2].model, "weak");
  EXPECT_EQ(r.pair_count, 30u);
  EXPECT_EQ(r.family_names, (std::vector<std::string>{"ha", "a", "sa", "tsa"}));
  for (const ModelRow& row : r.rows) {
    EXPECT_LE(row.delta.wer, 0.0);
    EXPECT_LE(row.delta.cer, 0.0);
    EXPECT_GE(row.delta.corpus_bleu, 0.0);
    EXPECT_EQ(row.raw.scores.pair_count, row.normalized.scores.pair_count);
  }
  const ModelRow& strong = r.rows[0];
  EXPECT_TRUE(strong.best_raw.wer && strong.best_raw.cer && strong.best_raw.corpus_bleu &&
              strong.best_raw.avg_bleu);
  EXPECT_TRUE(strong.best_normalized.wer && strong.best_normalized.cer &&
              strong.best_normalized.corpus_bleu && strong.best_normalized.avg_bleu);
  EXPECT_FALSE(r.rows[2].best_raw.wer || r.rows[2].best_normalized.corpus_bleu);
}

TEST(CompareModelsTest, SingleModel) {
  std::map<std::string, Manifest> models;
  models["only"] = LoadManifest(testing::DataPath("homophone_mix_50.jsonl"));
  const ComparisonReport r = CompareModels(models, DefaultTable());
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LT(r.rows[0].delta.wer, 0.0);
  EXPECT_TRUE(r.rows[0].best_raw.wer);
  EXPECT_TRUE(r.rows[0].best_normalized.avg_bleu);
}

TEST(CompareModelsTest, TiesGoToSmallerName) {
  std::map<std::string, Manifest> models;
  const Manifest m = Make({{"a", "ሀ ለ", "ሀ ለ"}});
  models["zeta"] = m;
  models["alpha"] = m;
  const ComparisonReport r = CompareModels(models, DefaultTable());
  EXPECT_EQ(r.rows[0].model, "alpha");
  EXPECT_TRUE(r.rows[0].best_raw.wer);
  EXPECT_FALSE(r.rows[1].best_raw.wer);
}

TEST(CompareModelsTest, Mismatches) {
  auto models = LoadModels();
  models["weak"].pairs.back().id = "other";
  try {
    CompareModels(models, DefaultTable());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
  models = LoadModels();
  models["weak"].pairs[3].ref += " ሀ";
  try {
    CompareModels(models, DefaultTable());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRefMismatch);
    EXPECT_EQ(e.id(), models["weak"].pairs[3].id);
  }
  models = LoadModels();
  models["weak"].pairs.pop_back();
  EXPECT_THROW(CompareModels(models, DefaultTable()), Error);
  EXPECT_THROW(CompareModels({}, DefaultTable()), Error);
}

TEST(CompareModelsTest, ExplicitReference) {
  const auto models = LoadModels();
  Manifest reference = models.at("strong");
  for (EvalPair& p : reference.pairs) p.hyp.clear();
  reference.source_label = "refs";
  const ComparisonReport r = CompareModels(models, DefaultTable(), {}, {}, {}, &reference);
  EXPECT_EQ(r.test_set, "refs");
  reference.pairs[0].ref = "ሀ";
  EXPECT_THROW(CompareModels(models, DefaultTable(), {}, {}, {}, &reference), Error);
}

TEST(CompareModelsTest, DeltaSignsOnRandomModels) {
  std::mt19937 rng(21);
  const auto table = DefaultTable();
  for (int iter = 0; iter < 40; ++iter) {
    std::map<std::string, Manifest> models;
    std::vector<std::string> refs;
    for (int i = 0; i < 5; ++i) refs.push_back(testing::RandomAmharicSentence(rng, 1, 8));
    for (const char* name : {"m1", "m2", "m3"}) {
      Manifest m;
      for (int i = 0; i < 5; ++i) {
        m.pairs.push_back({"p" + std::to_string(i), refs[i], testing::RandomAmharicSentence(rng, 0, 9)});
      }
      models[name] = std::move(m);
    }
    const ComparisonReport r = CompareModels(models, table);
    for (const ModelRow& row : r.rows) {
      ASSERT_LE(row.normalized.scores.wer, row.raw.scores.wer);
      ASSERT_LE(row.normalized.scores.cer, row.raw.scores.cer);
      ASSERT_GE(row.normalized.scores.corpus_bleu, row.raw.scores.corpus_bleu);
    }
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      ASSERT_LE(r.rows[i - 1].normalized.scores.wer, r.rows[i].normalized.scores.wer);
    }
  }
}

TEST(NormalizeManifestTest, KeepsIdsAndOrder) {
  const Manifest m = Make({{"b", "ሐገር", "ኀገር"}, {"a", "ሀ", "ፀ"}});
  NormalizationStats stats;
  const Manifest out = NormalizeManifest(m, BuildDefaultTable(), &stats);
  EXPECT_EQ(out.pairs[0].id, "b");
  EXPECT_EQ(out.pairs[0].ref, "ሀገር");
  EXPECT_EQ(out.pairs[0].hyp, "ሀገር");
  EXPECT_EQ(out.pairs[1].hyp, "ጸ");
  EXPECT_EQ(stats.replacements, 3u);
  EXPECT_EQ(m.pairs[0].ref, "ሐገር");
}

TEST(RoundToReportedTest, Examples) {
  EXPECT_DOUBLE_EQ(RoundToReported(66.8740304976422), 66.87);
  EXPECT_DOUBLE_EQ(RoundToReported(23.529411764705884), 23.53);
  EXPECT_FALSE(std::signbit(RoundToReported(-0.001)));
}

}  // namespace
}  // namespace fidel
