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


#include "fidel_eval/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace fidel {
namespace {

Manifest Read(const std::string& text, ManifestFormat format = ManifestFormat::kJsonl) {
  std::istringstream in(text);
  return ReadManifest(in, format, "mem");
}

ErrorCode CodeOf(const std::string& text, ManifestFormat format = ManifestFormat::kJsonl) {
  try {
    Read(text, format);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::kIo;
}

TEST(ManifestTest, ThreeLines) {
  const Manifest m = Read(
      "{\"id\": \"a\", \"ref\": \"ሀገር\", \"hyp\": \"ሀገር\"}\n"
      "{\"id\": \"b\", \"ref\": \"ሰላም\", \"hyp\": \"\"}\n"
      "\n"
      "{\"hyp\": \"ቡና\", \"ref\": \"ቡና ሻይ\", \"id\": \"c\", \"extra\": 1}\n");
  ASSERT_EQ(m.pairs.size(), 3u);
  EXPECT_EQ(m.pairs[0].id, "a");
  EXPECT_EQ(m.pairs[1].hyp, "");
  EXPECT_EQ(m.pairs[2].ref, "ቡና ሻይ");
  EXPECT_EQ(m.pairs[2].line, 4u);
  EXPECT_EQ(m.source_label, "mem");
  ASSERT_NE(m.Find("b"), nullptr);
  EXPECT_EQ(m.Find("b")->ref, "ሰላም");
  EXPECT_EQ(m.Find("zz"), nullptr);
}

TEST(ManifestTest, DuplicateIdReportsBothLines) {
  std::string text;
  for (int i = 1; i <= 4; ++i) {
    text += "{\"id\": \"u" + std::to_string(i) + "\", \"ref\": \"ሀ\", \"hyp\": \"ሀ\"}\n";
  }
  text += "{\"id\": \"u1\", \"ref\": \"ሀ\", \"hyp\": \"ሀ\"}\n";
  try {
    Read(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.id(), "u1");
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(ManifestTest, Errors) {
  EXPECT_EQ(CodeOf("{\"id\": \"a\", \"ref\": \" \", \"hyp\": \"x\"}\n"), ErrorCode::kEmptyReference);
  EXPECT_EQ(CodeOf("{\"id\": \"a\", \"ref\": \"x\"}\n"), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("{\"id\": 3, \"ref\": \"x\", \"hyp\": \"x\"}\n"), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("not json\n"), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("{\"id\": \"\", \"ref\": \"x\", \"hyp\": \"x\"}\n"), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("\n\n"), ErrorCode::kEmptyCorpus);
  EXPECT_EQ(CodeOf(""), ErrorCode::kEmptyCorpus);
  EXPECT_EQ(CodeOf("{\"id\": \"a\", \"ref\": \"\xff\", \"hyp\": \"x\"}\n"), ErrorCode::kEncoding);
  EXPECT_EQ(CodeOf("{\"id\": \"a\", \"ref\": \"\\ud800\", \"hyp\": \"x\"}\n"), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("a\tb\n", ManifestFormat::kTsv), ErrorCode::kParse);
  EXPECT_EQ(CodeOf("a\tb\tc\td\n", ManifestFormat::kTsv), ErrorCode::kParse);
}

TEST(ManifestTest, LineTooLong) {
  const std::string big(kMaxManifestLineBytes + 1, 'x');
  try {
    Read("{\"id\": \"a\", \"ref\": \"ሀ\", \"hyp\": \"ሀ\"}\n" + big + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ManifestTest, ErrorLineNumbers) {
  try {
    Read("{\"id\": \"a\", \"ref\": \"ሀ\", \"hyp\": \"ሀ\"}\n\n{broken\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ManifestTest, Tsv) {
  const Manifest m = Read("x1\tሀገር ሰላም\tሀገር\nx2\tቡና\t\n", ManifestFormat::kTsv);
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.pairs[0].ref, "ሀገር ሰላም");
  EXPECT_EQ(m.pairs[1].hyp, "");
  // CRLF endings are tolerated.
  const Manifest crlf = Read("x1\tሀ\tሀ\r\n", ManifestFormat::kTsv);
  EXPECT_EQ(crlf.pairs[0].hyp, "ሀ");
}

TEST(ManifestTest, TextIsComposed) {
  const Manifest m = Read("{\"id\": \"a\", \"ref\": \"cafe\\u0301\", \"hyp\": \"cafe\xCC\x81\"}\n");
  EXPECT_EQ(m.pairs[0].ref, "caf\xC3\xA9");
  EXPECT_EQ(m.pairs[0].hyp, "caf\xC3\xA9");
}

TEST(ManifestTest, FormatNames) {
  EXPECT_EQ(ParseManifestFormat("jsonl"), ManifestFormat::kJsonl);
  EXPECT_EQ(ParseManifestFormat("tsv"), ManifestFormat::kTsv);
  EXPECT_FALSE(ParseManifestFormat("xml").has_value());
  EXPECT_EQ(InferManifestFormat("a/b.tsv"), ManifestFormat::kTsv);
  EXPECT_EQ(InferManifestFormat("a/b.jsonl"), ManifestFormat::kJsonl);
}

TEST(ManifestTest, LoadsFixture) {
  const Manifest m = LoadManifest(testing::DataPath("cv_sized_205.jsonl"));
  EXPECT_EQ(m.pairs.size(), 205u);
  EXPECT_EQ(m.source_label, "cv_sized_205");
  EXPECT_EQ(m.pairs.front().line, 1u);
  EXPECT_EQ(m.pairs.back().line, 205u);
}

TEST(ManifestTest, MissingFile) {
  try {
    LoadManifest("/nonexistent/nope.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ManifestTest, RoundTrip) {
  const Manifest original = LoadManifest(testing::DataPath("homophone_mix_50.jsonl"));
  for (ManifestFormat format : {ManifestFormat::kJsonl, ManifestFormat::kTsv}) {
    std::ostringstream out;
    WriteManifest(out, original, format);
    const Manifest again = Read(out.str(), format);
    EXPECT_EQ(again.pairs, original.pairs);
    std::ostringstream out2;
    WriteManifest(out2, again, format);
    EXPECT_EQ(out2.str(), out.str());
  }
}

TEST(ManifestTest, TsvRejectsTabsInFields) {
  Manifest m;
  m.pairs.push_back({"a", "x\ty", "z"});
  std::ostringstream out;
  EXPECT_THROW(WriteManifest(out, m, ManifestFormat::kTsv), Error);
  std::ostringstream json;
  WriteManifest(json, m, ManifestFormat::kJsonl);
  EXPECT_EQ(Read(json.str()).pairs, m.pairs);
}

TEST(ValidateTest, Flags) {
  const Manifest m = Read(
      "{\"id\": \"a\", \"ref\": \"ሀገር\", \"hyp\": \"ሀገር\"}\n"
      "{\"id\": \"b\", \"ref\": \"ሰላም\", \"hyp\": \"  \"}\n"
      "{\"id\": \"c\", \"ref\": \"hello world\", \"hyp\": \"ሀ\"}\n");
  const ValidationReport r = ValidateManifest(m);
  ASSERT_EQ(r.pairs.size(), 3u);
  EXPECT_FALSE(r.pairs[0].empty_hyp);
  EXPECT_TRUE(r.pairs[1].empty_hyp);
  EXPECT_TRUE(r.pairs[2].non_ethiopic_ref);
  EXPECT_EQ(r.pairs[0].ref_codepoints, 3u);
  EXPECT_EQ(r.empty_hyp_count, 1u);
  EXPECT_EQ(r.non_ethiopic_ref_count, 1u);
  EXPECT_EQ(r.flag_count(), 2u);
}

}  // namespace
}  // namespace fidel
