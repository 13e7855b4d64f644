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


// Scores a manifest under the raw and homophone-normalized conditions and
// prints the comparison as a Markdown table.
//
//   fidel_quickstart samples/demo.jsonl

#include <iostream>
#include <map>
#include <memory>

#include "fidel_eval/fidel_eval.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " MANIFEST.jsonl\n";
    return 2;
  }
  try {
    const fidel::Manifest manifest = fidel::LoadManifest(argv[1]);
    auto table = std::make_shared<const fidel::NormalizationTable>(fidel::BuildDefaultTable());

    std::map<std::string, fidel::Manifest> models{{"demo", manifest}};
    const fidel::ComparisonReport report = fidel::CompareModels(models, table);
    std::cout << fidel::Render(report, fidel::OutputFormat::kMarkdown);

    for (const fidel::EvalPair& pair : manifest.pairs) {
      const fidel::NormalizedText hyp = fidel::NormalizeText(pair.hyp, *table);
      if (hyp.stats.replacements > 0) {
        std::cout << pair.id << ": " << pair.hyp << " -> " << hyp.text << "\n";
      }
    }
  } catch (const fidel::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
