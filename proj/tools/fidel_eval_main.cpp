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


// fidel-eval: corpus scoring for Ethiopic-script ASR output.
//
//   fidel-eval normalize [INPUT]            homophone-normalize text or a manifest
//   fidel-eval score MANIFEST               WER / CER / corpus BLEU / avg BLEU
//   fidel-eval compare [NAME=]MANIFEST...   raw vs. normalized table, one row per model
//   fidel-eval validate MANIFEST            per-pair ingestion checks
//   fidel-eval diag MANIFEST                degenerate hypothesis detection
//
// Exit codes: 0 success, 1 data or validation failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fidel_eval/fidel_eval.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

constexpr const char* kTableEnvVar = "FIDEL_EVAL_TABLE";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::string format;  // jsonl | tsv, empty = infer
  std::string output = "json";
  std::string out_path;
  std::string table_path;
  std::string ref_path;
  std::string label;
  bool normalize = false;
  bool per_utterance_mean = false;
  bool strip_punct = false;
  bool case_fold = false;
  bool timestamps = false;
  fidel::DiagnosticThresholds thresholds;
};

std::shared_ptr<const fidel::NormalizationTable> ResolveTable(const RunConfig& config) {
  std::string path = config.table_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kTableEnvVar); env != nullptr) path = env;
  }
  if (path.empty()) {
    return std::make_shared<const fidel::NormalizationTable>(fidel::BuildDefaultTable());
  }
  try {
    return std::make_shared<const fidel::NormalizationTable>(fidel::LoadTableOverride(path));
  } catch (const fidel::Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

fidel::ManifestFormat ResolveFormat(const RunConfig& config, const std::string& path) {
  if (config.format.empty()) return fidel::InferManifestFormat(path);
  return *fidel::ParseManifestFormat(config.format);
}

fidel::OutputFormat ResolveOutput(const RunConfig& config) {
  return *fidel::ParseOutputFormat(config.output);
}

fidel::ScoringOptions ResolveScoring(const RunConfig& config) {
  fidel::ScoringOptions options;
  options.text.strip_punct = config.strip_punct;
  options.text.case_fold = config.case_fold;
  options.aggregation = config.per_utterance_mean ? fidel::Aggregation::kPerUtteranceMean
                                                  : fidel::Aggregation::kPooled;
  return options;
}

fidel::Manifest LoadInput(const RunConfig& config, const std::string& path) {
  fidel::Manifest manifest = fidel::LoadManifest(path, ResolveFormat(config, path));
  if (!config.label.empty()) manifest.source_label = config.label;
  return manifest;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string FinishJson(fidel::OrderedJson j, const RunConfig& config) {
  if (config.timestamps) j["generated_at"] = UtcTimestamp();
  return j.dump(2) + "\n";
}

void Emit(const RunConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out) throw fidel::Error(fidel::ErrorCode::kIo, "cannot write " + config.out_path);
  out << text;
}

std::string StatsLine(const fidel::NormalizationStats& stats,
                      const fidel::NormalizationTable& table) {
  std::string line = "replacements=" + std::to_string(stats.replacements) +
                     " skipped=" + std::to_string(stats.skipped);
  for (std::size_t i = 0; i < table.families().size(); ++i) {
    const std::size_t n = i < stats.by_family.size() ? stats.by_family[i] : 0;
    line += " " + table.families()[i].name + "=" + std::to_string(n);
  }
  return line;
}

// ---------------------------------------------------------------------------

int RunNormalize(const RunConfig& config) {
  const auto table = ResolveTable(config);
  const std::string input = config.inputs.empty() ? "-" : config.inputs.front();
  fidel::NormalizationStats stats;
  stats.by_family.assign(table->families().size(), 0);

  if (!config.format.empty()) {
    fidel::Manifest manifest = LoadInput(config, input);
    const fidel::ManifestFormat format = ResolveFormat(config, input);
    const fidel::Manifest normalized = fidel::NormalizeManifest(manifest, *table, &stats);
    std::ostringstream out;
    fidel::WriteManifest(out, normalized, format);
    Emit(config, out.str());
    std::cerr << "normalize: " << StatsLine(stats, *table) << "\n";
    return kExitOk;
  }

  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input, std::ios::binary);
    if (!file) throw fidel::Error(fidel::ErrorCode::kIo, "cannot open " + input);
    in = &file;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!config.out_path.empty()) {
    file_out.open(config.out_path, std::ios::binary);
    if (!file_out) throw fidel::Error(fidel::ErrorCode::kIo, "cannot write " + config.out_path);
    out = &file_out;
  }
  // Line at a time so memory stays flat on large inputs.
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (const auto bad = fidel::unicode::FindInvalidUtf8(line)) {
      throw fidel::Error(fidel::ErrorCode::kEncoding,
                         input + ": line " + std::to_string(line_no) +
                             ": invalid UTF-8 at byte " + std::to_string(*bad),
                         line_no);
    }
    fidel::NormalizedText result = fidel::NormalizeText(fidel::unicode::ToNfc(line), *table);
    stats += result.stats;
    *out << result.text << '\n';
  }
  out->flush();
  std::cerr << "normalize: " << StatsLine(stats, *table) << "\n";
  return kExitOk;
}

int RunScore(const RunConfig& config) {
  const fidel::Manifest manifest = LoadInput(config, config.inputs.front());
  std::vector<fidel::EvalCondition> conditions;
  std::vector<std::string> family_names;
  if (config.normalize) {
    const auto table = ResolveTable(config);
    for (const auto& f : table->families()) family_names.push_back(f.name);
    conditions.push_back(fidel::EvalCondition::Normalized(table));
  } else {
    conditions.push_back(fidel::EvalCondition::Raw());
  }
  const fidel::ScoreReport report =
      fidel::ScoreManifest(manifest, conditions, ResolveScoring(config), config.thresholds);
  const fidel::OutputFormat format = ResolveOutput(config);
  Emit(config, format == fidel::OutputFormat::kJson
                   ? FinishJson(fidel::ToJson(report, family_names), config)
                   : fidel::Render(report, format, family_names));
  return kExitOk;
}

std::pair<std::string, std::string> SplitModelArg(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) return {arg.substr(0, eq), arg.substr(eq + 1)};
  return {std::filesystem::path(arg).stem().string(), arg};
}

int RunCompare(const RunConfig& config) {
  const auto table = ResolveTable(config);
  std::map<std::string, fidel::Manifest> models;
  for (const std::string& arg : config.inputs) {
    auto [name, path] = SplitModelArg(arg);
    if (models.contains(name)) throw UsageError("model name '" + name + "' given twice");
    models.emplace(name, LoadInput(config, path));
  }
  std::optional<fidel::Manifest> reference;
  if (!config.ref_path.empty()) reference = LoadInput(config, config.ref_path);
  const fidel::ComparisonReport report =
      fidel::CompareModels(models, table, ResolveScoring(config), config.thresholds, config.label,
                           reference ? &*reference : nullptr);
  const fidel::OutputFormat format = ResolveOutput(config);
  Emit(config, format == fidel::OutputFormat::kJson ? FinishJson(fidel::ToJson(report), config)
                                                    : fidel::Render(report, format));
  return kExitOk;
}

int RunValidate(const RunConfig& config) {
  const fidel::Manifest manifest = LoadInput(config, config.inputs.front());
  const fidel::ValidationReport report =
      fidel::ValidateManifest(manifest, config.thresholds.min_ethiopic_ratio);
  const fidel::OutputFormat format = ResolveOutput(config);
  Emit(config, format == fidel::OutputFormat::kJson ? FinishJson(fidel::ToJson(report), config)
                                                    : fidel::Render(report, format));
  return kExitOk;
}

int RunDiag(const RunConfig& config) {
  const fidel::Manifest manifest = LoadInput(config, config.inputs.front());
  const fidel::DiagnosticSummary summary = fidel::DiagnoseCorpus(manifest.pairs, config.thresholds);
  const fidel::OutputFormat format = ResolveOutput(config);
  if (format == fidel::OutputFormat::kJson) {
    fidel::OrderedJson j;
    j["test_set"] = manifest.source_label;
    j["diagnostics"] = fidel::ToJson(summary, config.thresholds);
    Emit(config, FinishJson(std::move(j), config));
  } else {
    Emit(config, fidel::Render(summary, format, manifest.source_label, config.thresholds));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void AddFormat(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--format", config.format, "Manifest format (default: from file extension)")
      ->check(CLI::IsMember({"jsonl", "tsv"}));
}

void AddOutput(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--output", config.output, "Report format")
      ->check(CLI::IsMember({"json", "markdown", "csv"}));
  cmd->add_option("--out", config.out_path, "Write to PATH instead of standard output");
  cmd->add_flag("--timestamps", config.timestamps, "Add generated_at to JSON output");
}

void AddTable(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--table", config.table_path,
                  std::string("Homophone table override (fallback: $") + kTableEnvVar + ")");
}

void AddMetricFlags(CLI::App* cmd, RunConfig& config) {
  cmd->add_flag("--per-utterance-mean", config.per_utterance_mean,
                "Average per-pair WER/CER instead of pooling edits");
  cmd->add_flag("--strip-punct", config.strip_punct,
                "Strip ASCII and Ethiopic punctuation before tokenizing");
  cmd->add_flag("--case-fold", config.case_fold, "Case-fold non-Ethiopic letters");
  cmd->add_option("--label", config.label, "Test-set label (default: manifest file stem)");
}

void AddThresholds(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--min-ethiopic-ratio", config.thresholds.min_ethiopic_ratio,
                  "Flag non_ethiopic below this ratio")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-char-run", config.thresholds.max_char_run,
                  "Flag repetitive at this character run length")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-token-run", config.thresholds.max_token_run,
                  "Flag repetitive at this token run length")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation toolkit for Ethiopic-script ASR output", "fidel-eval"};
  app.require_subcommand(1);
  RunConfig config;

  CLI::App* normalize = app.add_subcommand("normalize", "Homophone-normalize text or a manifest");
  normalize->add_option("input", config.inputs, "Input file, '-' for standard input")
      ->expected(0, 1);
  AddFormat(normalize, config);
  AddTable(normalize, config);
  normalize->add_option("--out", config.out_path, "Write to PATH instead of standard output");

  CLI::App* score = app.add_subcommand("score", "Score one manifest");
  score->add_option("manifest", config.inputs, "Manifest path")->required()->expected(1);
  score->add_flag("--normalize", config.normalize, "Score the homophone-normalized condition");
  AddFormat(score, config);
  AddTable(score, config);
  AddMetricFlags(score, config);
  AddThresholds(score, config);
  AddOutput(score, config);

  CLI::App* compare = app.add_subcommand("compare", "Compare models, raw vs. normalized");
  compare->add_option("models", config.inputs, "Model manifests as [NAME=]PATH")
      ->required()
      ->expected(1, -1);
  compare->add_option("--ref", config.ref_path, "Reference manifest the models must match");
  AddFormat(compare, config);
  AddTable(compare, config);
  AddMetricFlags(compare, config);
  AddThresholds(compare, config);
  AddOutput(compare, config);

  CLI::App* validate = app.add_subcommand("validate", "Check a manifest and report per-pair flags");
  validate->add_option("manifest", config.inputs, "Manifest path")->required()->expected(1);
  AddFormat(validate, config);
  validate->add_option("--label", config.label, "Test-set label");
  validate->add_option("--min-ethiopic-ratio", config.thresholds.min_ethiopic_ratio,
                       "Flag references below this Ethiopic ratio")
      ->check(CLI::Range(0.0, 1.0));
  AddOutput(validate, config);

  CLI::App* diag = app.add_subcommand("diag", "List degenerate hypotheses");
  diag->add_option("manifest", config.inputs, "Manifest path")->required()->expected(1);
  AddFormat(diag, config);
  diag->add_option("--label", config.label, "Test-set label");
  AddThresholds(diag, config);
  AddOutput(diag, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fidel-eval: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (normalize->parsed()) return RunNormalize(config);
    if (score->parsed()) return RunScore(config);
    if (compare->parsed()) return RunCompare(config);
    if (validate->parsed()) return RunValidate(config);
    if (diag->parsed()) return RunDiag(config);
  } catch (const UsageError& e) {
    std::cerr << "fidel-eval: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fidel::Error& e) {
    std::cerr << "fidel-eval: " << fidel::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == fidel::ErrorCode::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "fidel-eval: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
