// Copyright 2026 The qbafsum Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qbafsum: command-line driver.
//
//   validate   check a QBAF file
//   extract    transcript -> QBAF via a relation classifier
//   evaluate   source vs summary property report
//   benchmark  classifier verdicts vs gold labels
//   report     re-render a JSON report
//
// Exit status: 0 success, 1 semantic failure, 2 I/O or configuration failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbafsum/alignment.hpp"
#include "qbafsum/dfquad.hpp"
#include "qbafsum/extensions.hpp"
#include "qbafsum/extraction.hpp"
#include "qbafsum/graph.hpp"
#include "qbafsum/http.hpp"
#include "qbafsum/properties.hpp"
#include "qbafsum/qbaf_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qbafsum;

namespace {

constexpr int kOk = 0;
constexpr int kSemantic = 1;
constexpr int kIo = 2;
constexpr const char* kApiKeyVar = "QBAFSUM_API_KEY";

/// Bad flags, config files or environment.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Semantic failure that has already been reported.
struct Failed {};

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(text, out_path);
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::optional<std::string> api_key() {
  const char* key = std::getenv(kApiKeyVar);
  if (!key || !*key) return std::nullopt;
  return std::string(key);
}

// --- configuration -----------------------------------------------------------

struct ClassifierSettings {
  std::string url;
  std::string model;
  fs::path prompt_file;
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 4;
  int timeout_seconds = 60;
  int max_attempts = 3;
};

struct SimilaritySettings {
  std::string url;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  int timeout_seconds = 60;
  int max_attempts = 3;
};

struct FileConfig {
  std::optional<ClassifierSettings> classifier;
  std::optional<SimilaritySettings> similarity;
};

template <typename T>
void take(const json& section, const char* key, T& field) {
  if (section.contains(key)) field = section.at(key).get<T>();
}

void reject_secrets(const json& section, const std::string& where) {
  for (const char* key : {"api_key", "key", "token", "secret"})
    if (section.contains(key))
      throw ConfigError(where + "." + key + ": secrets belong in " + kApiKeyVar + ", not in the config file");
}

FileConfig load_config(const std::string& path) {
  FileConfig cfg;
  if (path.empty()) return cfg;
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  try {
    if (doc.contains("classifier")) {
      const json& c = doc.at("classifier");
      reject_secrets(c, "classifier");
      ClassifierSettings s;
      take(c, "url", s.url);
      take(c, "model", s.model);
      std::string prompt;
      take(c, "prompt_file", prompt);
      if (!prompt.empty()) s.prompt_file = fs::path(prompt).is_absolute() ? fs::path(prompt) : base / prompt;
      take(c, "batch_size", s.batch_size);
      take(c, "max_in_flight", s.max_in_flight);
      take(c, "timeout_seconds", s.timeout_seconds);
      take(c, "max_attempts", s.max_attempts);
      cfg.classifier = s;
    }
    if (doc.contains("similarity")) {
      const json& c = doc.at("similarity");
      reject_secrets(c, "similarity");
      SimilaritySettings s;
      take(c, "url", s.url);
      take(c, "batch_size", s.batch_size);
      take(c, "max_in_flight", s.max_in_flight);
      take(c, "timeout_seconds", s.timeout_seconds);
      take(c, "max_attempts", s.max_attempts);
      cfg.similarity = s;
    }
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return cfg;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// --- validate ----------------------------------------------------------------

struct ValidateArgs {
  std::string path;
  std::string format = "text";
  bool strict = false;
};

int cmd_validate(const ValidateArgs& a) {
  std::vector<std::string> warnings;
  Qbaf q = read_qbaf(a.path, {a.strict}, &warnings);
  ValidationReport report = validate(q);
  if (a.format == "json") {
    json violations = json::array();
    for (const auto& v : report.violations) violations.push_back({{"rule", v.rule}, {"message", v.message}});
    std::cout << dump({{"path", a.path}, {"ok", report.ok()}, {"violations", violations}, {"warnings", warnings}});
  } else {
    for (const auto& w : warnings) warn(w);
    if (report.ok()) std::cout << a.path << ": ok (" << q.size() << " arguments, " << q.edges().size() << " edges)\n";
    for (const auto& v : report.violations) std::cout << a.path << ": " << v.rule << ": " << v.message << "\n";
  }
  return report.ok() ? kOk : kSemantic;
}

// --- extract -----------------------------------------------------------------

struct ExtractArgs {
  std::string transcript;
  std::string out;
  std::string classifier = "keyword";
  std::string config;
  std::string cache_dir;
  std::string verdicts_in;
  std::string verdicts_out;
  bool summary = false;
  bool strict = false;
  std::optional<std::size_t> window;
  double speech_base = kDefaultSpeechBase;
};

std::unique_ptr<RelationClassifier> make_classifier(const ExtractArgs& a, ClassifyOptions& options) {
  if (a.classifier == "keyword") return std::make_unique<KeywordClassifier>();
  if (a.classifier.rfind("constant-", 0) == 0) {
    auto label = parse_relation_label(a.classifier.substr(9));
    if (!label || *label == RelationLabel::Unclassified) throw ConfigError("unknown classifier '" + a.classifier + "'");
    return std::make_unique<ConstantClassifier>(*label);
  }
  if (a.classifier != "chat") throw ConfigError("unknown classifier '" + a.classifier + "'");

  // Everything is checked before the first request goes out.
  auto key = api_key();
  if (!key) throw ConfigError(std::string("the chat classifier needs an API key in ") + kApiKeyVar);
  FileConfig cfg = load_config(a.config);
  if (!cfg.classifier) throw ConfigError("the chat classifier needs a \"classifier\" section in --config");
  const ClassifierSettings& s = *cfg.classifier;
  if (s.url.empty() || s.model.empty() || s.prompt_file.empty())
    throw ConfigError("classifier config needs url, model and prompt_file");
  ChatClassifier::Options o;
  o.url = s.url;
  o.model = s.model;
  o.api_key = *key;
  o.prompt_template = read_text(s.prompt_file);
  o.retry.max_attempts = s.max_attempts;
  o.timeout = std::chrono::seconds(s.timeout_seconds);
  options.batch_size = s.batch_size;
  options.max_in_flight = s.max_in_flight;
  return std::make_unique<ChatClassifier>(o);
}

int cmd_extract(const ExtractArgs& a) {
  Transcript t = read_transcript(a.transcript);
  std::vector<RelationVerdict> verdicts;
  if (!a.verdicts_in.empty()) {
    verdicts = verdicts_from_json(read_json_file(a.verdicts_in));
  } else {
    ClassifyOptions options;
    options.strict = a.strict;
    auto classifier = make_classifier(a, options);
    std::optional<ResponseCache> cache;
    if (!a.cache_dir.empty()) {
      cache.emplace(a.cache_dir);
      options.cache = &*cache;
    }
    auto pairs = candidate_pairs(t, {!a.summary, a.window});
    ClassifyRun run = classify(pairs, *classifier, options);
    std::cerr << "classified " << pairs.size() << " pairs: " << run.cache_hits << " cache hits, "
              << run.classifier_calls << " classifier calls, " << run.failures << " failures\n";
    for (const auto& e : run.errors) warn(e);
    verdicts = std::move(run.verdicts);
  }
  if (!a.verdicts_out.empty()) write_json_file(verdicts_to_json(verdicts), a.verdicts_out);

  BuildOptions build;
  build.speech_base = a.speech_base;
  build.source = a.summary ? GraphSource::Summary : GraphSource::Original;
  std::vector<std::string> warnings;
  Qbaf q = build_qbaf(t, verdicts, build, &warnings);
  for (const auto& w : warnings) warn(w);
  emit(dump(qbaf_to_json(q)), a.out);
  return kOk;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string source;
  std::string summary;
  std::string out;
  std::string format = "json";
  std::string matcher = "none";
  std::string config;
  double epsilon = kDefaultEpsilon;
  std::optional<double> speech_base;
  std::vector<double> sweep;
  double budget_seconds = 30.0;
  double match_threshold = 1.0;
  double strength_c = 0.5;
  int influencer_n = 1;
  bool strict = false;
  bool no_rouge = false;
};

Qbaf load_valid(const std::string& path, bool strict) {
  std::vector<std::string> warnings;
  Qbaf q = read_qbaf(path, {strict}, &warnings);
  for (const auto& w : warnings) warn(path + ": " + w);
  ValidationReport report = validate(q);
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << path << ": " << v.rule << ": " << v.message << "\n";
    throw Failed{};
  }
  return q;
}

std::optional<MatchMap> build_match(const EvaluateArgs& a, const Qbaf& src, const Qbaf& sum) {
  if (a.matcher == "none") return std::nullopt;
  if (a.matcher == "identity") return identity_match(src, sum);
  auto method = parse_match_method(a.matcher);
  if (!method) throw ConfigError("unknown matcher '" + a.matcher + "'");
  MatcherConfig cfg;
  cfg.method = *method;
  cfg.threshold = a.match_threshold;
  if (*method == MatchMethod::ExternalSimilarity) {
    FileConfig file = load_config(a.config);
    if (!file.similarity || file.similarity->url.empty())
      throw ConfigError("the external matcher needs a \"similarity\" section with a url in --config");
    HttpSimilarityScorer::Options o;
    o.endpoint.url = file.similarity->url;
    if (auto key = api_key()) o.endpoint.headers.push_back({"Authorization", "Bearer " + *key});
    o.endpoint.timeout = std::chrono::seconds(file.similarity->timeout_seconds);
    o.retry.max_attempts = file.similarity->max_attempts;
    o.batch_size = file.similarity->batch_size;
    o.max_in_flight = file.similarity->max_in_flight;
    cfg.scorer = std::make_shared<HttpSimilarityScorer>(o);
  }
  try {
    cfg.check();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return match_speech(src, sum, cfg);
}

int cmd_evaluate(const EvaluateArgs& a) {
  if (a.epsilon < 0.0) throw ConfigError("--epsilon must be >= 0");
  if (a.budget_seconds <= 0.0) throw ConfigError("--budget-seconds must be > 0");
  Qbaf src = load_valid(a.source, a.strict);
  Qbaf sum = load_valid(a.summary, a.strict);

  SemanticsConfig semantics;
  semantics.speech_base_score = a.speech_base;
  SearchBudget budget;
  budget.wall_clock = std::chrono::milliseconds(static_cast<long long>(a.budget_seconds * 1000.0));
  EvalContext ctx(src, sum, semantics, a.epsilon, budget);

  ReportOptions options;
  options.match = build_match(a, src, sum);
  options.supplementary.strength_c = a.strength_c;
  options.supplementary.influencer_n = a.influencer_n;
  options.sweep = a.sweep;
  options.rouge = !a.no_rouge;
  ReportBundle report = full_report(ctx, options);

  for (const auto& reason : report.unavailable) warn(reason);
  if (a.format == "markdown") {
    emit(render_markdown(report), a.out);
  } else if (a.format == "text") {
    emit(render_text(report), a.out);
  } else {
    emit(dump(report_to_json(report)), a.out);
  }
  return a.strict && !report.unavailable.empty() ? kSemantic : kOk;
}

// --- benchmark ---------------------------------------------------------------

struct BenchmarkArgs {
  std::string verdicts;
  std::string gold;
  std::string out;
  std::string format = "json";
};

std::string metrics_text(const ArcMetrics& m) {
  std::ostringstream os;
  os << "pairs      " << m.n << "\n";
  os << "accuracy   " << format2(m.accuracy) << "\n";
  os << "macro F1   " << format2(m.macro_f1) << "\n";
  for (const auto& [name, f1] : m.per_class_f1) os << "F1 " << name << std::string(8 - name.size(), ' ') << format2(f1) << "\n";
  os << "confusion (rows gold; columns attack support neither unclassified)\n";
  const char* rows[3] = {"attack", "support", "neither"};
  for (int r = 0; r < 3; ++r) {
    os << "  " << rows[r] << std::string(8 - std::string(rows[r]).size(), ' ');
    for (std::size_t c : m.confusion[r]) os << " " << c;
    os << "\n";
  }
  for (const auto& k : m.kappa)
    os << "kappa a" << k.first << "/a" << k.second << " " << format2(k.kappa) << " over " << k.items << " items\n";
  return os.str();
}

int cmd_benchmark(const BenchmarkArgs& a) {
  auto verdicts = verdicts_from_json(read_json_file(a.verdicts));
  auto gold = read_gold_csv(a.gold);
  ArcMetrics m = arc_eval(verdicts, gold);
  emit(a.format == "text" ? metrics_text(m) : dump(arc_metrics_to_json(m)), a.out);
  return kOk;
}

// --- report ------------------------------------------------------------------

struct ReportArgs {
  std::string path;
  std::string out;
  std::string format = "markdown";
};

int cmd_report(const ReportArgs& a) {
  json doc = read_json_file(a.path);
  try {
    if (a.format == "json") {
      emit(dump(doc), a.out);
    } else {
      emit(a.format == "text" ? render_text(doc) : render_markdown(doc), a.out);
    }
  } catch (const json::exception& e) {
    throw ParseError("'" + a.path + "' is not a report: " + e.what());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debate and summary argumentation graphs: build, compare, report."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qbafsum 0.1.0");
  const std::vector<std::string> formats{"json", "markdown", "text"};

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Check a QBAF file against the structural rules");
  validate_cmd->add_option("path", va.path, "QBAF JSON file")->required();
  validate_cmd->add_option("--format", va.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  validate_cmd->add_flag("--strict", va.strict, "Unknown fields are errors");

  ExtractArgs ea;
  auto* extract_cmd = app.add_subcommand("extract", "Build a QBAF from a transcript");
  extract_cmd->add_option("transcript", ea.transcript, "Transcript JSON file")->required();
  extract_cmd->add_option("-o,--output", ea.out, "Output QBAF file (default stdout)");
  extract_cmd->add_option("--classifier", ea.classifier, "keyword, constant-<label> or chat");
  extract_cmd->add_option("--config", ea.config, "JSON config with a \"classifier\" section");
  extract_cmd->add_option("--cache-dir", ea.cache_dir, "Directory for cached classifier responses");
  extract_cmd->add_option("--verdicts", ea.verdicts_in, "Use these verdicts instead of classifying");
  extract_cmd->add_option("--verdicts-out", ea.verdicts_out, "Also write the verdicts here");
  extract_cmd->add_option("--window", ea.window, "Pair each segment with at most this many earlier ones");
  extract_cmd->add_option("--speech-base", ea.speech_base, "Base score of speech arguments")
      ->check(CLI::Range(0.0, 1.0));
  extract_cmd->add_flag("--summary", ea.summary, "Transcript is a summary: all ordered pairs are candidates");
  extract_cmd->add_flag("--strict", ea.strict, "Abort on classifier failures");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a summary graph against its source graph");
  evaluate_cmd->add_option("source", ev.source, "Source debate QBAF")->required();
  evaluate_cmd->add_option("summary", ev.summary, "Summary QBAF")->required();
  evaluate_cmd->add_option("-o,--output", ev.out, "Output file (default stdout)");
  evaluate_cmd->add_option("--format", ev.format, "json, markdown or text")->check(CLI::IsMember(formats));
  evaluate_cmd->add_option("--epsilon", ev.epsilon, "Tolerance for P5");
  evaluate_cmd->add_option("--speech-base", ev.speech_base, "Override speech base scores")->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--sweep", ev.sweep, "Comma-separated speech base scores for a sweep block")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--budget-seconds", ev.budget_seconds, "Wall-clock budget per graph for each exponential search");
  evaluate_cmd->add_option("--matcher", ev.matcher, "none, identity, exact, normalized or external");
  evaluate_cmd->add_option("--match-threshold", ev.match_threshold, "Minimum match score")->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--strength-c", ev.strength_c, "Strength cut-off for the strength-inclusive check");
  evaluate_cmd->add_option("--influencer-n", ev.influencer_n, "Degree cut-off for the influencer check");
  evaluate_cmd->add_option("--config", ev.config, "JSON config with a \"similarity\" section");
  evaluate_cmd->add_flag("--no-rouge", ev.no_rouge, "Skip the ROUGE-2 baseline");
  evaluate_cmd->add_flag("--strict", ev.strict, "Unknown fields and unavailable properties are failures");

  BenchmarkArgs ba;
  auto* benchmark_cmd = app.add_subcommand("benchmark", "Score relation verdicts against gold labels");
  benchmark_cmd->add_option("verdicts", ba.verdicts, "Verdict JSON from extract --verdicts-out")->required();
  benchmark_cmd->add_option("gold", ba.gold, "Gold CSV")->required();
  benchmark_cmd->add_option("-o,--output", ba.out, "Output file (default stdout)");
  benchmark_cmd->add_option("--format", ba.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "Render a JSON report as markdown or text");
  report_cmd->add_option("report", ra.path, "JSON report from evaluate")->required();
  report_cmd->add_option("-o,--output", ra.out, "Output file (default stdout)");
  report_cmd->add_option("--format", ra.format, "json, markdown or text")->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kIo;
  }

  try {
    if (*validate_cmd) return cmd_validate(va);
    if (*extract_cmd) return cmd_extract(ea);
    if (*evaluate_cmd) return cmd_evaluate(ev);
    if (*benchmark_cmd) return cmd_benchmark(ba);
    if (*report_cmd) return cmd_report(ra);
  } catch (const Failed&) {
    return kSemantic;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ServiceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kOk;
}
