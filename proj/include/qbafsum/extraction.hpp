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

#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbafsum/dfquad.hpp"
#include "qbafsum/graph.hpp"
#include "qbafsum/http.hpp"

namespace qbafsum {

/// A transcript that breaks a structural invariant.
class TranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Provision {
  int index = 0;
  std::string text;
};

struct SpeechSegment {
  long order = 0;
  std::string speaker;
  std::string text;
};

struct Transcript {
  std::string debate_id;
  std::vector<Provision> provisions;
  std::vector<SpeechSegment> segments;

  /// Throws TranscriptError on duplicate or non-positive provision indices,
  /// non-increasing segment orders or empty segment text.
  void check() const;
};

Transcript transcript_from_json(const nlohmann::json& doc);
nlohmann::json transcript_to_json(const Transcript& transcript);
Transcript read_transcript(const std::filesystem::path& path);

/// Argument id of a speech segment ("s:<order>").
ArgumentId segment_id(long order);

struct CandidatePair {
  ArgumentId source;
  ArgumentId target;
  std::string source_text;
  std::string target_text;
};

struct CandidateOptions {
  /// Original debates only relate later segments to earlier ones. Summaries
  /// admit every ordered pair of distinct segments.
  bool temporal = true;
  /// When set, a segment is paired with at most this many preceding segments.
  std::optional<std::size_t> window;
};

/// Segment-to-segment pairs followed by segment-to-provision pairs, grouped
/// by source segment in transcript order.
std::vector<CandidatePair> candidate_pairs(const Transcript& transcript, const CandidateOptions& options = {});

enum class RelationLabel { Attack, Support, Neither, Unclassified };

const char* to_string(RelationLabel label);
std::optional<RelationLabel> parse_relation_label(const std::string& text);

struct Classification {
  RelationLabel label = RelationLabel::Neither;
  std::optional<double> confidence;
  std::string raw;  // raw classifier output, digested into provenance
};

/// Labels candidate pairs. classify_batch may be called from several threads
/// at once and must be safe for that.
class RelationClassifier {
 public:
  virtual ~RelationClassifier() = default;
  /// Stable identity: name plus every setting that changes outputs.
  virtual std::string identity() const = 0;
  virtual std::vector<Classification> classify_batch(std::span<const CandidatePair> pairs) = 0;
};

/// Labels every pair the same way.
class ConstantClassifier : public RelationClassifier {
 public:
  explicit ConstantClassifier(RelationLabel label) : label_(label) {}
  std::string identity() const override;
  std::vector<Classification> classify_batch(std::span<const CandidatePair> pairs) override;

 private:
  RelationLabel label_;
};

/// Rule-based stand-in: "disagree" in the source text means Attack, otherwise
/// "agree" means Support, otherwise Neither. If the source text carries
/// "@<id>" tags (e.g. "@s:3", "@p:1") the rule applies only to tagged targets.
class KeywordClassifier : public RelationClassifier {
 public:
  std::string identity() const override { return "keyword-v1"; }
  std::vector<Classification> classify_batch(std::span<const CandidatePair> pairs) override;
  static Classification classify_one(const CandidatePair& pair);
};

/// Chat-completions style remote model. The prompt template substitutes
/// {{source}} and {{target}}; the first of attack/support/neither found in the
/// reply is the label.
class ChatClassifier : public RelationClassifier {
 public:
  struct Options {
    std::string url;
    std::string model;
    std::string api_key;
    std::string prompt_template;
    RetryPolicy retry;
    std::chrono::seconds timeout{60};
  };

  explicit ChatClassifier(Options options);
  std::string identity() const override;
  std::vector<Classification> classify_batch(std::span<const CandidatePair> pairs) override;

  std::string render_prompt(const CandidatePair& pair) const;
  static RelationLabel parse_reply(const std::string& reply);

 private:
  Options options_;
  std::string prompt_digest_;
};

/// One JSON file per digest under `dir`.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key(const std::string& classifier_identity, const CandidatePair& pair);
  std::optional<Classification> load(const std::string& key) const;
  void store(const std::string& key, const Classification& value) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct RelationVerdict {
  ArgumentId source;
  ArgumentId target;
  RelationLabel label = RelationLabel::Neither;
  std::optional<double> confidence;
  std::string classifier;
  std::string digest;  // SHA-256 of the raw classifier output
};

struct ClassifyOptions {
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 4;
  /// Abort on the first failed batch instead of marking pairs Unclassified.
  bool strict = false;
  ResponseCache* cache = nullptr;
};

struct ClassifyRun {
  std::vector<RelationVerdict> verdicts;  // same order as the input pairs
  std::size_t cache_hits = 0;
  std::size_t classifier_calls = 0;  // pairs sent to the classifier
  std::size_t failures = 0;          // pairs left Unclassified
  std::vector<std::string> errors;
};

/// Thrown in strict mode when a batch fails.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ClassifyRun classify(const std::vector<CandidatePair>& pairs, RelationClassifier& classifier,
                     const ClassifyOptions& options = {});

nlohmann::json verdicts_to_json(const std::vector<RelationVerdict>& verdicts);
std::vector<RelationVerdict> verdicts_from_json(const nlohmann::json& doc);

struct BuildOptions {
  double speech_base = kDefaultSpeechBase;
  GraphSource source = GraphSource::Original;
};

/// Assembles the debate graph. Every verdict must name a candidate pair of
/// the transcript (under the temporal rule implied by options.source);
/// Unclassified verdicts count as Neither and add a warning.
Qbaf build_qbaf(const Transcript& transcript, const std::vector<RelationVerdict>& verdicts,
                const BuildOptions& options = {}, std::vector<std::string>* warnings = nullptr);

struct GoldPair {
  ArgumentId source;
  ArgumentId target;
  RelationLabel label = RelationLabel::Neither;
  std::vector<std::optional<RelationLabel>> annotators;
};

/// source_id,target_id,label[,annotator...]; an optional header row starting
/// with "source_id" is skipped; empty annotator cells mean "not annotated".
std::vector<GoldPair> gold_from_csv(const std::string& text);
std::vector<GoldPair> read_gold_csv(const std::filesystem::path& path);

struct KappaEntry {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t items = 0;
  double kappa = 0.0;
};

struct ArcMetrics {
  std::size_t n = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_class_f1;  // attack, support, neither
  std::vector<std::vector<std::size_t>> confusion;  // gold x predicted, 3x4 (last column: unclassified)
  std::vector<KappaEntry> kappa;
};

/// Cohen's kappa between two equally long label lists.
double cohen_kappa(std::span<const RelationLabel> a, std::span<const RelationLabel> b);

/// Scores verdicts against gold. Gold pairs without a verdict count as
/// Unclassified predictions.
ArcMetrics arc_eval(const std::vector<RelationVerdict>& verdicts, const std::vector<GoldPair>& gold);
nlohmann::json arc_metrics_to_json(const ArcMetrics& metrics);

}  // namespace qbafsum
