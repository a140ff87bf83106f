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

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbafsum/graph.hpp"
#include "qbafsum/http.hpp"

namespace qbafsum {

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProposalAlignment {
  /// provision index -> (source id, summary id), ordered by provision.
  std::map<int, std::pair<ArgumentId, ArgumentId>> pairs;
  std::vector<int> source_only;
  std::vector<int> summary_only;
};

/// Pairs proposals by provision index. Throws AlignmentError when a graph
/// carries the same provision twice or a proposal id without an index.
ProposalAlignment align_proposals(const Qbaf& source, const Qbaf& summary);

enum class MatchMethod { ExactText, NormalizedText, ExternalSimilarity };

const char* to_string(MatchMethod method);
std::optional<MatchMethod> parse_match_method(const std::string& name);

struct MatchPair {
  ArgumentId source;
  ArgumentId summary;
  double score = 0.0;
};

/// Injective speech-argument matching between a source and a summary graph.
struct MatchMap {
  std::string method;
  std::vector<MatchPair> pairs;  // sorted by source id

  std::optional<ArgumentId> summary_for(const ArgumentId& source) const;
  std::optional<ArgumentId> source_for(const ArgumentId& summary) const;
};

/// Scores text pairs in [0,1]. Implementations must be deterministic for a
/// given input.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual std::vector<double> score(const std::vector<std::pair<std::string, std::string>>& pairs) = 0;
};

/// Scores via POST {"pairs":[{"a":..,"b":..}]} -> {"scores":[..]}, in batches
/// with a bounded number of requests in flight and an in-memory cache.
class HttpSimilarityScorer : public SimilarityScorer {
 public:
  struct Options {
    HttpEndpoint endpoint;
    RetryPolicy retry;
    std::size_t batch_size = 32;
    std::size_t max_in_flight = 4;
  };

  explicit HttpSimilarityScorer(Options options) : options_(std::move(options)) {}

  /// Throws ServiceError naming how many pairs were scored before the failure.
  std::vector<double> score(const std::vector<std::pair<std::string, std::string>>& pairs) override;

  std::size_t cache_hits() const;
  std::size_t remote_pairs() const;

 private:
  Options options_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, double> cache_;
  std::size_t cache_hits_ = 0;
  std::size_t remote_pairs_ = 0;
};

struct MatcherConfig {
  MatchMethod method = MatchMethod::NormalizedText;
  double threshold = 1.0;
  /// Required for ExternalSimilarity.
  std::shared_ptr<SimilarityScorer> scorer;

  void check() const;
};

/// Whitespace runs collapsed to one space, trimmed.
std::string collapse_whitespace(const std::string& text);
/// Lowercased, punctuation removed, whitespace collapsed.
std::string normalize_text(const std::string& text);

/// Greedy matching: candidate pairs scoring at least `threshold` (and above
/// zero) are taken in descending score order, ties by (source, summary) id.
/// `scores[i][j]` scores source i against summary j.
MatchMap greedy_match(const std::vector<ArgumentId>& source, const std::vector<ArgumentId>& summary,
                      const std::vector<std::vector<double>>& scores, double threshold, std::string method);

MatchMap match_speech(const Qbaf& source, const Qbaf& summary, const MatcherConfig& config);

/// Matches every speech argument to the summary argument with the same id.
MatchMap identity_match(const Qbaf& source, const Qbaf& summary);

}  // namespace qbafsum
