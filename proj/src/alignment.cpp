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

#include "qbafsum/alignment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <future>
#include <tuple>

namespace qbafsum {

namespace {

std::map<int, ArgumentId> provisions_of(const Qbaf& qbaf, const char* side) {
  std::map<int, ArgumentId> out;
  for (std::size_t i : qbaf.proposals()) {
    const ArgumentId& id = qbaf.at(i).id;
    auto p = provision_index(id);
    if (!p) throw AlignmentError(std::string(side) + " proposal '" + id.str() + "' has no provision index");
    if (!out.emplace(*p, id).second)
      throw AlignmentError(std::string(side) + " graph has duplicate provision " + std::to_string(*p));
  }
  return out;
}

}  // namespace

ProposalAlignment align_proposals(const Qbaf& source, const Qbaf& summary) {
  auto left = provisions_of(source, "source");
  auto right = provisions_of(summary, "summary");
  ProposalAlignment out;
  for (const auto& [p, id] : left) {
    auto it = right.find(p);
    if (it == right.end()) {
      out.source_only.push_back(p);
    } else {
      out.pairs.emplace(p, std::make_pair(id, it->second));
    }
  }
  for (const auto& [p, id] : right)
    if (!left.count(p)) out.summary_only.push_back(p);
  return out;
}

const char* to_string(MatchMethod method) {
  switch (method) {
    case MatchMethod::ExactText: return "exact";
    case MatchMethod::NormalizedText: return "normalized";
    case MatchMethod::ExternalSimilarity: return "external";
  }
  return "?";
}

std::optional<MatchMethod> parse_match_method(const std::string& name) {
  if (name == "exact") return MatchMethod::ExactText;
  if (name == "normalized") return MatchMethod::NormalizedText;
  if (name == "external") return MatchMethod::ExternalSimilarity;
  return std::nullopt;
}

std::optional<ArgumentId> MatchMap::summary_for(const ArgumentId& source) const {
  for (const auto& p : pairs)
    if (p.source == source) return p.summary;
  return std::nullopt;
}

std::optional<ArgumentId> MatchMap::source_for(const ArgumentId& summary) const {
  for (const auto& p : pairs)
    if (p.summary == summary) return p.source;
  return std::nullopt;
}

std::vector<double> HttpSimilarityScorer::score(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<double> out(pairs.size(), 0.0);
  std::vector<std::size_t> missing;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (auto it = cache_.find(pairs[i]); it != cache_.end()) {
        out[i] = it->second;
        ++cache_hits_;
      } else {
        missing.push_back(i);
      }
    }
  }

  std::vector<std::vector<std::size_t>> batches;
  const std::size_t batch = std::max<std::size_t>(1, options_.batch_size);
  for (std::size_t i = 0; i < missing.size(); i += batch)
    batches.emplace_back(missing.begin() + i, missing.begin() + std::min(missing.size(), i + batch));

  std::atomic<std::size_t> scored{0};
  auto run = [&](const std::vector<std::size_t>& indices) {
    nlohmann::json body = {{"pairs", nlohmann::json::array()}};
    for (std::size_t i : indices) body["pairs"].push_back({{"a", pairs[i].first}, {"b", pairs[i].second}});
    nlohmann::json response = post_json(options_.endpoint, body, options_.retry);
    const auto& scores = response.at("scores");
    if (!scores.is_array() || scores.size() != indices.size())
      throw ServiceError("similarity service returned " + std::to_string(scores.size()) + " scores for " +
                         std::to_string(indices.size()) + " pairs");
    for (std::size_t k = 0; k < indices.size(); ++k) {
      double s = scores[k].get<double>();
      out[indices[k]] = std::clamp(s, 0.0, 1.0);
    }
    scored += indices.size();
  };

  const std::size_t window = std::max<std::size_t>(1, options_.max_in_flight);
  for (std::size_t start = 0; start < batches.size(); start += window) {
    std::vector<std::future<void>> inflight;
    for (std::size_t b = start; b < std::min(batches.size(), start + window); ++b)
      inflight.push_back(std::async(std::launch::async, run, std::cref(batches[b])));
    std::string failure;
    for (auto& f : inflight) {
      try {
        f.get();
      } catch (const std::exception& e) {
        if (failure.empty()) failure = e.what();
      }
    }
    if (!failure.empty()) {
      throw ServiceError("similarity scoring failed after " + std::to_string(scored.load()) + " of " +
                         std::to_string(missing.size()) + " pairs: " + failure);
    }
  }

  std::lock_guard lock(mutex_);
  for (std::size_t i : missing) cache_[pairs[i]] = out[i];
  remote_pairs_ += missing.size();
  return out;
}

std::size_t HttpSimilarityScorer::cache_hits() const {
  std::lock_guard lock(mutex_);
  return cache_hits_;
}

std::size_t HttpSimilarityScorer::remote_pairs() const {
  std::lock_guard lock(mutex_);
  return remote_pairs_;
}

void MatcherConfig::check() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("match threshold must lie in [0,1]");
  if (method == MatchMethod::ExternalSimilarity && !scorer)
    throw AlignmentError("external similarity matching needs a scorer");
}

std::string collapse_whitespace(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string normalize_text(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (std::ispunct(c)) continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return collapse_whitespace(out);
}

MatchMap greedy_match(const std::vector<ArgumentId>& source, const std::vector<ArgumentId>& summary,
                      const std::vector<std::vector<double>>& scores, double threshold, std::string method) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < summary.size(); ++j)
      if (scores[i][j] > 0.0 && scores[i][j] >= threshold) candidates.emplace_back(scores[i][j], i, j);
  std::sort(candidates.begin(), candidates.end(), [&](const auto& l, const auto& r) {
    if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) > std::get<0>(r);
    const auto& ls = source[std::get<1>(l)];
    const auto& rs = source[std::get<1>(r)];
    if (ls != rs) return ls < rs;
    return summary[std::get<2>(l)] < summary[std::get<2>(r)];
  });

  MatchMap map;
  map.method = std::move(method);
  std::vector<char> used_source(source.size(), 0), used_summary(summary.size(), 0);
  for (const auto& [s, i, j] : candidates) {
    if (used_source[i] || used_summary[j]) continue;
    used_source[i] = used_summary[j] = 1;
    map.pairs.push_back({source[i], summary[j], s});
  }
  std::sort(map.pairs.begin(), map.pairs.end(),
            [](const MatchPair& l, const MatchPair& r) { return l.source < r.source; });
  return map;
}

MatchMap match_speech(const Qbaf& source, const Qbaf& summary, const MatcherConfig& config) {
  config.check();
  std::vector<ArgumentId> left, right;
  std::vector<std::string> left_text, right_text;
  for (std::size_t i : source.speeches()) left.push_back(source.at(i).id), left_text.push_back(source.at(i).text);
  for (std::size_t j : summary.speeches())
    right.push_back(summary.at(j).id), right_text.push_back(summary.at(j).text);

  std::vector<std::vector<double>> scores(left.size(), std::vector<double>(right.size(), 0.0));
  if (config.method == MatchMethod::ExternalSimilarity) {
    std::vector<std::pair<std::string, std::string>> requests;
    for (const auto& a : left_text)
      for (const auto& b : right_text) requests.emplace_back(a, b);
    auto flat = config.scorer->score(requests);
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) scores[i][j] = flat[i * right.size() + j];
  } else {
    auto key = config.method == MatchMethod::ExactText ? collapse_whitespace : normalize_text;
    std::vector<std::string> lk, rk;
    for (const auto& t : left_text) lk.push_back(key(t));
    for (const auto& t : right_text) rk.push_back(key(t));
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) scores[i][j] = (!lk[i].empty() && lk[i] == rk[j]) ? 1.0 : 0.0;
  }
  return greedy_match(left, right, scores, config.threshold, to_string(config.method));
}

MatchMap identity_match(const Qbaf& source, const Qbaf& summary) {
  MatchMap map;
  map.method = "identity";
  for (std::size_t i : source.speeches()) {
    const ArgumentId& id = source.at(i).id;
    if (summary.contains(id) && summary.at(id).kind == ArgumentKind::Speech) map.pairs.push_back({id, id, 1.0});
  }
  std::sort(map.pairs.begin(), map.pairs.end(),
            [](const MatchPair& l, const MatchPair& r) { return l.source < r.source; });
  return map;
}

}  // namespace qbafsum
