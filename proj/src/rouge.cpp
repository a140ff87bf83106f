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

#include "qbafsum/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "qbafsum/graph.hpp"

namespace qbafsum {

std::vector<std::string> rouge_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::map<std::vector<std::string>, long> ngrams(const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, long> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

}  // namespace

RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n) {
  if (n < 1) throw DomainError("ROUGE-N needs n >= 1");
  RougeScore score;
  score.n = n;
  auto cand = rouge_tokens(candidate);
  auto ref = rouge_tokens(reference);
  if (cand.size() < static_cast<std::size_t>(n) || ref.size() < static_cast<std::size_t>(n)) {
    score.too_short = true;
    return score;
  }
  auto cand_grams = ngrams(cand, n);
  auto ref_grams = ngrams(ref, n);
  long overlap = 0;
  for (const auto& [gram, count] : cand_grams) {
    auto it = ref_grams.find(gram);
    if (it != ref_grams.end()) overlap += std::min(count, it->second);
  }
  const double cand_total = static_cast<double>(cand.size() - n + 1);
  const double ref_total = static_cast<double>(ref.size() - n + 1);
  score.precision = overlap / cand_total;
  score.recall = overlap / ref_total;
  const double sum = score.precision + score.recall;
  score.f1 = sum > 0.0 ? 2.0 * score.precision * score.recall / sum : 0.0;
  return score;
}

}  // namespace qbafsum
