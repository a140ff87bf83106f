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

#include <string>
#include <vector>

namespace qbafsum {

struct RougeScore {
  int n = 1;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when either side had fewer than n tokens; all scores are then 0.
  bool too_short = false;
};

/// Lowercased alphanumeric runs.
std::vector<std::string> rouge_tokens(const std::string& text);

/// ROUGE-N with clipped n-gram counts. No stemming, no stopword removal.
RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n);

}  // namespace qbafsum
