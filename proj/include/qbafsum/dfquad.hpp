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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbafsum/graph.hpp"

namespace qbafsum {

/// Speech base score used when a graph is built from a transcript.
inline constexpr double kDefaultSpeechBase = 0.2;

struct SemanticsConfig {
  /// When set, replaces the stored base score of every speech argument.
  /// Proposal base scores are fixed at 0.5 and never overridden.
  std::optional<double> speech_base_score;
  double tolerance = 1e-9;
  long max_iterations = 10'000;
  /// Weight of the new iterate in the cyclic solver: s <- (1-d) s + d F(s).
  double damping = 0.5;

  void check() const;
};

/// Strength per argument, indexed like Qbaf::arguments().
struct StrengthMap {
  std::vector<ArgumentId> ids;
  std::vector<double> strengths;
  bool converged = true;
  long iterations = 0;

  double at(const ArgumentId& id) const;
  std::size_t size() const noexcept { return strengths.size(); }
};

/// Probabilistic sum 1 - prod(1 - v); 0 for no inputs.
double aggregate(std::span<const double> values);
double aggregate(std::initializer_list<double> values);

/// DF-QuAD combination of a base score with aggregated attacker (va) and
/// supporter (vs) strengths.
double combine(double base, double va, double vs);

/// DF-QuAD strengths. Acyclic graphs are solved exactly in topological order;
/// cyclic graphs by damped fixed-point iteration from the base scores, with
/// `converged` false when the iteration budget runs out.
StrengthMap evaluate(const Qbaf& qbaf, const SemanticsConfig& config = {});

/// Always uses the damped iteration, even on acyclic graphs.
StrengthMap evaluate_iterative(const Qbaf& qbaf, const SemanticsConfig& config = {});

/// One independent evaluation per speech base score.
std::map<double, StrengthMap> evaluate_with_base_sweep(const Qbaf& qbaf, std::span<const double> speech_bases,
                                                       SemanticsConfig config = {});

/// {"strengths":{id:num},"converged":bool,"iterations":int}
nlohmann::json strengths_to_json(const StrengthMap& map);

}  // namespace qbafsum
