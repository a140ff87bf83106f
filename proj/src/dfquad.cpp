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

#include "qbafsum/dfquad.hpp"

#include <algorithm>
#include <cmath>

namespace qbafsum {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

std::vector<double> base_scores(const Qbaf& qbaf, const SemanticsConfig& config) {
  std::vector<double> tau(qbaf.size());
  for (std::size_t i = 0; i < qbaf.size(); ++i) {
    const Argument& a = qbaf.at(i);
    tau[i] = (a.kind == ArgumentKind::Speech && config.speech_base_score) ? *config.speech_base_score : a.base_score;
    check_unit(tau[i], "base score");
  }
  return tau;
}

// F(sigma)(i): DF-QuAD update of argument i given current strengths.
double update(const Qbaf& qbaf, std::size_t i, double tau, const std::vector<double>& sigma) {
  double keep_attack = 1.0, keep_support = 1.0;
  for (const auto& link : qbaf.incoming(i)) {
    (link.polarity == Polarity::Attack ? keep_attack : keep_support) *= 1.0 - sigma[link.node];
  }
  return combine(tau, 1.0 - keep_attack, 1.0 - keep_support);
}

StrengthMap make_map(const Qbaf& qbaf, std::vector<double> strengths, bool converged, long iterations) {
  StrengthMap map;
  map.ids.reserve(qbaf.size());
  for (const auto& a : qbaf.arguments()) map.ids.push_back(a.id);
  map.strengths = std::move(strengths);
  map.converged = converged;
  map.iterations = iterations;
  return map;
}

}  // namespace

void SemanticsConfig::check() const {
  if (speech_base_score) check_unit(*speech_base_score, "speech base score");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (max_iterations <= 0) throw DomainError("max_iterations must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
}

double StrengthMap::at(const ArgumentId& id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw LookupError("no strength for '" + id.str() + "'");
  return strengths[static_cast<std::size_t>(it - ids.begin())];
}

double aggregate(std::span<const double> values) {
  double keep = 1.0;
  for (double v : values) {
    check_unit(v, "aggregated value");
    keep *= 1.0 - v;
  }
  return 1.0 - keep;
}

double aggregate(std::initializer_list<double> values) {
  return aggregate(std::span<const double>(values.begin(), values.size()));
}

double combine(double base, double va, double vs) {
  check_unit(base, "base score");
  check_unit(va, "attack aggregate");
  check_unit(vs, "support aggregate");
  if (va >= vs) return base * (1.0 - (va - vs));
  return base + (1.0 - base) * (vs - va);
}

StrengthMap evaluate_iterative(const Qbaf& qbaf, const SemanticsConfig& config) {
  config.check();
  const std::vector<double> tau = base_scores(qbaf, config);
  std::vector<double> sigma = tau, next(qbaf.size());
  for (long it = 1; it <= config.max_iterations; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < qbaf.size(); ++i) {
      double target = update(qbaf, i, tau[i], sigma);
      next[i] = (1.0 - config.damping) * sigma[i] + config.damping * target;
      change = std::max(change, std::abs(next[i] - sigma[i]));
    }
    sigma.swap(next);
    if (change < config.tolerance) return make_map(qbaf, std::move(sigma), true, it);
  }
  return make_map(qbaf, std::move(sigma), false, config.max_iterations);
}

StrengthMap evaluate(const Qbaf& qbaf, const SemanticsConfig& config) {
  config.check();
  auto order = qbaf.topological_order();
  if (!order) return evaluate_iterative(qbaf, config);

  const std::vector<double> tau = base_scores(qbaf, config);
  std::vector<double> sigma(qbaf.size(), 0.0);
  for (std::size_t i : *order) sigma[i] = update(qbaf, i, tau[i], sigma);
  return make_map(qbaf, std::move(sigma), true, 1);
}

std::map<double, StrengthMap> evaluate_with_base_sweep(const Qbaf& qbaf, std::span<const double> speech_bases,
                                                       SemanticsConfig config) {
  std::map<double, StrengthMap> out;
  for (double base : speech_bases) {
    config.speech_base_score = base;
    out.emplace(base, evaluate(qbaf, config));
  }
  return out;
}

nlohmann::json strengths_to_json(const StrengthMap& map) {
  nlohmann::json strengths = nlohmann::json::object();
  for (std::size_t i = 0; i < map.size(); ++i) strengths[map.ids[i].str()] = map.strengths[i];
  return {{"strengths", strengths}, {"converged", map.converged}, {"iterations", map.iterations}};
}

}  // namespace qbafsum
