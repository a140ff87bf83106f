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

#include <cmath>

#include "doctest.h"
#include "qbafsum/dfquad.hpp"
#include "support/random_graphs.hpp"

using namespace qbafsum;

namespace {

Argument proposal(int p) { return {proposal_id(p), ArgumentKind::Proposal, "", 0.5, {}}; }
Argument speech(const std::string& id, double base = 0.2) { return {ArgumentId(id), ArgumentKind::Speech, "", base, {}}; }
Edge att(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Attack}; }
Edge sup(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Support}; }

}  // namespace

TEST_CASE("aggregate") {
  CHECK(aggregate({}) == 0.0);
  CHECK(aggregate({0.2, 0.2}) == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(aggregate({1.0, 0.3}) == 1.0);
  CHECK(aggregate({0.3, 0.6}) == doctest::Approx(aggregate({0.6, 0.3})));
  CHECK_THROWS_AS(aggregate({1.2}), DomainError);
  CHECK_THROWS_AS(aggregate({-0.1}), DomainError);
}

TEST_CASE("combine") {
  CHECK(combine(0.5, 0.0, 0.0) == 0.5);
  CHECK(std::abs(combine(0.5, 0.0, 0.2) - 0.6) < 1e-12);
  CHECK(std::abs(combine(0.5, 0.36, 0.2) - 0.42) < 1e-12);
  CHECK(combine(0.3, 0.7, 0.7) == 0.3);
  CHECK_THROWS_AS(combine(0.5, 1.5, 0.0), DomainError);
}

TEST_CASE("aggregate and combine stay in range and are monotone") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    double a = unit(rng), b = unit(rng), c = unit(rng), bump = unit(rng);
    double agg = aggregate({a, b});
    CHECK(agg >= 0.0);
    CHECK(agg <= 1.0);
    CHECK(aggregate({a, std::min(1.0, b + bump)}) >= agg - 1e-15);
    double v = combine(a, b, c);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(combine(a, b, b) == doctest::Approx(a));
    // Continuity across the va == vs switch.
    CHECK(combine(a, b + 1e-9 > 1.0 ? b : b + 1e-9, b) == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("evaluate examples") {
  SUBCASE("leaf") {
    Qbaf q({}, {proposal(1), speech("s:1")}, {});
    auto s = evaluate(q);
    CHECK(s.at(ArgumentId("s:1")) == 0.2);
    CHECK(s.at(ArgumentId("p:1")) == 0.5);
    CHECK(s.converged);
  }
  SUBCASE("two attackers and one supporter") {
    Qbaf q({}, {proposal(1), speech("s:1"), speech("s:2"), speech("s:3")},
           {att("s:1", "p:1"), att("s:2", "p:1"), sup("s:3", "p:1")});
    CHECK(std::abs(evaluate(q).at(ArgumentId("p:1")) - 0.42) < 1e-12);
  }
  SUBCASE("single supporter gives 0.6") {
    Qbaf q({}, {proposal(1), speech("s:1")}, {sup("s:1", "p:1")});
    CHECK(std::abs(evaluate(q).at(ArgumentId("p:1")) - 0.6) < 1e-12);
  }
  SUBCASE("mutual attack converges symmetrically") {
    Qbaf q({"d", GraphSource::Summary}, {proposal(1), speech("s:1"), speech("s:2")},
           {att("s:1", "s:2"), att("s:2", "s:1")});
    auto s = evaluate(q);
    CHECK(s.converged);
    CHECK(s.at(ArgumentId("s:1")) == doctest::Approx(s.at(ArgumentId("s:2"))).epsilon(1e-9));
    // Fixed point of x = 0.2 (1 - x).
    CHECK(s.at(ArgumentId("s:1")) == doctest::Approx(0.2 / 1.2).epsilon(1e-8));
  }
  SUBCASE("speech base override") {
    Qbaf q({}, {proposal(1), speech("s:1", 0.9)}, {sup("s:1", "p:1")});
    SemanticsConfig cfg;
    cfg.speech_base_score = 0.25;
    CHECK(evaluate(q, cfg).at(ArgumentId("s:1")) == 0.25);
    CHECK(evaluate(q).at(ArgumentId("s:1")) == 0.9);
  }
}

TEST_CASE("non-convergence is reported, not thrown") {
  Qbaf q({"d", GraphSource::Summary}, {proposal(1), speech("s:1"), speech("s:2")},
         {att("s:1", "s:2"), att("s:2", "s:1")});
  SemanticsConfig cfg;
  cfg.max_iterations = 2;
  auto s = evaluate(q, cfg);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 2);
}

TEST_CASE("config checks") {
  SemanticsConfig cfg;
  cfg.damping = 0.0;
  CHECK_THROWS_AS(cfg.check(), DomainError);
  cfg.damping = 1.0;
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.check(), DomainError);
}

TEST_CASE("base-score sweep") {
  Qbaf q({}, {proposal(1), speech("s:1")}, {sup("s:1", "p:1")});
  std::vector<double> bases{0.15, 0.2, 0.25};
  auto sweep = evaluate_with_base_sweep(q, bases);
  REQUIRE(sweep.size() == 3);
  for (double b : bases) CHECK(sweep.at(b).at(ArgumentId("s:1")) == b);
  CHECK(evaluate_with_base_sweep(q, std::vector<double>{}).empty());

  SemanticsConfig cfg;
  cfg.speech_base_score = 0.2;
  auto single = evaluate(q, cfg);
  CHECK(evaluate_with_base_sweep(q, std::vector<double>{0.2}).at(0.2).strengths == single.strengths);
}

TEST_CASE("invariants on random acyclic graphs") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    testing::GraphShape shape{2, 8, 0.3, 0.5, false, 0.2, true};
    Qbaf q = testing::random_qbaf(rng, shape);
    auto s = evaluate(q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(s.strengths[i] >= 0.0);
      CHECK(s.strengths[i] <= 1.0);
      if (q.incoming(i).empty()) CHECK(s.strengths[i] == q.at(i).base_score);
    }
    auto iterative = evaluate_iterative(q);
    REQUIRE(iterative.converged);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(std::abs(iterative.strengths[i] - s.strengths[i]) < 1e-6);

    Qbaf perm = testing::shuffled(q, rng);
    auto sp = evaluate(perm);
    for (const auto& a : q.arguments()) CHECK(std::abs(sp.at(a.id) - s.at(a.id)) < 1e-9);
  }
}

TEST_CASE("range holds on random cyclic graphs") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Qbaf q = testing::random_qbaf(rng, {2, 8, 0.3, 0.5, true, 0.2, true});
    auto s = evaluate(q);
    for (double v : s.strengths) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("strength JSON export") {
  Qbaf q({}, {proposal(1), speech("s:1")}, {sup("s:1", "p:1")});
  auto doc = strengths_to_json(evaluate(q));
  CHECK(doc["converged"] == true);
  CHECK(doc["strengths"]["s:1"] == 0.2);
  CHECK(doc.contains("iterations"));
}
