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

#include <algorithm>
#include <chrono>
#include <set>

#include "doctest.h"
#include "qbafsum/extensions.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace qbafsum;

namespace {

Argument speech(const std::string& id) { return {ArgumentId(id), ArgumentKind::Speech, "", 0.2, {}}; }
Edge att(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Attack}; }
Edge sup(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Support}; }

// Free-standing speech graph; validation is irrelevant for these helpers.
Qbaf speeches(std::vector<std::string> ids, std::vector<Edge> edges) {
  std::vector<Argument> args;
  for (auto& id : ids) args.push_back(speech(id));
  return Qbaf({"t", GraphSource::Summary}, std::move(args), std::move(edges));
}

DerivedAf abc(std::vector<std::pair<std::size_t, std::size_t>> attacks) {
  return DerivedAf::from_pairs({ArgumentId("a"), ArgumentId("b"), ArgumentId("c")}, attacks);
}

std::set<std::set<std::string>> as_sets(const std::vector<Extension>& exts) {
  std::set<std::set<std::string>> out;
  for (const auto& e : exts) {
    std::set<std::string> s;
    for (const auto& id : e) s.insert(id.str());
    out.insert(s);
  }
  return out;
}

std::vector<std::size_t> indices(const DerivedAf& af, const Extension& e) {
  std::vector<std::size_t> out;
  for (const auto& id : e) out.push_back(af.index_of(id));
  return out;
}

}  // namespace

TEST_CASE("attack shapes") {
  auto q1 = speeches({"s:1", "s:2", "s:3"}, {sup("s:1", "s:2"), att("s:2", "s:3")});
  CHECK(supported_attack_exists(q1, ArgumentId("s:1"), ArgumentId("s:3")));
  CHECK_FALSE(indirect_attack_exists(q1, ArgumentId("s:1"), ArgumentId("s:3")));

  auto q2 = speeches({"s:1", "s:2", "s:3"}, {att("s:1", "s:2"), sup("s:2", "s:3")});
  CHECK(indirect_attack_exists(q2, ArgumentId("s:1"), ArgumentId("s:3")));
  CHECK_FALSE(supported_attack_exists(q2, ArgumentId("s:1"), ArgumentId("s:3")));

  auto q3 = speeches({"s:1", "s:2", "s:3"}, {sup("s:1", "s:2"), sup("s:2", "s:3")});
  CHECK(indirect_support_exists(q3, ArgumentId("s:1"), ArgumentId("s:3")));
  CHECK_FALSE(supported_attack_exists(q3, ArgumentId("s:1"), ArgumentId("s:3")));
  CHECK_FALSE(indirect_attack_exists(q3, ArgumentId("s:1"), ArgumentId("s:3")));
  // One edge is not long enough.
  CHECK_FALSE(indirect_support_exists(q3, ArgumentId("s:1"), ArgumentId("s:2")));
  CHECK_THROWS_AS(indirect_support_exists(q3, ArgumentId("x"), ArgumentId("s:2")), LookupError);
}

TEST_CASE("compile_derived_af examples") {
  SUBCASE("support only") {
    auto af = compile_derived_af(speeches({"s:1", "s:2", "s:3"}, {sup("s:1", "s:2"), sup("s:2", "s:3")}));
    CHECK(af.attack_count() == 0);
    CHECK(af.size() == 3);
  }
  SUBCASE("supported attack") {
    auto af = compile_derived_af(speeches({"s:1", "s:2", "s:3"}, {sup("s:1", "s:2"), att("s:2", "s:3")}));
    std::vector<std::pair<ArgumentId, ArgumentId>> want{{ArgumentId("s:1"), ArgumentId("s:3")},
                                                         {ArgumentId("s:2"), ArgumentId("s:3")}};
    CHECK(af.attack_pairs() == want);
  }
  SUBCASE("attack chain confers nothing extra") {
    auto af = compile_derived_af(speeches({"s:1", "s:2", "s:3"}, {att("s:1", "s:2"), att("s:2", "s:3")}));
    std::vector<std::pair<ArgumentId, ArgumentId>> want{{ArgumentId("s:1"), ArgumentId("s:2")},
                                                         {ArgumentId("s:2"), ArgumentId("s:3")}};
    CHECK(af.attack_pairs() == want);
  }
}

TEST_CASE("compile_derived_af agrees with path-shape oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    Qbaf q = testing::random_qbaf(rng, {2, 7, 0.3, 0.5, trial % 2 == 1});
    auto af = compile_derived_af(q);
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& [a, b] : af.attack_pairs()) got.emplace(a.str(), b.str());
    CHECK(got == testing::oracle_set_attacks(q));
  }
}

TEST_CASE("preferred_extensions examples") {
  CHECK(as_sets(preferred_extensions(abc({}))) == std::set<std::set<std::string>>{{"a", "b", "c"}});
  CHECK(as_sets(preferred_extensions(abc({{0, 1}, {1, 2}}))) == std::set<std::set<std::string>>{{"a", "c"}});
  CHECK(as_sets(preferred_extensions(abc({{0, 1}, {1, 0}}))) == std::set<std::set<std::string>>{{"a", "c"}, {"b", "c"}});

  auto self = DerivedAf::from_pairs({ArgumentId("a")}, {{0, 0}});
  CHECK(as_sets(preferred_extensions(self)) == std::set<std::set<std::string>>{{}});
  CHECK(as_sets(brute_force_preferred(self)) == std::set<std::set<std::string>>{{}});
  CHECK(as_sets(brute_force_preferred(DerivedAf{})) == std::set<std::set<std::string>>{{}});
  CHECK(as_sets(preferred_extensions(DerivedAf{})) == std::set<std::set<std::string>>{{}});
  CHECK(as_sets(brute_force_preferred(DerivedAf({ArgumentId("a")}))) == std::set<std::set<std::string>>{{"a"}});

  // Odd cycle: nothing is defensible.
  CHECK(as_sets(preferred_extensions(abc({{0, 1}, {1, 2}, {2, 0}}))) == std::set<std::set<std::string>>{{}});
}

TEST_CASE("output order is sorted") {
  auto exts = preferred_extensions(abc({{0, 1}, {1, 0}, {2, 2}}));
  REQUIRE(exts.size() == 2);
  CHECK(exts[0] < exts[1]);
  for (const auto& e : exts) CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("credulous acceptance examples") {
  CHECK(credulously_accepted(abc({}), ArgumentId("a")));
  CHECK_FALSE(credulously_accepted(abc({{0, 1}}), ArgumentId("b")));
  CHECK(credulously_accepted(abc({{0, 1}, {1, 2}}), ArgumentId("c")));
  CHECK_FALSE(credulously_accepted(DerivedAf::from_pairs({ArgumentId("a")}, {{0, 0}}), ArgumentId("a")));
  CHECK_THROWS_AS(credulously_accepted(abc({}), ArgumentId("zz")), LookupError);
}

TEST_CASE("brute force refuses large frameworks") {
  std::vector<ArgumentId> ids;
  for (int i = 0; i < 21; ++i) ids.emplace_back("n" + std::to_string(i));
  CHECK_THROWS_AS(brute_force_preferred(DerivedAf(ids)), DomainError);
}

TEST_CASE("labelling search matches brute force on random frameworks") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + trial % 10;
    double p = 0.1 + 0.05 * (trial % 7);
    auto af = testing::random_af(rng, n, p);
    auto got = preferred_extensions(af);
    REQUIRE(as_sets(got) == as_sets(brute_force_preferred(af)));

    std::set<std::string> accepted;
    for (const auto& e : got) {
      auto members = indices(af, e);
      CHECK(is_admissible(af, members));
      // Maximality: no single outside node keeps the set admissible.
      for (std::size_t x = 0; x < af.size(); ++x) {
        if (std::find(members.begin(), members.end(), x) != members.end()) continue;
        auto bigger = members;
        bigger.push_back(x);
        CHECK_FALSE(is_admissible(af, bigger));
      }
      for (const auto& other : got)
        if (&other != &e) CHECK_FALSE(std::includes(other.begin(), other.end(), e.begin(), e.end()));
      for (const auto& id : e) accepted.insert(id.str());
    }
    for (const auto& id : af.nodes()) CHECK(credulously_accepted(af, id) == (accepted.count(id.str()) == 1));
  }
}

TEST_CASE("labelling search matches brute force on compiled debate graphs") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    Qbaf q = testing::random_qbaf(rng, {1 + trial % 2, 3 + trial % 7, 0.35, 0.5, trial % 2 == 0});
    auto af = compile_derived_af(q);
    CHECK(as_sets(preferred_extensions(af)) == as_sets(brute_force_preferred(af)));
  }
}

TEST_CASE("conflict-free and admissible helpers") {
  auto af = abc({{0, 1}, {1, 2}});
  CHECK(is_conflict_free(af, {0, 2}));
  CHECK_FALSE(is_conflict_free(af, {0, 1}));
  CHECK(is_admissible(af, {0, 2}));
  CHECK_FALSE(is_admissible(af, {2}));
  CHECK(is_admissible(af, {}));
}

TEST_CASE("budget exhaustion throws") {
  std::mt19937 rng(23);
  auto af = testing::random_af(rng, 40, 0.1);
  SearchBudget tiny;
  tiny.max_nodes = 1;
  CHECK_THROWS_AS(preferred_extensions(af, tiny), BudgetExceeded);
  SearchBudget instant;
  instant.wall_clock = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(preferred_extensions(af, instant), BudgetExceeded);
}

TEST_CASE("aspartix export") {
  auto text = to_aspartix(abc({{0, 1}}));
  CHECK(text == "arg(a).\narg(b).\narg(c).\natt(a,b).\n");
}
