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
#include <random>

#include "doctest.h"
#include "qbafsum/properties.hpp"
#include "support/random_graphs.hpp"

using namespace qbafsum;

namespace {

Argument proposal(int p) { return {proposal_id(p), ArgumentKind::Proposal, "", 0.5, {}}; }
Argument speech(const std::string& id, std::string text = "") {
  return {ArgumentId(id), ArgumentKind::Speech, std::move(text), 0.2, {}};
}
Edge att(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Attack}; }
Edge sup(const std::string& s, const std::string& t) { return {ArgumentId(s), ArgumentId(t), Polarity::Support}; }

Qbaf graph(std::vector<Argument> args, std::vector<Edge> edges, GraphSource src = GraphSource::Summary) {
  return Qbaf({"fixture", src}, std::move(args), std::move(edges));
}

// Table 4 strength rows.
const std::vector<double> kSource{0.53, 0.50, 0.50, 0.50, 0.50, 0.47, 0.60};
const std::vector<double> kSonnet{0.54, 0.52, 0.78, 0.78, 0.82, 0.54, 0.90};
const std::vector<double> kHaiku{1.00, 0.90, 0.90, 0.90, 0.90, 0.89, 0.82};

std::size_t count_true(const std::vector<bool>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), true)); }

}  // namespace

TEST_CASE("P1 relevance") {
  CHECK(p1_relevance(graph({proposal(1), speech("s:1"), speech("s:2")}, {sup("s:1", "p:1"), att("s:2", "p:1")})) == 1.0);
  auto third = graph({proposal(1), speech("s:1"), speech("s:2"), speech("s:3")}, {sup("s:1", "p:1"), att("s:2", "s:1")});
  CHECK(*p1_relevance(third) == doctest::Approx(2.0 / 3.0));

  // Six speech arguments, five of them reach the proposal (some indirectly).
  auto six = graph({proposal(1), speech("s:1"), speech("s:2"), speech("s:3"), speech("s:4"), speech("s:5"), speech("s:6")},
                   {sup("s:1", "p:1"), att("s:2", "p:1"), att("s:3", "s:1"), sup("s:4", "s:3"), att("s:5", "s:2")});
  CHECK(format2(*p1_relevance(six)) == "0.83");

  CHECK_FALSE(p1_relevance(graph({proposal(1)}, {})).has_value());
}

TEST_CASE("P2 pro-con ratio") {
  // One pro source and three con sources for p:1.
  auto q = graph({proposal(1), speech("s:1"), speech("s:2"), speech("s:3"), speech("s:4")},
                 {sup("s:1", "p:1"), att("s:2", "p:1"), att("s:3", "p:1"), att("s:4", "p:1")});
  CHECK(*p2_pro_con_ratio(q, ArgumentId("p:1")) == doctest::Approx(0.25));

  auto pro_only = graph({proposal(1), speech("s:1"), speech("s:2")}, {sup("s:1", "p:1"), sup("s:2", "s:1")});
  CHECK(*p2_pro_con_ratio(pro_only, ArgumentId("p:1")) == 1.0);
  auto con_only = graph({proposal(1), speech("s:1")}, {att("s:1", "p:1")});
  CHECK(*p2_pro_con_ratio(con_only, ArgumentId("p:1")) == 0.0);

  auto two = graph({proposal(1), proposal(2), speech("s:1")}, {att("s:1", "p:1")});
  CHECK_FALSE(p2_pro_con_ratio(two, ArgumentId("p:2")).has_value());
  auto mean = p2_mean(two);
  CHECK(mean.defined == 1);
  CHECK(mean.undefined == 1);
  CHECK(*mean.mean == 0.0);
  CHECK_FALSE(mean.per_provision.at(2).has_value());
  CHECK_THROWS_AS(p2_pro_con_ratio(two, ArgumentId("p:9")), LookupError);
}

TEST_CASE("P2 on an exhausted budget") {
  // A complete attack clique over five speeches feeding both proposals.
  std::vector<Argument> args{proposal(1), proposal(2)};
  std::vector<Edge> edges{att("s:1", "p:1"), sup("s:2", "p:2")};
  for (int i = 1; i <= 5; ++i) args.push_back(speech("s:" + std::to_string(i)));
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      if (i != j) edges.push_back(att("s:" + std::to_string(i), "s:" + std::to_string(j)));
  auto q = graph(std::move(args), std::move(edges));

  SearchBudget tiny;
  tiny.max_nodes = 1;
  CHECK_THROWS_AS(p2_pro_con_ratio(q, ArgumentId("p:1"), tiny), BudgetExceeded);
  auto starved = p2_mean(q, tiny);
  CHECK(starved.unavailable == 2);
  CHECK(starved.defined == 0);
  CHECK_FALSE(starved.mean.has_value());

  auto full = p2_mean(q);
  CHECK(full.unavailable == 0);
  CHECK(full.defined == 2);

  EvalContext ctx(q, q, {}, kDefaultEpsilon, tiny);
  auto report = full_report(ctx);
  CHECK(report.p2_summary.unavailable == 2);
  bool mentioned = false;
  for (const auto& u : report.unavailable) mentioned |= u.find("pro/con") != std::string::npos;
  CHECK(mentioned);
  CHECK(report_to_json(report)["p2_mean"]["summary_unavailable"] == 2);
}

TEST_CASE("P2 mean stays within the defined range") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Qbaf q = testing::random_qbaf(rng, {3, 8, 0.3, 0.5, trial % 2 == 0});
    auto m = p2_mean(q);
    double lo = 1.0, hi = 0.0;
    for (const auto& [p, v] : m.per_provision) {
      if (!v) continue;
      CHECK(*v >= 0.0);
      CHECK(*v <= 1.0);
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
    if (m.mean) {
      CHECK(*m.mean >= lo - 1e-12);
      CHECK(*m.mean <= hi + 1e-12);
    }
    CHECK(m.defined + m.undefined == 3);
  }
}

TEST_CASE("P4 balance on Table 4 rows") {
  auto sonnet = balance_theta(kSource, kSonnet);
  CHECK(sonnet.satisfied == 2);
  CHECK(sonnet.total == 7);
  CHECK(sonnet.passes == std::vector<bool>{true, false, false, false, false, false, true});
  CHECK(format2(sonnet.theta) == "0.29");
  auto haiku = balance_theta(kSource, kHaiku);
  CHECK(haiku.satisfied == 2);
  CHECK(balance_theta(kSource, kSource).theta == 1.0);

  CHECK(balance_agrees(0.5, 0.5));
  CHECK_FALSE(balance_agrees(0.5, 0.5000001));
  CHECK_FALSE(balance_agrees(0.4999999, 0.5));
  CHECK(balance_agrees(0.2, 0.4));
}

TEST_CASE("P5 epsilon on Table 4 rows") {
  auto sonnet = epsilon_theta(kSource, kSonnet, 0.1);
  CHECK(sonnet.passes == std::vector<bool>{true, true, false, false, false, true, false});
  CHECK(format2(sonnet.theta) == "0.43");
  CHECK(epsilon_theta(kSource, kHaiku, 0.1).theta == 0.0);
  CHECK(epsilon_theta(kSource, kHaiku, 1.0).theta == 1.0);
  CHECK(within_epsilon(0.3, 0.5, 0.25));
  CHECK_FALSE(within_epsilon(0.3, 0.5, 0.15));
}

TEST_CASE("P5 is monotone in epsilon") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(6), b(6);
    for (auto& v : a) v = unit(rng);
    for (auto& v : b) v = unit(rng);
    double e1 = unit(rng), e2 = unit(rng);
    if (e1 > e2) std::swap(e1, e2);
    CHECK(epsilon_theta(a, b, e1).theta <= epsilon_theta(a, b, e2).theta);
  }
}

TEST_CASE("theta with no summary proposals is vacuous") {
  std::vector<double> none;
  CHECK(balance_theta(none, none).theta == 1.0);
  CHECK_THROWS(balance_theta(kSource, std::vector<double>{0.5}));
}

TEST_CASE("P3 preferability") {
  SUBCASE("nothing accepted anywhere gives 1") {
    auto src = graph({proposal(1), proposal(2), speech("s:1"), speech("s:2")},
                     {att("s:1", "p:1"), att("s:2", "p:2")}, GraphSource::Original);
    auto sum = graph({proposal(1), proposal(2), speech("s:1")}, {att("s:1", "p:1"), att("s:1", "p:2")});
    EvalContext ctx(src, sum);
    auto t = p3_preferability_theta(ctx);
    REQUIRE(t.has_value());
    CHECK(t->theta == 1.0);
    CHECK(t->total == 2);
  }
  SUBCASE("agreement on one of two") {
    auto src = graph({proposal(1), proposal(2), speech("s:1")}, {att("s:1", "p:2")}, GraphSource::Original);
    auto sum = graph({proposal(1), proposal(2), speech("s:1")}, {att("s:1", "p:1"), att("s:1", "p:2")});
    EvalContext ctx(src, sum);
    CHECK(p3_preferability_theta(ctx)->theta == 0.5);
  }
  SUBCASE("orphan summary proposals fail") {
    auto src = graph({proposal(1)}, {}, GraphSource::Original);
    auto sum = graph({proposal(1), proposal(2)}, {});
    EvalContext ctx(src, sum);
    CHECK(p3_preferability_theta(ctx)->theta == 0.5);
    CHECK(p4_balance_theta(ctx)->theta == 0.5);
    CHECK(p5_epsilon_theta(ctx)->theta == 0.5);
  }
  SUBCASE("budget exhaustion makes P3 unavailable") {
    auto src = graph({proposal(1), speech("s:1"), speech("s:2")}, {att("s:1", "s:2"), att("s:2", "s:1"), att("s:2", "p:1")});
    SearchBudget none;
    none.wall_clock = std::chrono::milliseconds(0);
    EvalContext ctx(src, src, {}, kDefaultEpsilon, none);
    CHECK_FALSE(p3_preferability_theta(ctx).has_value());
    auto report = full_report(ctx);
    CHECK_FALSE(report.p3.has_value());
    CHECK_FALSE(report.unavailable.empty());
  }
}

TEST_CASE("P4 and P5 over graphs") {
  // Source p:1 = 0.6 (one supporter); summary p:1 = 0.5 (no edges).
  auto src = graph({proposal(1), speech("s:1")}, {sup("s:1", "p:1")}, GraphSource::Original);
  auto sum = graph({proposal(1), speech("s:1")}, {});
  EvalContext ctx(src, sum);
  CHECK(p4_balance_theta(ctx)->theta == 0.0);
  CHECK(p5_epsilon_theta(ctx)->theta == 1.0);
  EvalContext tight(src, sum, {}, 0.05);
  CHECK(p5_epsilon_theta(tight)->theta == 0.0);
}

TEST_CASE("pairwise properties are reflexive") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Qbaf q = testing::random_qbaf(rng, {1 + trial % 3, 2 + trial % 9, 0.3, 0.5, trial % 2 == 0});
    EvalContext ctx(q, q);
    auto report = full_report(ctx);
    REQUIRE(report.p3.has_value());
    REQUIRE(report.p4.has_value());
    REQUIRE(report.p5.has_value());
    CHECK(report.p3->theta == 1.0);
    CHECK(report.p4->theta == 1.0);
    CHECK(report.p5->theta == 1.0);
    CHECK(count_true(report.p4->passes) == report.p4->satisfied);
    CHECK(report.p1_source == report.p1_summary);
    CHECK(report.p2_source.mean == report.p2_summary.mean);
  }
}

TEST_CASE("supplementary properties") {
  auto src = graph({proposal(1), speech("s:1", "a"), speech("s:2", "b"), speech("s:3", "c")},
                   {sup("s:1", "p:1"), att("s:2", "p:1"), sup("s:3", "s:2")}, GraphSource::Original);
  auto value = [](const std::vector<PropertyReport>& reports, const std::string& id) {
    for (const auto& r : reports)
      if (r.id == id) return r.value;
    FAIL("missing " << id);
    return std::optional<double>{};
  };

  SUBCASE("identity") {
    EvalContext ctx(src, src);
    auto reports = supplementary_properties(ctx, identity_match(src, src));
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) CHECK(r.value == 1.0);
  }
  SUBCASE("dropping a weak leaf") {
    auto sum = graph({proposal(1), speech("s:1", "a"), speech("s:2", "b")}, {sup("s:1", "p:1"), att("s:2", "p:1")});
    EvalContext ctx(src, sum);
    auto reports = supplementary_properties(ctx, identity_match(src, sum));
    CHECK(value(reports, "A1") == 1.0);
    CHECK(value(reports, "A2") == 0.0);
    CHECK(value(reports, "A3") == 1.0);
    CHECK(value(reports, "A4") == 1.0);
    CHECK(value(reports, "A5") == 1.0);
  }
  SUBCASE("flipping a supporter") {
    auto sum = graph({proposal(1), speech("s:1", "a"), speech("s:2", "b"), speech("s:3", "c")},
                     {att("s:1", "p:1"), att("s:2", "p:1"), sup("s:3", "s:2")});
    EvalContext ctx(src, sum);
    auto reports = supplementary_properties(ctx, identity_match(src, sum));
    CHECK(value(reports, "A5") == 0.0);
    CHECK(reports[4].details["violations"].size() == 1);
  }
  SUBCASE("empty summary") {
    auto sum = graph({proposal(1)}, {});
    EvalContext ctx(src, sum);
    ReportOptions options;
    options.match = identity_match(src, sum);
    auto report = full_report(ctx, options);
    CHECK(value(report.supplementary, "A1") == 0.0);
    CHECK(report.p3.has_value());
    CHECK(report.p4.has_value());
    CHECK(report.p5.has_value());
  }
  SUBCASE("strong or influential arguments must be kept") {
    // s:2 has two incoming edges, so dropping it breaks A4 at n = 1.
    auto rich = graph({proposal(1), speech("s:1"), speech("s:2"), speech("s:3"), speech("s:4")},
                      {sup("s:2", "p:1"), sup("s:3", "s:2"), sup("s:4", "s:2"), sup("s:1", "p:1")}, GraphSource::Original);
    auto sum = graph({proposal(1), speech("s:1")}, {sup("s:1", "p:1")});
    EvalContext ctx(rich, sum);
    auto reports = supplementary_properties(ctx, identity_match(rich, sum));
    CHECK(value(reports, "A4") == 0.0);
    SupplementaryOptions low;
    low.strength_c = 0.3;  // s:2 reaches 0.2 + 0.8 * 0.36 = 0.488
    CHECK(value(supplementary_properties(ctx, identity_match(rich, sum), low), "A3") == 0.0);
  }
}

TEST_CASE("report JSON and rendering") {
  auto src = graph({proposal(1), speech("s:1", "The levy is fair.")}, {sup("s:1", "p:1")}, GraphSource::Original);
  auto sum = graph({proposal(1), speech("s:1", "The levy is fair.")}, {sup("s:1", "p:1")});
  EvalContext ctx(src, sum);
  ReportOptions options;
  options.sweep = {0.15, 0.25};
  auto bundle = full_report(ctx, options);
  auto doc = report_to_json(bundle);
  CHECK(doc["p3"] == 1.0);
  CHECK(doc["p5"]["epsilon"] == 0.1);
  CHECK(doc["display"]["p4"] == "1.00");
  CHECK(doc["sweep"].size() == 2);
  CHECK(doc["per_proposal"].size() == 1);
  CHECK(doc.contains("r2"));
  CHECK(render_markdown(bundle) == render_markdown(doc));
  CHECK(render_text(bundle) == render_text(doc));
  CHECK(render_markdown(doc).find("| P4") != std::string::npos);
}
