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
#include "qbafsum/alignment.hpp"
#include "qbafsum/dfquad.hpp"
#include "qbafsum/extensions.hpp"
#include "qbafsum/graph.hpp"
#include "qbafsum/rouge.hpp"

namespace qbafsum {

inline constexpr double kDefaultEpsilon = 0.1;

// --- single-graph properties ------------------------------------------------

/// Fraction of speech arguments with a directed path into some proposal.
/// nullopt when the graph has no speech arguments.
std::optional<double> p1_relevance(const Qbaf& qbaf);

/// |pro| / |pro u con| restricted to speech arguments; nullopt when both
/// sets are empty. Throws BudgetExceeded on a cyclic graph too hard to settle.
std::optional<double> p2_pro_con_ratio(const Qbaf& qbaf, const ArgumentId& proposal,
                                       const SearchBudget& budget = {});

struct ProConMean {
  std::optional<double> mean;  // over defined provisions only
  std::size_t defined = 0;
  std::size_t undefined = 0;
  std::size_t unavailable = 0;  // search budget ran out
  std::map<int, std::optional<double>> per_provision;
};

/// One budget shared by every proposal of the graph.
ProConMean p2_mean(const Qbaf& qbaf, const SearchBudget& budget = {});

// --- pairwise properties ----------------------------------------------------

/// Degree result: theta = satisfied / total over the summary's proposals.
struct ThetaResult {
  double theta = 1.0;
  std::size_t satisfied = 0;
  std::size_t total = 0;
  std::vector<bool> passes;  // one flag per compared proposal
};

/// Proposal-level balance agreement on aligned strength rows.
bool balance_agrees(double source, double summary);
bool within_epsilon(double source, double summary, double epsilon);

ThetaResult acceptance_theta(std::span<const bool> source, std::span<const bool> summary);
ThetaResult balance_theta(std::span<const double> source, std::span<const double> summary);
ThetaResult epsilon_theta(std::span<const double> source, std::span<const double> summary, double epsilon);

/// Source graph, summary graph and the settings they are compared under.
struct EvalContext {
  const Qbaf& source;
  const Qbaf& summary;
  ProposalAlignment alignment;
  SemanticsConfig semantics;
  double epsilon = kDefaultEpsilon;
  SearchBudget budget;

  EvalContext(const Qbaf& src, const Qbaf& sum, SemanticsConfig sem = {}, double eps = kDefaultEpsilon,
              SearchBudget bud = {});
};

/// Per summary proposal, in provision order. Summary proposals with no
/// source counterpart never satisfy a pairwise property.
struct ProposalRow {
  int provision = 0;
  ArgumentId summary_id;
  std::optional<ArgumentId> source_id;
  double summary_strength = 0.0;
  std::optional<double> source_strength;
  std::optional<bool> summary_accepted;
  std::optional<bool> source_accepted;
  std::optional<double> summary_pro_con;
  std::optional<double> source_pro_con;
  std::optional<bool> p3_pass;
  bool p4_pass = false;
  bool p5_pass = false;
};

/// nullopt when the extension search exceeds the budget on either graph.
std::optional<ThetaResult> p3_preferability_theta(const EvalContext& ctx);
/// nullopt when either graph's strengths did not converge.
std::optional<ThetaResult> p4_balance_theta(const EvalContext& ctx);
std::optional<ThetaResult> p5_epsilon_theta(const EvalContext& ctx);

// --- supplementary speech-argument properties ------------------------------

struct PropertyReport {
  std::string id;
  std::string name;
  std::string scope;  // "graph" or "per-proposal"
  std::optional<double> value;
  std::string status = "ok";  // ok | undefined | unavailable
  nlohmann::json details = nlohmann::json::object();
};

struct SupplementaryOptions {
  double strength_c = 0.5;
  int influencer_n = 1;
};

/// relevant, complete, strength-c-inclusive, n-influencer-inclusive and
/// pro-con-consistent, as 1/0 values with failing arguments in details.
std::vector<PropertyReport> supplementary_properties(const EvalContext& ctx, const MatchMap& match,
                                                     const SupplementaryOptions& options = {});

// --- bundled report ---------------------------------------------------------

struct ReportOptions {
  std::optional<MatchMap> match;  // enables the supplementary block
  SupplementaryOptions supplementary;
  std::vector<double> sweep;  // speech base scores; empty disables the block
  bool rouge = true;
};

struct SweepRow {
  double speech_base = 0.0;
  std::optional<ThetaResult> p4;
  std::optional<ThetaResult> p5;
};

struct ReportBundle {
  std::string debate_id;
  double epsilon = kDefaultEpsilon;
  std::optional<double> speech_base;
  std::optional<double> p1_source, p1_summary;
  ProConMean p2_source, p2_summary;
  std::optional<ThetaResult> p3, p4, p5;
  std::vector<std::string> unavailable;  // reasons, one per missing value
  std::vector<ProposalRow> per_proposal;
  std::vector<int> source_only_provisions;
  std::optional<RougeScore> rouge2;
  std::optional<std::string> match_method;
  std::vector<PropertyReport> supplementary;
  std::vector<SweepRow> sweep;
};

ReportBundle full_report(const EvalContext& ctx, const ReportOptions& options = {});

/// Table-shaped JSON with full-precision numbers and a parallel "display"
/// block rounded to two decimals.
nlohmann::json report_to_json(const ReportBundle& report);
std::string render_markdown(const ReportBundle& report);
std::string render_text(const ReportBundle& report);
/// Re-renders a JSON report written by report_to_json.
std::string render_markdown(const nlohmann::json& report);
std::string render_text(const nlohmann::json& report);

/// Fixed two-decimal rendering.
std::string format2(double value);

/// Speech texts joined in temporal (then storage) order, for ROUGE.
std::string speech_text(const Qbaf& qbaf);

}  // namespace qbafsum
