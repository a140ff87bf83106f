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

#include "qbafsum/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

namespace qbafsum {

using nlohmann::json;

std::optional<double> p1_relevance(const Qbaf& qbaf) {
  auto speeches = qbaf.speeches();
  if (speeches.empty()) return std::nullopt;
  std::vector<char> reaches(qbaf.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t p : qbaf.proposals()) queue.push_back(p);
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (const auto& link : qbaf.incoming(v)) {
      if (reaches[link.node]) continue;
      reaches[link.node] = 1;
      queue.push_back(link.node);
    }
  }
  std::size_t connected = 0;
  for (std::size_t s : speeches) connected += reaches[s] != 0;
  return static_cast<double>(connected) / static_cast<double>(speeches.size());
}

namespace {

std::optional<double> ratio_of(const Qbaf& qbaf, const ProCon& pc) {
  std::set<ArgumentId> pro, all;
  for (const auto& id : pc.pro)
    if (qbaf.at(id).kind == ArgumentKind::Speech) pro.insert(id), all.insert(id);
  for (const auto& id : pc.con)
    if (qbaf.at(id).kind == ArgumentKind::Speech) all.insert(id);
  if (all.empty()) return std::nullopt;
  return static_cast<double>(pro.size()) / static_cast<double>(all.size());
}

}  // namespace

std::optional<double> p2_pro_con_ratio(const Qbaf& qbaf, const ArgumentId& proposal, const SearchBudget& budget) {
  if (qbaf.at(proposal).kind != ArgumentKind::Proposal)
    throw LookupError("'" + proposal.str() + "' is not a proposal argument");
  return ratio_of(qbaf, pro_con(qbaf, proposal, budget));
}

namespace {

// What is left of `budget` before an absolute deadline.
SearchBudget until(const SearchBudget& budget, std::chrono::steady_clock::time_point deadline) {
  SearchBudget remaining = budget;
  remaining.wall_clock = std::max(std::chrono::milliseconds(0), std::chrono::duration_cast<std::chrono::milliseconds>(
                                                                    deadline - std::chrono::steady_clock::now()));
  return remaining;
}

}  // namespace

ProConMean p2_mean(const Qbaf& qbaf, const SearchBudget& budget) {
  const auto deadline = std::chrono::steady_clock::now() + budget.wall_clock;
  ProConMean out;
  double sum = 0.0;
  for (std::size_t p : qbaf.proposals()) {
    const ArgumentId& id = qbaf.at(p).id;
    auto& slot = out.per_provision[provision_index(id).value_or(0)];
    try {
      slot = p2_pro_con_ratio(qbaf, id, until(budget, deadline));
    } catch (const BudgetExceeded&) {
      ++out.unavailable;
      continue;
    }
    if (slot) {
      sum += *slot;
      ++out.defined;
    } else {
      ++out.undefined;
    }
  }
  if (out.defined > 0) out.mean = sum / static_cast<double>(out.defined);
  return out;
}

// ---------------------------------------------------------------------------

bool balance_agrees(double source, double summary) {
  // Unrounded comparisons: an exact 0.5 only agrees with an exact 0.5.
  return ((summary > 0.5) == (source > 0.5)) && ((summary < 0.5) == (source < 0.5));
}

bool within_epsilon(double source, double summary, double epsilon) {
  return std::abs(summary - source) <= epsilon;
}

namespace {

ThetaResult from_passes(std::vector<bool> passes) {
  ThetaResult r;
  r.total = passes.size();
  r.satisfied = static_cast<std::size_t>(std::count(passes.begin(), passes.end(), true));
  r.theta = r.total == 0 ? 1.0 : static_cast<double>(r.satisfied) / static_cast<double>(r.total);
  r.passes = std::move(passes);
  return r;
}

template <typename T, typename Pred>
ThetaResult zip_theta(std::span<const T> source, std::span<const T> summary, Pred pred) {
  if (source.size() != summary.size()) throw DomainError("aligned rows must have equal length");
  std::vector<bool> passes;
  for (std::size_t i = 0; i < source.size(); ++i) passes.push_back(pred(source[i], summary[i]));
  return from_passes(std::move(passes));
}

}  // namespace

ThetaResult acceptance_theta(std::span<const bool> source, std::span<const bool> summary) {
  return zip_theta(source, summary, [](bool a, bool b) { return a == b; });
}

ThetaResult balance_theta(std::span<const double> source, std::span<const double> summary) {
  return zip_theta(source, summary, balance_agrees);
}

ThetaResult epsilon_theta(std::span<const double> source, std::span<const double> summary, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
  return zip_theta(source, summary, [&](double a, double b) { return within_epsilon(a, b, epsilon); });
}

EvalContext::EvalContext(const Qbaf& src, const Qbaf& sum, SemanticsConfig sem, double eps, SearchBudget bud)
    : source(src), summary(sum), alignment(align_proposals(src, sum)), semantics(sem), epsilon(eps), budget(bud) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
  semantics.check();
}

namespace {

// Summary proposals in provision order with their source counterpart.
struct AlignedProposal {
  int provision;
  ArgumentId summary;
  std::optional<ArgumentId> source;
};

std::vector<AlignedProposal> summary_proposals(const EvalContext& ctx) {
  std::vector<AlignedProposal> rows;
  for (std::size_t i : ctx.summary.proposals()) {
    const ArgumentId& id = ctx.summary.at(i).id;
    int p = provision_index(id).value_or(0);
    std::optional<ArgumentId> src;
    if (auto it = ctx.alignment.pairs.find(p); it != ctx.alignment.pairs.end()) src = it->second.first;
    rows.push_back({p, id, src});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return l.provision < r.provision; });
  return rows;
}

// Credulous acceptance of every proposal in one graph under one shared
// wall-clock budget; nullopt on exhaustion.
std::optional<std::map<ArgumentId, bool>> proposal_acceptance(const Qbaf& qbaf, const SearchBudget& budget) {
  const auto deadline = std::chrono::steady_clock::now() + budget.wall_clock;
  DerivedAf af = compile_derived_af(qbaf);
  std::map<ArgumentId, bool> out;
  try {
    for (std::size_t p : qbaf.proposals()) {
      SearchBudget remaining = until(budget, deadline);
      if (remaining.wall_clock.count() <= 0) return std::nullopt;
      out[qbaf.at(p).id] = credulously_accepted(af, qbaf.at(p).id, remaining);
    }
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  return out;
}

std::optional<ThetaResult> strength_theta(const EvalContext& ctx, const StrengthMap& src, const StrengthMap& sum,
                                          bool balance) {
  if (!src.converged || !sum.converged) return std::nullopt;
  std::vector<bool> passes;
  for (const auto& row : summary_proposals(ctx)) {
    if (!row.source) {
      passes.push_back(false);
      continue;
    }
    double a = src.at(*row.source), b = sum.at(row.summary);
    passes.push_back(balance ? balance_agrees(a, b) : within_epsilon(a, b, ctx.epsilon));
  }
  return from_passes(std::move(passes));
}

}  // namespace

std::optional<ThetaResult> p3_preferability_theta(const EvalContext& ctx) {
  auto src = proposal_acceptance(ctx.source, ctx.budget);
  if (!src) return std::nullopt;
  auto sum = proposal_acceptance(ctx.summary, ctx.budget);
  if (!sum) return std::nullopt;
  std::vector<bool> passes;
  for (const auto& row : summary_proposals(ctx))
    passes.push_back(row.source && src->at(*row.source) == sum->at(row.summary));
  return from_passes(std::move(passes));
}

std::optional<ThetaResult> p4_balance_theta(const EvalContext& ctx) {
  return strength_theta(ctx, evaluate(ctx.source, ctx.semantics), evaluate(ctx.summary, ctx.semantics), true);
}

std::optional<ThetaResult> p5_epsilon_theta(const EvalContext& ctx) {
  return strength_theta(ctx, evaluate(ctx.source, ctx.semantics), evaluate(ctx.summary, ctx.semantics), false);
}

// ---------------------------------------------------------------------------

std::vector<PropertyReport> supplementary_properties(const EvalContext& ctx, const MatchMap& match,
                                                     const SupplementaryOptions& options) {
  const Qbaf& q = ctx.source;
  const Qbaf& qs = ctx.summary;
  auto ids = [](const Qbaf& g) {
    std::vector<ArgumentId> out;
    for (std::size_t i : g.speeches()) out.push_back(g.at(i).id);
    return out;
  };
  auto to_json_ids = [](const std::vector<ArgumentId>& v) {
    json a = json::array();
    for (const auto& id : v) a.push_back(id.str());
    return a;
  };
  auto flag = [](bool b) { return std::optional<double>(b ? 1.0 : 0.0); };

  const auto source_speech = ids(q);
  const auto summary_speech = ids(qs);
  std::vector<ArgumentId> unmatched_summary, unmatched_source;
  for (const auto& id : summary_speech)
    if (!match.source_for(id)) unmatched_summary.push_back(id);
  for (const auto& id : source_speech)
    if (!match.summary_for(id)) unmatched_source.push_back(id);

  auto named = [](std::string id, std::string name, std::string scope) {
    PropertyReport r;
    r.id = std::move(id);
    r.name = std::move(name);
    r.scope = std::move(scope);
    return r;
  };
  std::vector<PropertyReport> out;

  PropertyReport relevant = named("A1", "relevant", "graph");
  relevant.value = flag(!summary_speech.empty() && unmatched_summary.empty());
  relevant.details = {{"summary_speech", summary_speech.size()}, {"unmatched_summary", to_json_ids(unmatched_summary)}};
  out.push_back(relevant);

  PropertyReport complete = named("A2", "complete", "graph");
  complete.value = flag(unmatched_summary.empty() && unmatched_source.empty());
  complete.details = {{"unmatched_source", to_json_ids(unmatched_source)},
                      {"unmatched_summary", to_json_ids(unmatched_summary)}};
  out.push_back(complete);

  const StrengthMap strengths = evaluate(q, ctx.semantics);
  std::vector<ArgumentId> strong_missing, influencer_missing;
  for (std::size_t i : q.speeches()) {
    const ArgumentId& id = q.at(i).id;
    bool matched = match.summary_for(id).has_value();
    if (!matched && strengths.strengths[i] > options.strength_c) strong_missing.push_back(id);
    if (!matched && q.incoming(i).size() > static_cast<std::size_t>(std::max(0, options.influencer_n)))
      influencer_missing.push_back(id);
  }
  PropertyReport strong = named("A3", "strength-c-inclusive", "graph");
  strong.value = flag(strong_missing.empty());
  strong.status = strengths.converged ? "ok" : "unavailable";
  if (!strengths.converged) strong.value.reset();
  strong.details = {{"c", options.strength_c}, {"missing", to_json_ids(strong_missing)}};
  out.push_back(strong);

  PropertyReport influencer = named("A4", "n-influencer-inclusive", "graph");
  influencer.value = flag(influencer_missing.empty());
  influencer.details = {{"n", options.influencer_n}, {"missing", to_json_ids(influencer_missing)}};
  out.push_back(influencer);

  PropertyReport consistent = named("A5", "pro-con-consistent", "per-proposal");
  json violations = json::array();
  const auto deadline = std::chrono::steady_clock::now() + ctx.budget.wall_clock;
  bool exhausted = false;
  for (const auto& [provision, pair] : ctx.alignment.pairs) {
    ProCon a, b;
    try {
      a = pro_con(q, pair.first, until(ctx.budget, deadline));
      b = pro_con(qs, pair.second, until(ctx.budget, deadline));
    } catch (const BudgetExceeded&) {
      exhausted = true;
      break;
    }
    auto has = [](const std::vector<ArgumentId>& v, const ArgumentId& id) {
      return std::binary_search(v.begin(), v.end(), id);
    };
    for (const auto& m : match.pairs) {
      bool pro_ok = has(a.pro, m.source) == has(b.pro, m.summary);
      bool con_ok = has(a.con, m.source) == has(b.con, m.summary);
      if (!pro_ok || !con_ok)
        violations.push_back({{"provision", provision}, {"source", m.source.str()}, {"summary", m.summary.str()}});
    }
  }
  consistent.value = flag(violations.empty());
  consistent.details = {{"violations", violations}};
  if (exhausted) {
    consistent.value.reset();
    consistent.status = "unavailable";
  }
  out.push_back(consistent);
  return out;
}

// ---------------------------------------------------------------------------

std::string speech_text(const Qbaf& qbaf) {
  auto speeches = qbaf.speeches();
  std::stable_sort(speeches.begin(), speeches.end(), [&](std::size_t l, std::size_t r) {
    return qbaf.at(l).order.value_or(0) < qbaf.at(r).order.value_or(0);
  });
  std::string text;
  for (std::size_t i : speeches) {
    if (qbaf.at(i).text.empty()) continue;
    if (!text.empty()) text.push_back('\n');
    text += qbaf.at(i).text;
  }
  return text;
}

ReportBundle full_report(const EvalContext& ctx, const ReportOptions& options) {
  ReportBundle r;
  r.debate_id = ctx.source.meta().debate_id;
  r.epsilon = ctx.epsilon;
  r.speech_base = ctx.semantics.speech_base_score;
  r.p1_source = p1_relevance(ctx.source);
  r.p1_summary = p1_relevance(ctx.summary);
  r.p2_source = p2_mean(ctx.source, ctx.budget);
  r.p2_summary = p2_mean(ctx.summary, ctx.budget);
  if (r.p2_source.unavailable + r.p2_summary.unavailable > 0)
    r.unavailable.push_back("pro/con search budget exceeded for " +
                            std::to_string(r.p2_source.unavailable + r.p2_summary.unavailable) +
                            " proposal(s); P2 covers the rest");
  r.source_only_provisions = ctx.alignment.source_only;

  const StrengthMap src = evaluate(ctx.source, ctx.semantics);
  const StrengthMap sum = evaluate(ctx.summary, ctx.semantics);
  r.p4 = strength_theta(ctx, src, sum, true);
  r.p5 = strength_theta(ctx, src, sum, false);
  if (!src.converged) r.unavailable.push_back("source strengths did not converge; P4/P5 unavailable");
  if (!sum.converged) r.unavailable.push_back("summary strengths did not converge; P4/P5 unavailable");

  auto src_acc = proposal_acceptance(ctx.source, ctx.budget);
  auto sum_acc = src_acc ? proposal_acceptance(ctx.summary, ctx.budget) : std::nullopt;
  if (!src_acc || !sum_acc) r.unavailable.push_back("extension search budget exceeded; P3 unavailable");

  std::vector<bool> p3_passes;
  for (const auto& row : summary_proposals(ctx)) {
    ProposalRow pr;
    pr.provision = row.provision;
    pr.summary_id = row.summary;
    pr.source_id = row.source;
    pr.summary_strength = sum.at(row.summary);
    pr.summary_pro_con = r.p2_summary.per_provision[row.provision];
    if (sum_acc) pr.summary_accepted = sum_acc->at(row.summary);
    if (row.source) {
      pr.source_strength = src.at(*row.source);
      pr.source_pro_con = r.p2_source.per_provision[row.provision];
      if (src_acc) pr.source_accepted = src_acc->at(*row.source);
      pr.p4_pass = balance_agrees(*pr.source_strength, pr.summary_strength);
      pr.p5_pass = within_epsilon(*pr.source_strength, pr.summary_strength, ctx.epsilon);
    }
    if (src_acc && sum_acc) {
      pr.p3_pass = row.source && *pr.source_accepted == *pr.summary_accepted;
      p3_passes.push_back(*pr.p3_pass);
    }
    r.per_proposal.push_back(std::move(pr));
  }
  if (src_acc && sum_acc) r.p3 = from_passes(std::move(p3_passes));

  if (options.rouge) {
    auto candidate = speech_text(ctx.summary);
    auto reference = speech_text(ctx.source);
    if (!candidate.empty() && !reference.empty()) r.rouge2 = rouge_n(candidate, reference, 2);
  }

  if (options.match) {
    r.match_method = options.match->method;
    r.supplementary = supplementary_properties(ctx, *options.match, options.supplementary);
  }

  for (double base : options.sweep) {
    SemanticsConfig cfg = ctx.semantics;
    cfg.speech_base_score = base;
    EvalContext swept(ctx.source, ctx.summary, cfg, ctx.epsilon, ctx.budget);
    const StrengthMap s1 = evaluate(ctx.source, cfg);
    const StrengthMap s2 = evaluate(ctx.summary, cfg);
    r.sweep.push_back({base, strength_theta(swept, s1, s2, true), strength_theta(swept, s1, s2, false)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

std::string format2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }
json opt_theta(const std::optional<ThetaResult>& t) { return t ? json(t->theta) : json(nullptr); }
json counts(const std::optional<ThetaResult>& t) {
  return t ? json{{"satisfied", t->satisfied}, {"total", t->total}} : json(nullptr);
}
json shown(const json& v) { return v.is_number() ? json(format2(v.get<double>())) : json(nullptr); }

std::string sweep_key(double base) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", base);
  return buf;
}

}  // namespace

json report_to_json(const ReportBundle& r) {
  json doc;
  doc["debate_id"] = r.debate_id;
  doc["speech_base"] = opt(r.speech_base);
  doc["p1"] = {{"source", opt(r.p1_source)}, {"summary", opt(r.p1_summary)}};
  doc["p2_mean"] = {{"source", opt(r.p2_source.mean)},
                    {"summary", opt(r.p2_summary.mean)},
                    {"source_undefined", r.p2_source.undefined},
                    {"summary_undefined", r.p2_summary.undefined},
                    {"source_unavailable", r.p2_source.unavailable},
                    {"summary_unavailable", r.p2_summary.unavailable}};
  doc["p3"] = opt_theta(r.p3);
  doc["p4"] = opt_theta(r.p4);
  doc["p5"] = {{"epsilon", r.epsilon}, {"theta", opt_theta(r.p5)}};
  doc["counts"] = {{"p3", counts(r.p3)}, {"p4", counts(r.p4)}, {"p5", counts(r.p5)}};
  doc["unavailable"] = r.unavailable;
  doc["source_only_provisions"] = r.source_only_provisions;

  json rows = json::array();
  for (const auto& p : r.per_proposal) {
    rows.push_back({{"provision", p.provision},
                    {"summary_id", p.summary_id.str()},
                    {"source_id", p.source_id ? json(p.source_id->str()) : json(nullptr)},
                    {"strength", {{"source", opt(p.source_strength)}, {"summary", p.summary_strength}}},
                    {"credulous", {{"source", opt(p.source_accepted)}, {"summary", opt(p.summary_accepted)}}},
                    {"pro_con", {{"source", opt(p.source_pro_con)}, {"summary", opt(p.summary_pro_con)}}},
                    {"p3", opt(p.p3_pass)},
                    {"p4", p.p4_pass},
                    {"p5", p.p5_pass}});
  }
  doc["per_proposal"] = rows;

  if (r.rouge2) {
    doc["r2"] = {{"precision", r.rouge2->precision}, {"recall", r.rouge2->recall}, {"f1", r.rouge2->f1}};
  }

  if (r.match_method) {
    json props = json::array();
    for (const auto& p : r.supplementary) {
      props.push_back({{"id", p.id},
                       {"name", p.name},
                       {"scope", p.scope},
                       {"value", opt(p.value)},
                       {"status", p.status},
                       {"details", p.details}});
    }
    doc["supplementary"] = {{"method", *r.match_method}, {"properties", props}};
  }

  if (!r.sweep.empty()) {
    json sweep = json::object();
    for (const auto& row : r.sweep) {
      sweep[sweep_key(row.speech_base)] = {{"speech_base", row.speech_base},
                                           {"p4", opt_theta(row.p4)},
                                           {"p5", opt_theta(row.p5)}};
    }
    doc["sweep"] = sweep;
  }

  json display;
  display["p1"] = {{"source", shown(doc["p1"]["source"])}, {"summary", shown(doc["p1"]["summary"])}};
  display["p2_mean"] = {{"source", shown(doc["p2_mean"]["source"])}, {"summary", shown(doc["p2_mean"]["summary"])}};
  display["p3"] = shown(doc["p3"]);
  display["p4"] = shown(doc["p4"]);
  display["p5"] = shown(doc["p5"]["theta"]);
  if (doc.contains("r2")) display["r2"] = shown(doc["r2"]["f1"]);
  json display_rows = json::array();
  for (const auto& row : doc["per_proposal"]) {
    display_rows.push_back({{"provision", row["provision"]},
                            {"source", shown(row["strength"]["source"])},
                            {"summary", shown(row["strength"]["summary"])}});
  }
  display["per_proposal"] = display_rows;
  doc["display"] = display;
  return doc;
}

namespace {

std::string cell(const json& v) {
  if (v.is_null()) return "---";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number()) return format2(v.get<double>());
  return v.get<std::string>();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string markdown(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    os << "|";
    for (const auto& c : cells) os << " " << c << " |";
    os << "\n";
  };
  line(t.header);
  os << "|";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i == 0 ? " --- |" : " ---: |");
  os << "\n";
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string plain(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  measure(t.header);
  for (const auto& r : t.rows) measure(r);
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << "  ";
      if (i == 0) {
        os << cells[i] << std::string(width[i] - cells[i].size(), ' ');
      } else {
        os << std::string(width[i] - cells[i].size(), ' ') << cells[i];
      }
    }
    os << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

struct Sections {
  std::string title;
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::string> notes;
};

Sections build_sections(const json& doc) {
  Sections s;
  s.title = "Summary faithfulness: " + doc.value("debate_id", std::string());

  Table headline{{"", "R-2", "P1", "P2", "P3", "P4", "P5"}, {}};
  headline.rows.push_back({"source", "---", cell(doc["p1"]["source"]), cell(doc["p2_mean"]["source"]), "---", "---",
                           "---"});
  std::string r2 = doc.contains("r2") ? cell(doc["r2"]["f1"]) : "---";
  headline.rows.push_back({"summary", r2, cell(doc["p1"]["summary"]), cell(doc["p2_mean"]["summary"]),
                           cell(doc["p3"]), cell(doc["p4"]), cell(doc["p5"]["theta"])});
  s.tables.emplace_back("Properties (P3-P5: maximal theta, epsilon = " + cell(doc["p5"]["epsilon"]) + ")", headline);

  Table rows{{"provision", "sigma source", "sigma summary", "pro-con source", "pro-con summary", "P3", "P4", "P5"},
             {}};
  for (const auto& r : doc["per_proposal"]) {
    rows.rows.push_back({"p:" + std::to_string(r["provision"].get<int>()), cell(r["strength"]["source"]),
                         cell(r["strength"]["summary"]), cell(r["pro_con"]["source"]), cell(r["pro_con"]["summary"]),
                         cell(r["p3"]), cell(r["p4"]), cell(r["p5"])});
  }
  s.tables.emplace_back("Proposal strengths", rows);

  if (doc.contains("supplementary")) {
    Table sup{{"property", "holds", "status"}, {}};
    for (const auto& p : doc["supplementary"]["properties"]) {
      std::string holds = p["value"].is_null() ? "---" : (p["value"].get<double>() > 0.5 ? "yes" : "no");
      sup.rows.push_back({p["id"].get<std::string>() + " " + p["name"].get<std::string>(), holds,
                          p["status"].get<std::string>()});
    }
    s.tables.emplace_back("Speech-argument properties (matcher: " +
                              doc["supplementary"]["method"].get<std::string>() + ")",
                          sup);
  }

  if (doc.contains("sweep")) {
    Table sweep{{"speech base", "P4", "P5"}, {}};
    std::vector<std::pair<double, json>> entries;
    for (const auto& [key, v] : doc["sweep"].items()) entries.emplace_back(v["speech_base"].get<double>(), v);
    std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [base, v] : entries) sweep.rows.push_back({format2(base), cell(v["p4"]), cell(v["p5"])});
    s.tables.emplace_back("Base-score sweep", sweep);
  }

  for (const auto& u : doc["unavailable"]) s.notes.push_back(u.get<std::string>());
  if (doc["p2_mean"]["source_undefined"].get<int>() + doc["p2_mean"]["summary_undefined"].get<int>() > 0) {
    s.notes.push_back("P2 mean excludes provisions with no pro or con arguments (source: " +
                      std::to_string(doc["p2_mean"]["source_undefined"].get<int>()) +
                      ", summary: " + std::to_string(doc["p2_mean"]["summary_undefined"].get<int>()) + ")");
  }
  return s;
}

}  // namespace

std::string render_markdown(const json& doc) {
  Sections s = build_sections(doc);
  std::ostringstream os;
  os << "# " << s.title << "\n";
  for (const auto& [heading, table] : s.tables) os << "\n## " << heading << "\n\n" << markdown(table);
  if (!s.notes.empty()) {
    os << "\n## Notes\n\n";
    for (const auto& n : s.notes) os << "- " << n << "\n";
  }
  return os.str();
}

std::string render_text(const json& doc) {
  Sections s = build_sections(doc);
  std::ostringstream os;
  os << s.title << "\n";
  for (const auto& [heading, table] : s.tables) os << "\n" << heading << "\n" << plain(table);
  for (const auto& n : s.notes) os << "\nnote: " << n;
  if (!s.notes.empty()) os << "\n";
  return os.str();
}

std::string render_markdown(const ReportBundle& report) { return render_markdown(report_to_json(report)); }
std::string render_text(const ReportBundle& report) { return render_text(report_to_json(report)); }

}  // namespace qbafsum
