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

#include "qbafsum/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace qbafsum {

std::optional<int> provision_index(const ArgumentId& id) {
  const std::string& s = id.str();
  if (s.size() < 3 || s[0] != 'p' || s[1] != ':') return std::nullopt;
  int value = 0;
  const char* first = s.data() + 2;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 1) return std::nullopt;
  return value;
}

ArgumentId proposal_id(int provision) { return ArgumentId("p:" + std::to_string(provision)); }

const char* to_string(ArgumentKind kind) {
  return kind == ArgumentKind::Proposal ? "proposal" : "speech";
}

const char* to_string(Polarity polarity) {
  return polarity == Polarity::Attack ? "attack" : "support";
}

const char* to_string(GraphSource source) {
  return source == GraphSource::Original ? "original" : "summary";
}

Qbaf::Qbaf(GraphMeta meta, std::vector<Argument> arguments, std::vector<Edge> edges)
    : meta_(std::move(meta)), arguments_(std::move(arguments)) {
  for (std::size_t i = 0; i < arguments_.size(); ++i) {
    // First occurrence wins; validate() reports the duplicate.
    index_.emplace(arguments_[i].id.str(), i);
  }

  std::set<std::tuple<std::string, std::string, int>> seen;
  for (auto& e : edges) {
    auto key = std::make_tuple(e.source.str(), e.target.str(), static_cast<int>(e.polarity));
    if (!seen.insert(key).second) {
      warnings_.push_back("collapsed duplicate " + std::string(to_string(e.polarity)) + " edge " +
                          e.source.str() + " -> " + e.target.str());
      continue;
    }
    edges_.push_back(std::move(e));
  }

  in_.resize(arguments_.size());
  out_.resize(arguments_.size());
  for (const auto& e : edges_) {
    auto s = index_.find(e.source.str());
    auto t = index_.find(e.target.str());
    if (s == index_.end() || t == index_.end()) continue;
    in_[t->second].push_back({s->second, e.polarity});
    out_[s->second].push_back({t->second, e.polarity});
  }
}

std::size_t Qbaf::index_of(const ArgumentId& id) const {
  auto it = index_.find(id.str());
  if (it == index_.end()) throw LookupError("unknown argument id '" + id.str() + "'");
  return it->second;
}

std::vector<std::size_t> Qbaf::proposals() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < arguments_.size(); ++i)
    if (arguments_[i].kind == ArgumentKind::Proposal) out.push_back(i);
  return out;
}

std::vector<std::size_t> Qbaf::speeches() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < arguments_.size(); ++i)
    if (arguments_[i].kind == ArgumentKind::Speech) out.push_back(i);
  return out;
}

std::optional<std::vector<std::size_t>> Qbaf::topological_order() const {
  // Kahn's algorithm; the queue is seeded in index order so the result is
  // deterministic for a given storage order.
  std::vector<std::size_t> indegree(arguments_.size());
  for (std::size_t i = 0; i < arguments_.size(); ++i) indegree[i] = in_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < arguments_.size(); ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::vector<std::size_t> order;
  order.reserve(arguments_.size());
  while (!ready.empty()) {
    std::size_t n = ready.front();
    ready.pop_front();
    order.push_back(n);
    for (const auto& link : out_[n])
      if (--indegree[link.node] == 0) ready.push_back(link.node);
  }
  if (order.size() != arguments_.size()) return std::nullopt;
  return order;
}

ValidationReport validate(const Qbaf& qbaf, bool enforce_temporal) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string message) {
    report.violations.push_back({std::move(rule), std::move(message)});
  };

  std::map<std::string, int> id_count;
  std::map<int, std::string> provisions;
  bool has_proposal = false;
  for (const auto& a : qbaf.arguments()) {
    if (a.id.empty()) add("id-non-empty", "argument with empty id");
    if (++id_count[a.id.str()] == 2) add("id-unique", "duplicate argument id '" + a.id.str() + "'");
    if (!(a.base_score >= 0.0 && a.base_score <= 1.0))
      add("base-score-range", "base score of '" + a.id.str() + "' must lie in [0,1]");
    if (a.order && *a.order < 0)
      add("order-non-negative", "order of '" + a.id.str() + "' must be non-negative");
    if (a.kind == ArgumentKind::Proposal) {
      has_proposal = true;
      if (a.base_score != 0.5)
        add("proposal-base-score", "proposal base score must be 0.5 ('" + a.id.str() + "')");
      auto p = provision_index(a.id);
      if (!p) {
        add("proposal-id", "proposal id '" + a.id.str() + "' must have the form p:<index>, index >= 1");
      } else if (auto [it, fresh] = provisions.emplace(*p, a.id.str()); !fresh && it->second != a.id.str()) {
        add("provision-unique", "provision " + std::to_string(*p) + " appears twice");
      }
    }
  }
  if (!has_proposal) add("has-proposal", "graph must contain at least one proposal argument");

  std::set<std::pair<std::string, std::string>> attacks, supports;
  for (const auto& e : qbaf.edges()) {
    const std::string label = e.source.str() + " -> " + e.target.str();
    bool known_source = qbaf.contains(e.source);
    bool known_target = qbaf.contains(e.target);
    if (!known_source) add("edge-endpoint", "edge " + label + ": unknown source '" + e.source.str() + "'");
    if (!known_target) add("edge-endpoint", "edge " + label + ": unknown target '" + e.target.str() + "'");
    if (e.source == e.target) add("no-self-edge", "self edge on '" + e.source.str() + "'");
    if (known_source && qbaf.at(e.source).kind != ArgumentKind::Speech)
      add("edge-source-speech", "edges originate from speech arguments (" + label + ")");
    auto& bucket = e.polarity == Polarity::Attack ? attacks : supports;
    bucket.emplace(e.source.str(), e.target.str());

    if (enforce_temporal && qbaf.meta().source == GraphSource::Original && known_source && known_target) {
      const auto& s = qbaf.at(e.source);
      const auto& t = qbaf.at(e.target);
      if (s.kind == ArgumentKind::Speech && t.kind == ArgumentKind::Speech && s.order && t.order &&
          !(*s.order > *t.order)) {
        add("temporal", "speech arguments may only relate to earlier ones (" + label + ")");
      }
    }
  }
  for (const auto& pair : attacks) {
    if (supports.count(pair))
      add("attack-support-disjoint", "attack and support disjoint: " + pair.first + " -> " + pair.second);
  }
  return report;
}

std::vector<Path> enumerate_paths(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to) {
  const std::size_t start = qbaf.index_of(from);
  const std::size_t goal = qbaf.index_of(to);
  std::vector<Path> result;
  std::vector<char> on_path(qbaf.size(), 0);
  std::vector<Edge> stack;
  std::size_t attacks = 0;

  auto dfs = [&](auto&& self, std::size_t node) -> void {
    for (const auto& link : qbaf.outgoing(node)) {
      if (link.node == goal) {
        stack.push_back({qbaf.at(node).id, qbaf.at(link.node).id, link.polarity});
        result.push_back({stack, attacks + (link.polarity == Polarity::Attack)});
        stack.pop_back();
        continue;
      }
      if (on_path[link.node]) continue;
      on_path[link.node] = 1;
      stack.push_back({qbaf.at(node).id, qbaf.at(link.node).id, link.polarity});
      attacks += link.polarity == Polarity::Attack;
      self(self, link.node);
      attacks -= link.polarity == Polarity::Attack;
      stack.pop_back();
      on_path[link.node] = 0;
    }
  };
  on_path[start] = 1;
  dfs(dfs, start);
  return result;
}

namespace {

std::vector<ArgumentId> collect(const Qbaf& qbaf, const std::vector<char>& flags) {
  std::vector<ArgumentId> ids;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) ids.push_back(qbaf.at(i).id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

ProCon pro_con(const Qbaf& qbaf, const ArgumentId& x, const SearchBudget& budget) {
  return detail::pro_con_with_sweep(qbaf, x, budget, 200'000);
}

ProCon detail::pro_con_with_sweep(const Qbaf& qbaf, const ArgumentId& x, const SearchBudget& budget,
                                  std::uint64_t sweep_steps) {
  const std::size_t target = qbaf.index_of(x);
  const std::size_t n = qbaf.size();
  std::vector<char> pro(n, 0), con(n, 0);
  auto mark = [&](std::size_t v, int p) { (p == 0 ? pro : con)[v] = 1; };
  auto found = [&](std::size_t v, int p) { return (p == 0 ? pro : con)[v] != 0; };

  // Backward BFS over (node, parity) states. `blocked` nodes are never
  // entered; `goal` may be entered but is not expanded. Every walk in a DAG
  // is a simple path, so with nothing blocked this is exact there and an
  // upper bound otherwise.
  auto walk_parities = [&](std::size_t from, int parity, const std::vector<char>& blocked,
                           std::size_t goal) {
    std::vector<char> seen(2 * n, 0);
    std::deque<std::pair<std::size_t, int>> queue{{from, parity}};
    while (!queue.empty()) {
      auto [node, par] = queue.front();
      queue.pop_front();
      for (const auto& link : qbaf.incoming(node)) {
        int p = par ^ (link.polarity == Polarity::Attack);
        if (seen[2 * link.node + p]) continue;
        if (link.node != goal && blocked[link.node]) continue;
        seen[2 * link.node + p] = 1;
        if (link.node != goal) queue.emplace_back(link.node, p);
      }
    }
    return seen;
  };

  const std::vector<char> none(n, 0);
  if (qbaf.is_acyclic()) {
    auto seen = walk_parities(target, 0, none, n);
    for (std::size_t v = 0; v < n; ++v)
      for (int p = 0; p < 2; ++p)
        if (seen[2 * v + p]) mark(v, p);
    return {collect(qbaf, pro), collect(qbaf, con)};
  }

  // Cyclic graphs. A path may close on x itself but never revisit any other
  // node, so x is the goal of the bound and never expanded past.
  const auto possible = walk_parities(target, 0, none, target);
  std::size_t missing = std::count(possible.begin(), possible.end(), 1);

  const auto deadline = std::chrono::steady_clock::now() + budget.wall_clock;
  std::uint64_t steps = 0;
  auto tick = [&] {
    ++steps;
    if (budget.max_nodes && steps > *budget.max_nodes)
      throw BudgetExceeded("pro/con search exceeded " + std::to_string(*budget.max_nodes) + " nodes");
    if ((steps & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline)
      throw BudgetExceeded("pro/con search for '" + x.str() + "' exceeded its wall-clock budget");
  };
  auto record = [&](std::size_t v, int p) {
    if (found(v, p)) return;
    mark(v, p);
    --missing;
  };

  std::vector<std::vector<std::size_t>> ancestors(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> todo{v};
    while (!todo.empty()) {
      std::size_t u = todo.back();
      todo.pop_back();
      for (const auto& link : qbaf.incoming(u)) {
        if (seen[link.node]) continue;
        seen[link.node] = 1;
        ancestors[v].push_back(link.node);
        todo.push_back(link.node);
      }
    }
  }
  // Nothing left to learn above v once every ancestor has every parity the
  // walk bound allows.
  auto settled = [&](std::size_t v) {
    for (std::size_t a : ancestors[v])
      for (int p = 0; p < 2; ++p)
        if (possible[2 * a + p] && !found(a, p)) return false;
    return true;
  };

  // Phase 1: a step-capped sweep over simple paths, which usually finds
  // nearly everything on real graphs.
  std::vector<char> on_path(n, 0);
  on_path[target] = 1;
  bool capped = false;
  auto sweep = [&](auto&& self, std::size_t node, int parity) -> void {
    for (const auto& link : qbaf.incoming(node)) {
      if (missing == 0 || capped) return;
      if (on_path[link.node] && link.node != target) continue;
      int p = parity ^ (link.polarity == Polarity::Attack);
      record(link.node, p);
      if (link.node == target || settled(link.node)) continue;
      tick();
      if (steps > sweep_steps) {
        capped = true;
        return;
      }
      on_path[link.node] = 1;
      self(self, link.node, p);
      on_path[link.node] = 0;
    }
  };
  sweep(sweep, target, 0);
  // An uncapped sweep was exhaustive.
  if (!capped) return {collect(qbaf, pro), collect(qbaf, con)};

  // Phase 2: one targeted search per parity the bound allows but the sweep
  // did not find. A branch survives only while the goal is still reachable
  // with the right parity without reusing a node on the current path.
  std::vector<std::size_t> path;
  std::vector<int> parities;
  for (std::size_t goal = 0; goal < n && missing > 0; ++goal) {
    for (int want = 0; want < 2; ++want) {
      if (!possible[2 * goal + want] || found(goal, want)) continue;
      bool hit = false;
      auto search = [&](auto&& self, std::size_t node, int parity) -> void {
        tick();
        if (!walk_parities(node, parity, on_path, goal)[2 * goal + want]) return;
        for (const auto& link : qbaf.incoming(node)) {
          if (hit) return;
          int p = parity ^ (link.polarity == Polarity::Attack);
          if (link.node == goal && p == want) {
            hit = true;
            for (std::size_t i = 0; i < path.size(); ++i) record(path[i], parities[i]);
            record(goal, want);
            return;
          }
          if (on_path[link.node] || link.node == goal) continue;
          on_path[link.node] = 1;
          path.push_back(link.node);
          parities.push_back(p);
          self(self, link.node, p);
          path.pop_back();
          parities.pop_back();
          on_path[link.node] = 0;
        }
      };
      search(search, target, 0);
    }
  }
  return {collect(qbaf, pro), collect(qbaf, con)};
}

DirectRelations direct_relations(const Qbaf& qbaf, const ArgumentId& x) {
  DirectRelations out;
  for (const auto& link : qbaf.incoming(qbaf.index_of(x))) {
    auto& bucket = link.polarity == Polarity::Attack ? out.attackers : out.supporters;
    bucket.push_back(qbaf.at(link.node).id);
  }
  std::sort(out.attackers.begin(), out.attackers.end());
  std::sort(out.supporters.begin(), out.supporters.end());
  return out;
}

std::string to_dot(const Qbaf& qbaf) {
  std::ostringstream os;
  os << "digraph \"" << qbaf.meta().debate_id << "\" {\n";
  for (const auto& a : qbaf.arguments()) {
    os << "  \"" << a.id.str() << "\" [shape=" << (a.kind == ArgumentKind::Proposal ? "box" : "ellipse")
       << "];\n";
  }
  for (const auto& e : qbaf.edges()) {
    os << "  \"" << e.source.str() << "\" -> \"" << e.target.str() << "\" [color="
       << (e.polarity == Polarity::Attack ? "red,label=\"-\"" : "green,label=\"+\"") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace qbafsum
