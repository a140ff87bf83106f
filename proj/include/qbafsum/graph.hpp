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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qbafsum {

/// Thrown when a query names an argument the graph does not contain.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Thrown for values outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Opaque argument identifier. Proposal ids have the form "p:<provision>".
class ArgumentId {
 public:
  ArgumentId() = default;
  explicit ArgumentId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const ArgumentId&, const ArgumentId&) = default;

 private:
  std::string value_;
};

/// Parses the provision index out of a proposal id ("p:15" -> 15).
/// Returns nullopt for anything that is not "p:" followed by an integer >= 1.
std::optional<int> provision_index(const ArgumentId& id);

/// Canonical proposal id for a provision index.
ArgumentId proposal_id(int provision);

enum class ArgumentKind { Proposal, Speech };
enum class Polarity { Attack, Support };

const char* to_string(ArgumentKind kind);
const char* to_string(Polarity polarity);

struct Argument {
  ArgumentId id;
  ArgumentKind kind = ArgumentKind::Speech;
  std::string text;
  double base_score = 0.0;
  std::optional<long> order;
};

struct Edge {
  ArgumentId source;
  ArgumentId target;
  Polarity polarity = Polarity::Support;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class GraphSource { Original, Summary };

const char* to_string(GraphSource source);

struct GraphMeta {
  std::string debate_id;
  GraphSource source = GraphSource::Original;
};

/// A quantitative bipolar argumentation framework representing one debate
/// (or one summary of it).
///
/// Immutable after construction. The constructor never rejects input:
/// structural problems (dangling endpoints, duplicate ids, bad base scores)
/// are left for validate() to report. Parallel edges with identical polarity
/// are collapsed and recorded in warnings().
///
/// Internally every argument gets a dense index in storage order; edges whose
/// endpoints are unknown are kept in edges() but excluded from adjacency.
class Qbaf {
 public:
  Qbaf() = default;
  Qbaf(GraphMeta meta, std::vector<Argument> arguments, std::vector<Edge> edges);

  const GraphMeta& meta() const noexcept { return meta_; }
  const std::vector<Argument>& arguments() const noexcept { return arguments_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::size_t size() const noexcept { return arguments_.size(); }
  bool contains(const ArgumentId& id) const { return index_.count(id.str()) != 0; }

  /// Dense index of an argument; throws LookupError if absent.
  std::size_t index_of(const ArgumentId& id) const;
  const Argument& at(const ArgumentId& id) const { return arguments_[index_of(id)]; }
  const Argument& at(std::size_t index) const { return arguments_.at(index); }

  struct Link {
    std::size_t node;
    Polarity polarity;
  };
  /// Incoming links (sources of edges into `index`).
  const std::vector<Link>& incoming(std::size_t index) const { return in_.at(index); }
  /// Outgoing links (targets of edges out of `index`).
  const std::vector<Link>& outgoing(std::size_t index) const { return out_.at(index); }

  std::vector<std::size_t> proposals() const;
  std::vector<std::size_t> speeches() const;

  /// Topological order of the edge relation (sources before targets), or
  /// nullopt when the graph has a cycle.
  std::optional<std::vector<std::size_t>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }

 private:
  GraphMeta meta_;
  std::vector<Argument> arguments_;
  std::vector<Edge> edges_;
  std::vector<std::string> warnings_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Link>> in_;
  std::vector<std::vector<Link>> out_;
};

struct Violation {
  std::string rule;     // short stable clause name
  std::string message;  // human-readable, names the offending element
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks every structural invariant of a debate QBAF. With enforce_temporal,
/// speech-to-speech edges of an "original" graph must point backwards in time.
ValidationReport validate(const Qbaf& qbaf, bool enforce_temporal = true);

struct Path {
  std::vector<Edge> edges;
  std::size_t attack_count = 0;
};

/// All simple directed paths from `from` to `to`. Exponential in general;
/// meant for small graphs and test oracles.
std::vector<Path> enumerate_paths(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to);

struct ProCon {
  std::vector<ArgumentId> pro;  // sorted
  std::vector<ArgumentId> con;  // sorted
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Limits for the exponential searches (extensions, cyclic pro/con sets).
struct SearchBudget {
  std::chrono::milliseconds wall_clock{30'000};
  /// Optional cap on search nodes.
  std::optional<std::uint64_t> max_nodes;
};

/// Arguments with a simple path into `x` of even (pro) / odd (con) attack
/// count. An argument may be both. Exact and polynomial on acyclic graphs;
/// on cyclic ones deciding a parity is NP-hard, so the search runs under
/// `budget` and throws BudgetExceeded instead of returning a partial answer.
ProCon pro_con(const Qbaf& qbaf, const ArgumentId& x, const SearchBudget& budget = {});

namespace detail {
// pro_con with the length of the initial exhaustive sweep exposed, so tests
// can force the targeted search that follows it.
ProCon pro_con_with_sweep(const Qbaf& qbaf, const ArgumentId& x, const SearchBudget& budget,
                          std::uint64_t sweep_steps);
}  // namespace detail

struct DirectRelations {
  std::vector<ArgumentId> attackers;   // sorted
  std::vector<ArgumentId> supporters;  // sorted
};

DirectRelations direct_relations(const Qbaf& qbaf, const ArgumentId& x);

/// Graphviz rendering, for eyeballing small graphs.
std::string to_dot(const Qbaf& qbaf);

}  // namespace qbafsum
