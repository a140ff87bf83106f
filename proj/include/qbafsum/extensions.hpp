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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbafsum/graph.hpp"

namespace qbafsum {

/// Attack-parity shapes over simple paths of at least two edges.
/// Supported attack: supports then one final attack.
bool supported_attack_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to);
/// Indirect attack: one attack followed by supports.
bool indirect_attack_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to);
/// Indirect support: supports only.
bool indirect_support_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to);

/// Dung-style framework whose attack relation is the singleton set-attack
/// relation (direct, indirect or supported attacks) of a bipolar graph.
class DerivedAf {
 public:
  DerivedAf() = default;
  explicit DerivedAf(std::vector<ArgumentId> nodes) : nodes_(std::move(nodes)), attacks_(nodes_.size()),
                                                      attackers_(nodes_.size()) {}

  /// Builds from explicit ids and index pairs (used by tests and tools).
  static DerivedAf from_pairs(std::vector<ArgumentId> nodes,
                              const std::vector<std::pair<std::size_t, std::size_t>>& attacks);

  void add_attack(std::size_t from, std::size_t to);

  const std::vector<ArgumentId>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t index_of(const ArgumentId& id) const;

  /// Sorted, de-duplicated targets of `node`.
  const std::vector<std::size_t>& attacks(std::size_t node) const { return attacks_.at(node); }
  const std::vector<std::size_t>& attackers(std::size_t node) const { return attackers_.at(node); }
  bool attacks(std::size_t from, std::size_t to) const;

  /// All attacks as (from, to) id pairs, sorted.
  std::vector<std::pair<ArgumentId, ArgumentId>> attack_pairs() const;
  std::size_t attack_count() const;

 private:
  std::vector<ArgumentId> nodes_;
  std::vector<std::vector<std::size_t>> attacks_;
  std::vector<std::vector<std::size_t>> attackers_;
};

DerivedAf compile_derived_af(const Qbaf& qbaf);

/// `arg(a).` / `att(a,b).` lines for external solvers.
std::string to_aspartix(const DerivedAf& af);

/// Sorted member ids.
using Extension = std::vector<ArgumentId>;

/// All d-preferred extensions, each sorted, the list sorted
/// lexicographically. Throws BudgetExceeded rather than return a partial list.
std::vector<Extension> preferred_extensions(const DerivedAf& af, const SearchBudget& budget = {});

/// True iff some admissible set (hence some preferred extension) contains x.
bool credulously_accepted(const DerivedAf& af, const ArgumentId& x, const SearchBudget& budget = {});

/// Exhaustive-subset reference implementation; at most 20 nodes.
std::vector<Extension> brute_force_preferred(const DerivedAf& af);

bool is_conflict_free(const DerivedAf& af, const std::vector<std::size_t>& members);
bool is_admissible(const DerivedAf& af, const std::vector<std::size_t>& members);

}  // namespace qbafsum
