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

#include "qbafsum/extensions.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>

namespace qbafsum {

namespace {

// True iff `goal` is reachable from `start` over support edges without
// passing through any node marked in `blocked`. `start` itself is blocked
// for the duration of the search so the resulting path is simple.
template <typename Accept>
bool support_reach(const Qbaf& qbaf, std::size_t start, std::vector<char> blocked, Accept&& accept) {
  blocked[start] = 1;
  std::deque<std::size_t> queue{start};
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& link : qbaf.outgoing(u)) {
      if (link.polarity != Polarity::Support || blocked[link.node]) continue;
      if (accept(link.node)) return true;
      blocked[link.node] = 1;
      queue.push_back(link.node);
    }
  }
  return false;
}

bool supported_attack(const Qbaf& qbaf, std::size_t a, std::size_t b) {
  if (a == b) return false;
  std::vector<char> attacks_b(qbaf.size(), 0);
  bool any = false;
  for (const auto& link : qbaf.incoming(b)) {
    if (link.polarity == Polarity::Attack) attacks_b[link.node] = 1, any = true;
  }
  if (!any) return false;
  std::vector<char> blocked(qbaf.size(), 0);
  blocked[b] = 1;
  return support_reach(qbaf, a, std::move(blocked), [&](std::size_t y) { return attacks_b[y] != 0; });
}

bool indirect_attack(const Qbaf& qbaf, std::size_t a, std::size_t b) {
  if (a == b) return false;
  for (const auto& link : qbaf.outgoing(a)) {
    if (link.polarity != Polarity::Attack || link.node == b || link.node == a) continue;
    std::vector<char> blocked(qbaf.size(), 0);
    blocked[a] = 1;
    if (support_reach(qbaf, link.node, std::move(blocked), [&](std::size_t y) { return y == b; })) return true;
  }
  return false;
}

bool indirect_support(const Qbaf& qbaf, std::size_t a, std::size_t b) {
  if (a == b) return false;
  for (const auto& link : qbaf.outgoing(a)) {
    if (link.polarity != Polarity::Support || link.node == b || link.node == a) continue;
    std::vector<char> blocked(qbaf.size(), 0);
    blocked[a] = 1;
    if (support_reach(qbaf, link.node, std::move(blocked), [&](std::size_t y) { return y == b; })) return true;
  }
  return false;
}

}  // namespace

bool supported_attack_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to) {
  return supported_attack(qbaf, qbaf.index_of(from), qbaf.index_of(to));
}

bool indirect_attack_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to) {
  return indirect_attack(qbaf, qbaf.index_of(from), qbaf.index_of(to));
}

bool indirect_support_exists(const Qbaf& qbaf, const ArgumentId& from, const ArgumentId& to) {
  return indirect_support(qbaf, qbaf.index_of(from), qbaf.index_of(to));
}

// ---------------------------------------------------------------------------
// DerivedAf

DerivedAf DerivedAf::from_pairs(std::vector<ArgumentId> nodes,
                                const std::vector<std::pair<std::size_t, std::size_t>>& attacks) {
  DerivedAf af(std::move(nodes));
  for (auto [from, to] : attacks) af.add_attack(from, to);
  return af;
}

void DerivedAf::add_attack(std::size_t from, std::size_t to) {
  auto insert_sorted = [](std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert_sorted(attacks_.at(from), to);
  insert_sorted(attackers_.at(to), from);
}

std::size_t DerivedAf::index_of(const ArgumentId& id) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end()) throw LookupError("unknown argument id '" + id.str() + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool DerivedAf::attacks(std::size_t from, std::size_t to) const {
  return std::binary_search(attacks_.at(from).begin(), attacks_.at(from).end(), to);
}

std::vector<std::pair<ArgumentId, ArgumentId>> DerivedAf::attack_pairs() const {
  std::vector<std::pair<ArgumentId, ArgumentId>> out;
  for (std::size_t a = 0; a < nodes_.size(); ++a)
    for (std::size_t b : attacks_[a]) out.emplace_back(nodes_[a], nodes_[b]);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t DerivedAf::attack_count() const {
  std::size_t n = 0;
  for (const auto& v : attacks_) n += v.size();
  return n;
}

DerivedAf compile_derived_af(const Qbaf& qbaf) {
  std::vector<ArgumentId> ids;
  ids.reserve(qbaf.size());
  for (const auto& a : qbaf.arguments()) ids.push_back(a.id);
  DerivedAf af(std::move(ids));

  std::vector<char> attacked(qbaf.size(), 0), has_support_out(qbaf.size(), 0), has_attack_out(qbaf.size(), 0);
  for (std::size_t a = 0; a < qbaf.size(); ++a) {
    for (const auto& link : qbaf.outgoing(a)) {
      if (link.polarity == Polarity::Attack) {
        af.add_attack(a, link.node);
        attacked[link.node] = 1;
        has_attack_out[a] = 1;
      } else {
        has_support_out[a] = 1;
      }
    }
  }
  for (std::size_t a = 0; a < qbaf.size(); ++a) {
    if (!has_support_out[a] && !has_attack_out[a]) continue;
    for (std::size_t b = 0; b < qbaf.size(); ++b) {
      if (a == b || af.attacks(a, b)) continue;
      if ((has_support_out[a] && attacked[b] && supported_attack(qbaf, a, b)) ||
          (has_attack_out[a] && indirect_attack(qbaf, a, b))) {
        af.add_attack(a, b);
      }
    }
  }
  return af;
}

std::string to_aspartix(const DerivedAf& af) {
  std::ostringstream os;
  for (const auto& id : af.nodes()) os << "arg(" << id.str() << ").\n";
  for (const auto& [a, b] : af.attack_pairs()) os << "att(" << a.str() << "," << b.str() << ").\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Labelling search

namespace {

enum class Label : std::uint8_t { Blank, In, Out, MustOut, Undec };

class Labelling {
 public:
  Labelling(const DerivedAf& af, const SearchBudget& budget)
      : af_(af), budget_(budget), deadline_(std::chrono::steady_clock::now() + budget.wall_clock) {}

  using State = std::vector<Label>;

  // Self-attackers can never be IN; the grounded extension is IN everywhere.
  State initial() const {
    State s(af_.size(), Label::Blank);
    for (std::size_t x = 0; x < af_.size(); ++x)
      if (af_.attacks(x, x)) s[x] = Label::Undec;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t x = 0; x < af_.size(); ++x) {
        if (s[x] != Label::Blank) continue;
        bool unattacked = std::all_of(af_.attackers(x).begin(), af_.attackers(x).end(),
                                      [&](std::size_t z) { return s[z] == Label::Out; });
        if (unattacked) {
          make_in(s, x);
          changed = true;
        }
      }
    }
    return s;
  }

  void make_in(State& s, std::size_t x) const {
    s[x] = Label::In;
    for (std::size_t y : af_.attacks(x)) s[y] = Label::Out;
    for (std::size_t z : af_.attackers(x))
      if (s[z] != Label::Out) s[z] = Label::MustOut;
  }

  void tick() {
    ++nodes_;
    if (budget_.max_nodes && nodes_ > *budget_.max_nodes)
      throw BudgetExceeded("extension search exceeded node budget");
    if ((nodes_ & 0xff) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw BudgetExceeded("extension search exceeded wall-clock budget");
  }

  // A MUST_OUT argument with no BLANK attacker can never be defeated.
  bool hopeless(const State& s) const {
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (s[y] != Label::MustOut) continue;
      bool rescuable = std::any_of(af_.attackers(y).begin(), af_.attackers(y).end(),
                                   [&](std::size_t z) { return s[z] == Label::Blank; });
      if (!rescuable) return true;
    }
    return false;
  }

  std::optional<std::size_t> pick_blank(const State& s) const {
    std::optional<std::size_t> best;
    std::pair<int, std::size_t> best_key{-1, 0};
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (s[x] != Label::Blank) continue;
      bool rescues = std::any_of(af_.attacks(x).begin(), af_.attacks(x).end(),
                                 [&](std::size_t y) { return s[y] == Label::MustOut; });
      std::pair<int, std::size_t> key{rescues ? 1 : 0, af_.attacks(x).size() + af_.attackers(x).size()};
      if (key > best_key) best_key = key, best = x;
    }
    return best;
  }

  void enumerate(State s, std::vector<std::vector<char>>& found) {
    tick();
    if (hopeless(s)) return;
    for (const auto& ext : found) {
      bool covered = true;
      for (std::size_t x = 0; x < s.size() && covered; ++x)
        if ((s[x] == Label::In || s[x] == Label::Blank) && !ext[x]) covered = false;
      if (covered) return;
    }
    auto x = pick_blank(s);
    if (!x) {
      std::vector<char> members(s.size(), 0);
      for (std::size_t i = 0; i < s.size(); ++i) members[i] = s[i] == Label::In;
      // Earlier finds that are subsets of this one are no longer maximal.
      std::erase_if(found, [&](const std::vector<char>& ext) {
        for (std::size_t i = 0; i < ext.size(); ++i)
          if (ext[i] && !members[i]) return false;
        return true;
      });
      found.push_back(std::move(members));
      return;
    }
    State with = s;
    make_in(with, *x);
    enumerate(std::move(with), found);
    s[*x] = Label::Undec;
    enumerate(std::move(s), found);
  }

  bool admissible_completion(State s) {
    tick();
    std::optional<std::size_t> open;
    for (std::size_t y = 0; y < s.size() && !open; ++y)
      if (s[y] == Label::MustOut) open = y;
    if (!open) return true;
    for (std::size_t z : af_.attackers(*open)) {
      if (s[z] != Label::Blank) continue;
      State with = s;
      make_in(with, z);
      if (!hopeless(with) && admissible_completion(std::move(with))) return true;
      s[z] = Label::Undec;
    }
    return false;
  }

 private:
  const DerivedAf& af_;
  SearchBudget budget_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
};

std::vector<Extension> to_extensions(const DerivedAf& af, const std::vector<std::vector<char>>& sets) {
  std::vector<Extension> out;
  for (const auto& members : sets) {
    Extension ext;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i]) ext.push_back(af.nodes()[i]);
    std::sort(ext.begin(), ext.end());
    out.push_back(std::move(ext));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Extension> preferred_extensions(const DerivedAf& af, const SearchBudget& budget) {
  Labelling search(af, budget);
  std::vector<std::vector<char>> found;
  search.enumerate(search.initial(), found);
  return to_extensions(af, found);
}

bool credulously_accepted(const DerivedAf& af, const ArgumentId& x, const SearchBudget& budget) {
  const std::size_t target = af.index_of(x);
  Labelling search(af, budget);
  auto s = search.initial();
  if (s[target] == Label::In) return true;
  if (s[target] != Label::Blank) return false;
  search.make_in(s, target);
  return search.admissible_completion(std::move(s));
}

bool is_conflict_free(const DerivedAf& af, const std::vector<std::size_t>& members) {
  for (std::size_t a : members)
    for (std::size_t b : members)
      if (af.attacks(a, b)) return false;
  return true;
}

bool is_admissible(const DerivedAf& af, const std::vector<std::size_t>& members) {
  if (!is_conflict_free(af, members)) return false;
  for (std::size_t a : members) {
    for (std::size_t attacker : af.attackers(a)) {
      bool defended = std::any_of(members.begin(), members.end(),
                                  [&](std::size_t d) { return af.attacks(d, attacker); });
      if (!defended) return false;
    }
  }
  return true;
}

std::vector<Extension> brute_force_preferred(const DerivedAf& af) {
  const std::size_t n = af.size();
  if (n > 20) throw DomainError("brute_force_preferred supports at most 20 arguments");
  std::vector<std::uint32_t> attacks(n, 0), attackers(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b : af.attacks(a)) {
      attacks[a] |= 1u << b;
      attackers[b] |= 1u << a;
    }
  }
  std::vector<std::uint32_t> admissible;
  for (std::uint32_t set = 0; set < (1u << n); ++set) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (!(set >> a & 1u)) continue;
      if (attacks[a] & set) ok = false;
      for (std::size_t z = 0; z < n && ok; ++z) {
        if ((attackers[a] >> z & 1u) && !(attackers[z] & set)) ok = false;
      }
    }
    if (ok) admissible.push_back(set);
  }
  std::stable_sort(admissible.begin(), admissible.end(),
                   [](std::uint32_t l, std::uint32_t r) { return std::popcount(l) > std::popcount(r); });
  std::vector<std::uint32_t> maximal;
  for (std::uint32_t set : admissible) {
    bool dominated = std::any_of(maximal.begin(), maximal.end(),
                                 [&](std::uint32_t m) { return (set & m) == set; });
    if (!dominated) maximal.push_back(set);
  }
  std::vector<std::vector<char>> sets;
  for (std::uint32_t set : maximal) {
    std::vector<char> members(n, 0);
    for (std::size_t i = 0; i < n; ++i) members[i] = (set >> i) & 1u;
    sets.push_back(std::move(members));
  }
  return to_extensions(af, sets);
}

}  // namespace qbafsum
