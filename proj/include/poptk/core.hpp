// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Value types for population protocols and Petri nets: state sets,
// configurations (multisets of agents), transitions, nets, actions and
// protocols. Everything here is an immutable value once constructed.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poptk/error.hpp"

namespace poptk {

using Count = std::uint64_t;
using Delta = std::int64_t;

/// Ordered set of distinct state names. The declaration order fixes the
/// dense index of every state.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw PreconditionError("empty state name");
      if (!index_.emplace(names_[i], i).second)
        throw PreconditionError("duplicate state '" + names_[i] + "'");
    }
  }
  StateSet(std::initializer_list<std::string> names) : StateSet(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  auto begin() const { return names_.begin(); }
  auto end() const { return names_.end(); }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// States of this set that also belong to `other`, in this set's order.
  StateSet intersect(const StateSet& other) const {
    std::vector<std::string> out;
    for (const auto& n : names_)
      if (other.contains(n)) out.push_back(n);
    return StateSet(std::move(out));
  }
  StateSet minus(const StateSet& other) const {
    std::vector<std::string> out;
    for (const auto& n : names_)
      if (!other.contains(n)) out.push_back(n);
    return StateSet(std::move(out));
  }
  bool is_subset_of(const StateSet& other) const {
    return std::all_of(names_.begin(), names_.end(), [&](const auto& n) { return other.contains(n); });
  }
  /// Same members regardless of order.
  bool same_members(const StateSet& other) const {
    return size() == other.size() && is_subset_of(other);
  }

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Multiset of agents: a map state -> count with an implicit zero for
/// absent states. Stored sorted by state name with zeros dropped, so two
/// configurations are equal iff all per-state counts agree.
class Configuration {
 public:
  using Entry = std::pair<std::string, Count>;

  Configuration() = default;
  Configuration(std::initializer_list<Entry> entries) {
    for (const auto& [s, c] : entries) add_in_place(s, c);
  }
  explicit Configuration(const std::map<std::string, Count>& m) {
    for (const auto& [s, c] : m)
      if (c != 0) entries_.emplace_back(s, c);
  }

  static Configuration single(const std::string& state, Count n = 1) {
    Configuration c;
    c.add_in_place(state, n);
    return c;
  }

  static Configuration from_dense(const StateSet& states, std::span<const Count> counts) {
    if (counts.size() != states.size()) throw PreconditionError("dense vector size mismatch");
    Configuration c;
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] != 0) c.entries_.emplace_back(states[i], counts[i]);
    std::sort(c.entries_.begin(), c.entries_.end());
    return c;
  }

  /// Dense view over `states`; throws if a populated state is not in `states`.
  std::vector<Count> to_dense(const StateSet& states) const {
    std::vector<Count> v(states.size(), 0);
    for (const auto& [s, c] : entries_) {
      auto i = states.index_of(s);
      if (!i) throw PreconditionError("state '" + s + "' is not declared");
      v[*i] = c;
    }
    return v;
  }

  Count operator[](const std::string& state) const {
    auto it = find(state);
    return it != entries_.end() && it->first == state ? it->second : 0;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  Count agents() const {
    Count n = 0;
    for (const auto& e : entries_) n = detail::checked_add(n, e.second);
    return n;
  }
  Count norm_inf() const {
    Count n = 0;
    for (const auto& e : entries_) n = std::max(n, e.second);
    return n;
  }
  /// Populated states, sorted by name.
  std::vector<std::string> support() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  Configuration restrict(const StateSet& q) const {
    Configuration c;
    for (const auto& e : entries_)
      if (q.contains(e.first)) c.entries_.push_back(e);
    return c;
  }

  /// True iff every populated state of this configuration belongs to `states`.
  bool is_over(const StateSet& states) const {
    return std::all_of(entries_.begin(), entries_.end(), [&](const auto& e) { return states.contains(e.first); });
  }

  friend Configuration operator+(const Configuration& a, const Configuration& b) {
    Configuration c = a;
    for (const auto& [s, n] : b.entries_) c.add_in_place(s, n);
    return c;
  }
  friend Configuration operator*(Count k, const Configuration& a) {
    Configuration c;
    if (k == 0) return c;
    for (const auto& [s, n] : a.entries_) c.entries_.emplace_back(s, detail::checked_mul(k, n));
    return c;
  }

  /// Componentwise order.
  bool leq(const Configuration& other) const {
    return std::all_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.second <= other[e.first]; });
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  /// Total order on the canonical form (for ordered containers); not the
  /// componentwise order, see leq().
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Entry>::const_iterator find(const std::string& s) const {
    return std::lower_bound(entries_.begin(), entries_.end(), s,
                            [](const Entry& e, const std::string& k) { return e.first < k; });
  }
  void add_in_place(const std::string& s, Count n) {
    if (n == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, const std::string& k) { return e.first < k; });
    if (it != entries_.end() && it->first == s)
      it->second = detail::checked_add(it->second, n);
    else
      entries_.insert(it, Entry{s, n});
  }

  std::vector<Entry> entries_;
};

inline Count agents(const Configuration& c) { return c.agents(); }
inline Configuration restrict(const Configuration& c, const StateSet& q) { return c.restrict(q); }

/// Integer vector over states (displacements of transitions, paths, cycles).
class Action {
 public:
  using Entry = std::pair<std::string, Delta>;

  Action() = default;
  Action(std::initializer_list<Entry> entries) {
    for (const auto& [s, d] : entries) add_in_place(s, d);
  }

  Delta operator[](const std::string& state) const {
    for (const auto& e : entries_)
      if (e.first == state) return e.second;
    return 0;
  }
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  Count norm1() const {
    Count n = 0;
    for (const auto& e : entries_) n = detail::checked_add(n, magnitude(e.second));
    return n;
  }
  Count norm_inf() const {
    Count n = 0;
    for (const auto& e : entries_) n = std::max(n, magnitude(e.second));
    return n;
  }
  Action restrict(const StateSet& q) const {
    Action a;
    for (const auto& e : entries_)
      if (q.contains(e.first)) a.entries_.push_back(e);
    return a;
  }
  std::vector<Delta> to_dense(const StateSet& states) const {
    std::vector<Delta> v(states.size(), 0);
    for (const auto& [s, d] : entries_) {
      auto i = states.index_of(s);
      if (!i) throw PreconditionError("state '" + s + "' is not declared");
      v[*i] = d;
    }
    return v;
  }
  static Action from_dense(const StateSet& states, std::span<const Delta> v) {
    Action a;
    for (std::size_t i = 0; i < v.size(); ++i) a.add_in_place(states[i], v[i]);
    return a;
  }

  friend Action operator+(const Action& a, const Action& b) {
    Action c = a;
    for (const auto& [s, d] : b.entries_) c.add_in_place(s, d);
    return c;
  }
  friend Action operator*(Delta k, const Action& a) {
    Action c;
    for (const auto& [s, d] : a.entries_) c.add_in_place(s, detail::checked_mul(k, d));
    return c;
  }

  friend bool operator==(const Action&, const Action&) = default;
  friend auto operator<=>(const Action&, const Action&) = default;

 private:
  static Count magnitude(Delta d) { return d < 0 ? static_cast<Count>(-(d + 1)) + 1 : static_cast<Count>(d); }

  void add_in_place(const std::string& s, Delta d) {
    if (d == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, const std::string& k) { return e.first < k; });
    if (it != entries_.end() && it->first == s) {
      it->second = detail::checked_add(it->second, d);
      if (it->second == 0) entries_.erase(it);
    } else {
      entries_.insert(it, Entry{s, d});
    }
  }

  std::vector<Entry> entries_;
};

/// Pair (pre, post) of configurations: consumes `pre`, produces `post`.
struct Transition {
  Configuration pre;
  Configuration post;

  /// Interaction width max(|pre|, |post|).
  Count width() const { return std::max(pre.agents(), post.agents()); }
  Count norm_inf() const { return std::max(pre.norm_inf(), post.norm_inf()); }
  Action displacement() const {
    Action a;
    for (const auto& [s, n] : post.entries()) a = a + Action{{s, static_cast<Delta>(n)}};
    for (const auto& [s, n] : pre.entries()) a = a + Action{{s, -static_cast<Delta>(n)}};
    return a;
  }
  Transition restrict(const StateSet& q) const { return {pre.restrict(q), post.restrict(q)}; }

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

inline Count interaction_width(const Transition& t) { return t.width(); }
inline Action displacement(const Transition& t) { return t.displacement(); }

/// Finite list of distinct transitions over a state set. The list order is
/// the declaration order used for deterministic exploration.
class PetriNet {
 public:
  PetriNet() = default;
  PetriNet(StateSet states, std::vector<Transition> transitions)
      : states_(std::move(states)), transitions_(std::move(transitions)) {
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
      const auto& t = transitions_[i];
      if (!t.pre.is_over(states_) || !t.post.is_over(states_))
        throw PreconditionError("transition " + std::to_string(i) + " uses an undeclared state");
      for (std::size_t j = 0; j < i; ++j)
        if (transitions_[j] == t) throw PreconditionError("duplicate transition " + std::to_string(i));
    }
  }

  const StateSet& states() const { return states_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t size() const { return transitions_.size(); }
  const Transition& operator[](std::size_t i) const { return transitions_[i]; }

  /// max over transitions of the largest multiset coefficient; 0 for an empty net.
  Count norm_inf() const {
    Count n = 0;
    for (const auto& t : transitions_) n = std::max(n, t.norm_inf());
    return n;
  }
  /// Largest interaction width of a transition.
  Count width() const {
    Count n = 0;
    for (const auto& t : transitions_) n = std::max(n, t.width());
    return n;
  }
  bool is_conservative() const {
    return std::all_of(transitions_.begin(), transitions_.end(),
                       [](const Transition& t) { return t.pre.agents() == t.post.agents(); });
  }

  /// The projected net over `q` as a set (duplicates after projection merged).
  PetriNet restrict(const StateSet& q) const {
    std::vector<Transition> out;
    for (const auto& t : transitions_) {
      auto r = t.restrict(q);
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
    }
    return PetriNet(q, std::move(out));
  }

  friend bool operator==(const PetriNet&, const PetriNet&) = default;

 private:
  StateSet states_;
  std::vector<Transition> transitions_;
};

inline Count net_norm_inf(const PetriNet& n) { return n.norm_inf(); }

enum class Output { Zero, Star, One };

inline char output_symbol(Output o) {
  switch (o) {
    case Output::Zero: return '0';
    case Output::One: return '1';
    case Output::Star: return '*';
  }
  return '?';
}

using OutputMap = std::map<std::string, Output>;

/// (P, ->*, leaders, inputs, output) with ->* the reachability relation of `net`.
class Protocol {
 public:
  Protocol(PetriNet net, Configuration leaders, StateSet inputs, OutputMap output)
      : net_(std::move(net)), leaders_(std::move(leaders)), inputs_(std::move(inputs)), output_(std::move(output)) {
    const auto& p = net_.states();
    if (p.empty()) throw PreconditionError("protocol has no states");
    if (!leaders_.is_over(p)) throw PreconditionError("leaders use an undeclared state");
    if (!inputs_.is_subset_of(p)) throw PreconditionError("input state is not declared");
    for (const auto& s : p)
      if (!output_.count(s)) throw PreconditionError("output undefined for state '" + s + "'");
    for (const auto& [s, o] : output_)
      if (!p.contains(s)) throw PreconditionError("output given for undeclared state '" + s + "'");
  }

  const PetriNet& net() const { return net_; }
  const StateSet& states() const { return net_.states(); }
  const Configuration& leaders() const { return leaders_; }
  const StateSet& inputs() const { return inputs_; }
  const OutputMap& output() const { return output_; }
  Output output(const std::string& state) const { return output_.at(state); }

  /// gamma^{-1}({o}) in declaration order.
  StateSet states_with_output(Output o) const {
    std::vector<std::string> out;
    for (const auto& s : states())
      if (output_.at(s) == o) out.push_back(s);
    return StateSet(std::move(out));
  }

  friend bool operator==(const Protocol&, const Protocol&) = default;

 private:
  PetriNet net_;
  Configuration leaders_;
  StateSet inputs_;
  OutputMap output_;
};

}  // namespace poptk
