// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Firing semantics, budgeted reachability, backward coverability, lifting of
// projected runs, and the Rackoff bound on covering words.

#include <algorithm>
#include <optional>
#include <vector>

#include "poptk/bignum.hpp"
#include "poptk/core.hpp"
#include "poptk/dense.hpp"

namespace poptk {

/// Indices into the transition list of a net, fired left to right.
using FiringWord = std::vector<std::size_t>;

struct CoverWitness {
  FiringWord word;
  Configuration reached;
};

/// c - pre + post when c >= pre componentwise.
inline std::optional<Configuration> fire(const Configuration& c, const Transition& t) {
  if (!t.pre.leq(c)) return std::nullopt;
  std::map<std::string, Count> m;
  for (const auto& [s, n] : c.entries()) m[s] = n;
  for (const auto& [s, n] : t.pre.entries()) m[s] -= n;
  for (const auto& [s, n] : t.post.entries()) m[s] = detail::checked_add(m[s], n);
  return Configuration(m);
}

inline std::optional<Configuration> fire_word(const PetriNet& net, Configuration c, const FiringWord& word) {
  for (std::size_t idx : word) {
    if (idx >= net.size()) throw PreconditionError("transition index " + std::to_string(idx) + " out of range");
    auto next = fire(c, net[idx]);
    if (!next) return std::nullopt;
    c = std::move(*next);
  }
  return c;
}

struct ReachableSet {
  /// Breadth-first discovery order.
  std::vector<Configuration> configurations;
  /// True iff the closure completed within budget; otherwise an under-approximation.
  bool exhausted = false;
};

inline ReachableSet reachable_set(const PetriNet& net, const Configuration& c, const ExplorationBudget& budget) {
  const auto& p = net.states();
  auto g = explore(densify(net), c.to_dense(p), budget);
  ReachableSet out;
  out.exhausted = g.exhausted;
  out.configurations.reserve(g.size());
  for (const auto& v : g.nodes) out.configurations.push_back(Configuration::from_dense(p, v));
  return out;
}

/// Backward coverability for one target: the upward-closed set of
/// configurations from which the target can be covered, computed as a
/// minimal-basis fixpoint. Elements are generated level by level, so the
/// level of an element is the length of a shortest covering word from it.
class BackwardCoverability {
 public:
  BackwardCoverability(DenseNet net, Vec target) : net_(std::move(net)) {
    if (target.size() != net_.dim) throw PreconditionError("target dimension mismatch");
    elements_.push_back({std::move(target), 0, true});
    std::vector<std::size_t> frontier{0};
    for (std::size_t level = 1; !frontier.empty(); ++level) {
      std::vector<std::size_t> added;
      for (std::size_t idx : frontier) {
        for (const auto& t : net_.transitions) {
          Vec pred = predecessor(elements_[idx].v, t);
          if (dominated(pred)) continue;
          for (auto& e : elements_)
            if (e.active && leq(pred, e.v)) e.active = false;
          elements_.push_back({std::move(pred), level, true});
          added.push_back(elements_.size() - 1);
        }
      }
      frontier.clear();
      for (auto id : added)
        if (elements_[id].active) frontier.push_back(id);
    }
  }

  /// Length of a shortest word from `from` covering the target, if any.
  std::optional<std::size_t> distance(const Vec& from) const {
    std::optional<std::size_t> best;
    for (const auto& e : elements_)
      if (leq(e.v, from) && (!best || e.level < *best)) best = e.level;
    return best;
  }

  bool covers(const Vec& from) const {
    return std::any_of(elements_.begin(), elements_.end(), [&](const Element& e) { return e.active && leq(e.v, from); });
  }

  /// Shortest covering word; among shortest words the lexicographically
  /// first one in transition declaration order.
  std::optional<FiringWord> witness(const Vec& from) const {
    auto d = distance(from);
    if (!d) return std::nullopt;
    FiringWord word;
    Vec cur = from;
    for (std::size_t remaining = *d; remaining > 0; --remaining) {
      bool stepped = false;
      for (std::size_t ti = 0; ti < net_.size() && !stepped; ++ti) {
        auto next = fire(cur, net_.transitions[ti]);
        if (!next) continue;
        auto nd = distance(*next);
        if (nd && *nd < remaining) {
          word.push_back(ti);
          cur = std::move(*next);
          stepped = true;
        }
      }
      if (!stepped) throw Error("backward coverability: witness replay failed");
    }
    return word;
  }

  /// Minimal elements of the fixpoint.
  std::vector<Vec> basis() const {
    std::vector<Vec> out;
    for (const auto& e : elements_)
      if (e.active) out.push_back(e.v);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Element {
    Vec v;
    std::size_t level;
    bool active;
  };

  // Least c with c >= pre and c - pre + post >= m.
  static Vec predecessor(const Vec& m, const DenseTransition& t) {
    Vec p(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      p[i] = m[i] > t.post[i] ? detail::checked_add(t.pre[i], m[i] - t.post[i]) : t.pre[i];
    return p;
  }

  bool dominated(const Vec& v) const {
    return std::any_of(elements_.begin(), elements_.end(), [&](const Element& e) { return e.active && leq(e.v, v); });
  }

  DenseNet net_;
  std::vector<Element> elements_;
};

/// A witness iff some configuration reachable from `from` covers `target`.
inline std::optional<CoverWitness> coverable(const PetriNet& net, const Configuration& from, const Configuration& target) {
  const auto& p = net.states();
  auto dense = densify(net);
  BackwardCoverability bc(dense, target.to_dense(p));
  auto start = from.to_dense(p);
  auto word = bc.witness(start);
  if (!word) return std::nullopt;
  auto reached = fire_word(start, dense, *word);
  return CoverWitness{*word, Configuration::from_dense(p, *reached)};
}

/// Lift a run of the projected net T|_Q back to the full net: given that
/// alpha|_Q reaches rho under the projection of `word` and that alpha has
/// at least |word|*||T|| agents in every state outside Q, the full run is
/// enabled and ends in some beta with beta|_Q = rho.
inline Configuration lift(const PetriNet& net, const Configuration& alpha, const StateSet& q, const FiringWord& word,
                          const Configuration& rho) {
  for (auto idx : word)
    if (idx >= net.size()) throw PreconditionError("transition index " + std::to_string(idx) + " out of range");
  if (!rho.is_over(q)) throw PreconditionError("rho is not a configuration over Q");
  auto projected = densify(net, q);
  auto end = fire_word(alpha.restrict(q).to_dense(q), projected, word);
  if (!end) throw PreconditionError("projected word is not enabled from alpha|_Q");
  if (Configuration::from_dense(q, *end) != rho) throw PreconditionError("projected run does not reach rho");

  const Count budget = detail::checked_mul(static_cast<Count>(word.size()), net.norm_inf());
  for (const auto& p : net.states().minus(q))
    if (alpha[p] < budget)
      throw PreconditionError("state '" + p + "' has " + std::to_string(alpha[p]) + " agents, lifting needs " +
                              std::to_string(budget));

  auto beta = fire_word(net, alpha, word);
  if (!beta) throw Error("lift: full run disabled although preconditions hold");
  return *beta;
}

/// (target_norm + net_norm)^(num_states^num_states), with 0^0 = 1.
inline FactoredNat rackoff_bound(std::uint64_t num_states, std::uint64_t target_norm, std::uint64_t net_norm) {
  BigNat exponent = pow(BigNat(num_states), BigNat(num_states));
  return FactoredNat(detail::checked_add(target_norm, net_norm)).pow(exponent);
}

}  // namespace poptk
