// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multicycle reduction: from a multicycle with large Parikh image or large
// displacement, a short multicycle with the same displacement signs that
// vanishes on a chosen set of states.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "poptk/bignum.hpp"
#include "poptk/core.hpp"
#include "poptk/cpn.hpp"
#include "poptk/hilbert.hpp"

namespace poptk {

/// (1 + 2|S| ||T||)^(d(d+1)) with d = |P|.
inline BigNat reduction_factor(const ControlGraph& g) {
  const auto d = static_cast<unsigned long>(g.net().states().size());
  BigNat base = BigNat(1) + BigNat(2) * BigNat(static_cast<unsigned long>(g.num_controls())) *
                                BigNat(static_cast<unsigned long>(g.net().norm_inf()));
  return pow(base, BigNat(d * (d + 1)));
}

/// (|E| + d) (1 + 2|S| ||T||)^(d(d+1)), the length bound on the reduced multicycle.
inline BigNat reduction_length_bound(const ControlGraph& g) {
  const auto d = g.net().states().size();
  return BigNat(static_cast<unsigned long>(g.num_edges() + d)) * reduction_factor(g);
}

namespace detail {

inline BigNat to_big(Count c) {
  BigNat b;
  mpz_import(b.get_mpz_t(), 1, -1, sizeof(c), 0, 0, &c);
  return b;
}

inline BigNat big_abs(Delta v) {
  if (v >= 0) return to_big(static_cast<Count>(v));
  return to_big(static_cast<Count>(-(v + 1)) + 1);
}

}  // namespace detail

/// Checks the four postconditions of a reduction of `theta` to `reduced`.
/// Returns one message per violated clause; empty means the reduction is valid.
inline std::vector<std::string> check_reduction(const ControlGraph& g, const Multicycle& theta, const StateSet& qr,
                                                const BigNat& k, const Multicycle& reduced) {
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < reduced.size(); ++i)
    if (!is_cycle(g, reduced[i])) failures.push_back("member " + std::to_string(i) + " is not a cycle");
  if (!failures.empty()) return failures;

  const auto before = multicycle_displacement(g, theta);
  const auto after = multicycle_displacement(g, reduced);
  for (const auto& p : g.net().states()) {
    const Delta b = before[p], a = after[p];
    const BigNat mag = detail::big_abs(b);
    if (b <= 0 && a > 0) failures.push_back("sign: " + p + " should not increase");
    if (b < 0 && mag >= k && a >= 0) failures.push_back("sign: " + p + " should decrease");
    if (b >= 0 && a < 0) failures.push_back("sign: " + p + " should not decrease");
    if (b > 0 && mag >= k && a <= 0) failures.push_back("sign: " + p + " should increase");
  }
  for (const auto& q : qr)
    if (after[q] != 0) failures.push_back("zero: displacement on " + q + " is " + std::to_string(after[q]));
  const auto before_parikh = parikh(theta);
  const auto after_parikh = parikh(reduced);
  for (const auto& [e, n] : before_parikh)
    if (detail::to_big(n) >= k && !after_parikh.contains(e))
      failures.push_back("edges: edge " + std::to_string(e) + " is lost");
  if (detail::to_big(multicycle_length(reduced)) > reduction_length_bound(g))
    failures.push_back("length: " + std::to_string(multicycle_length(reduced)) + " exceeds the bound");
  return failures;
}

/// Builds a short multicycle satisfying the reduction postconditions.
///
/// Actions are the distinct displacements of the simple cycles of `theta`;
/// each action keeps the simple cycles that realize it so that edges of
/// large multiplicity can be carried over. The result is realized as one
/// Euler cycle per connected component of its support, anchored at the
/// least control of the component.
inline Multicycle reduce_multicycle(const ControlGraph& g, const Multicycle& theta, const StateSet& qr,
                                    const BigNat& k) {
  const auto& states = g.net().states();
  if (!qr.is_subset_of(states)) throw PreconditionError("Qr is not a subset of the net's states");
  if (g.net().norm_inf() == 0) throw PreconditionError("||T|| must be positive");
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (!is_cycle(g, theta[i])) throw PreconditionError("member " + std::to_string(i) + " is not a cycle");
  const auto total = multicycle_displacement(g, theta);
  const BigNat factor = reduction_factor(g);
  if (!(k > detail::to_big(total.restrict(qr).norm1()) * factor))
    throw PreconditionError("k must exceed ||Delta(Theta)|_Qr||_1 (1 + 2|S| ||T||)^(d(d+1))");

  Multicycle simple;
  for (const auto& c : theta)
    for (auto& s : decompose_simple(g, c)) simple.push_back(std::move(s));

  // actions: distinct displacements in first-occurrence order
  DiophantineSystem sys;
  sys.states = states;
  std::vector<std::vector<std::size_t>> members;  // simple cycles per action
  std::vector<Count> g_count;
  for (std::size_t i = 0; i < simple.size(); ++i) {
    auto a = path_displacement(g, simple[i]);
    auto it = std::find(sys.actions.begin(), sys.actions.end(), a);
    if (it == sys.actions.end()) {
      sys.action_names.push_back("a" + std::to_string(sys.actions.size() + 1));
      sys.actions.push_back(std::move(a));
      members.push_back({i});
      g_count.push_back(1);
    } else {
      auto idx = static_cast<std::size_t>(it - sys.actions.begin());
      members[idx].push_back(i);
      ++g_count[idx];
    }
  }
  std::map<std::string, Count> f;
  for (const auto& p : states) {
    sys.signs[p] = total[p] >= 0 ? 1 : -1;
    f[p] = static_cast<Count>(total[p] >= 0 ? total[p] : -total[p]);
  }

  const auto basis = hilbert_basis(sys);
  auto parts = decompose_solution(sys, basis, HilbertElement{Configuration(f), g_count});
  if (!parts) throw Error("reduce_multicycle: (f, g) does not decompose over the Hilbert basis");
  auto in_h0 = [&](std::size_t b) {
    return std::all_of(qr.begin(), qr.end(), [&](const std::string& q) { return basis[b].alpha[q] == 0; });
  };

  // selections: basis element plus, for an edge, the action and simple cycle carrying it
  struct Pick {
    std::size_t element;
    std::optional<std::pair<std::size_t, std::size_t>> carrier;  // (action, simple cycle)
  };
  std::vector<Pick> picks;
  const auto counts = parikh(theta);
  for (const auto& [e, n] : counts) {
    if (detail::to_big(n) < k) continue;
    std::optional<Pick> pick;
    for (auto b : *parts) {
      if (!in_h0(b)) continue;
      for (std::size_t a = 0; a < sys.actions.size() && !pick; ++a) {
        if (basis[b].beta[a] == 0) continue;
        for (auto c : members[a])
          if (std::find(simple[c].begin(), simple[c].end(), e) != simple[c].end()) {
            pick = Pick{b, std::pair{a, c}};
            break;
          }
      }
      if (pick) break;
    }
    if (!pick) throw Error("reduce_multicycle: no H0 element carries edge " + std::to_string(e));
    picks.push_back(*pick);
  }
  for (const auto& p : states) {
    if (detail::big_abs(total[p]) < k) continue;
    auto it = std::find_if(parts->begin(), parts->end(),
                           [&](std::size_t b) { return in_h0(b) && basis[b].alpha[p] > 0; });
    if (it == parts->end()) throw Error("reduce_multicycle: no H0 element moves state " + p);
    picks.push_back(Pick{*it, std::nullopt});
  }

  // realize beta' with the required carriers first, then the first cycle of each action
  std::vector<Count> beta(sys.actions.size(), 0);
  std::vector<std::vector<std::size_t>> required(sys.actions.size());
  for (const auto& pick : picks) {
    for (std::size_t a = 0; a < beta.size(); ++a) beta[a] = detail::checked_add(beta[a], basis[pick.element].beta[a]);
    if (pick.carrier) required[pick.carrier->first].push_back(pick.carrier->second);
  }
  ParikhImage phi;
  for (std::size_t a = 0; a < beta.size(); ++a) {
    for (Count j = 0; j < beta[a]; ++j) {
      auto c = j < required[a].size() ? required[a][j] : members[a].front();
      for (auto e : simple[c]) ++phi[e];
    }
  }

  // one Euler cycle per weakly connected component of the support
  std::vector<std::size_t> root(g.num_controls());
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const auto& [e, n] : phi) {
    auto a = find(g.edge_source(e)), b = find(g.edge_target(e));
    if (a != b) root[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, ParikhImage> by_component;
  for (const auto& [e, n] : phi) by_component[find(g.edge_source(e))][e] = n;
  Multicycle out;
  for (const auto& [anchor, part] : by_component) out.push_back(euler_cycle(g, part, anchor));
  return out;
}

}  // namespace poptk
