// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// T-components, T-bottom configurations, and search for bottom-extraction
// witnesses: words rho -sigma-> alpha -w-> beta where alpha agrees with beta
// on a set Q, beta strictly grows every state outside Q, and alpha|_Q is
// bottom for the projected net.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "poptk/core.hpp"
#include "poptk/dense.hpp"
#include "poptk/reach.hpp"

namespace poptk {

struct ComponentResult {
  /// Configurations mutually reachable with the start, discovery order.
  std::vector<Configuration> members;
  /// True iff forward exploration was exhaustive, so `members` is the whole component.
  bool complete = false;
};

namespace detail {

/// Component of node 0 inside an explored graph.
inline std::vector<std::size_t> component_nodes(const ReachGraph& g) {
  auto back = g.can_reach({0});
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (back[i]) out.push_back(i);
  return out;
}

struct BottomStatus {
  std::optional<bool> bottom;
  /// Cardinal of the component when bottom.
  std::size_t component_size = 0;
};

/// Bottom test on a dense net. Negative answers come from a reachable
/// configuration that strictly covers one of its ancestors (the reachable
/// set, hence a bottom component, would be infinite) or from a reachable
/// configuration from which the start cannot even be covered.
inline BottomStatus bottom_status(const DenseNet& net, const Vec& rho, const ExplorationBudget& budget) {
  bool self_covering = false;
  auto g = explore(net, rho, budget, [&](const ReachGraph& graph, std::size_t id) {
    const Vec& v = graph.nodes[id];
    for (auto a = graph.parent[id]; a != ReachGraph::npos; a = graph.parent[a])
      if (strictly_less(graph.nodes[a], v)) {
        self_covering = true;
        return false;
      }
    return true;
  });
  if (self_covering) return {false, 0};
  if (g.exhausted) {
    auto comp = component_nodes(g);
    if (comp.size() == g.size()) return {true, comp.size()};
    return {false, 0};
  }
  BackwardCoverability back(net, rho);
  for (const auto& v : g.nodes)
    if (!back.covers(v)) return {false, 0};
  return {std::nullopt, 0};
}

inline StateSet subset_from_mask(const StateSet& p, std::uint64_t mask) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (mask >> i & 1U) names.push_back(p[i]);
  return StateSet(std::move(names));
}

inline std::uint64_t mask_from_subset(const StateSet& p, const StateSet& q) {
  std::uint64_t mask = 0;
  for (const auto& s : q) {
    auto i = p.index_of(s);
    if (!i) throw PreconditionError("state '" + s + "' is not declared");
    mask |= std::uint64_t{1} << *i;
  }
  return mask;
}

/// Subsets of an n-element set: larger first, then by mask.
inline std::vector<std::uint64_t> subsets_by_size(std::size_t n) {
  if (n >= 63) throw PreconditionError("too many states for subset enumeration");
  std::vector<std::uint64_t> masks(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](auto a, auto b) { return std::popcount(a) > std::popcount(b); });
  return masks;
}

inline Vec project(const Vec& v, std::uint64_t mask) {
  Vec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask >> i & 1U) out.push_back(v[i]);
  return out;
}

inline DenseNet project(const DenseNet& net, std::uint64_t mask) {
  DenseNet out;
  out.dim = static_cast<std::size_t>(std::popcount(mask));
  for (const auto& t : net.transitions) out.transitions.push_back({project(t.pre, mask), project(t.post, mask)});
  return out;
}

/// Words of one exact length: each reached configuration with its
/// lexicographically least word, listed in word order.
using Layer = std::vector<std::pair<Vec, FiringWord>>;

inline Layer next_layer(const DenseNet& net, const Layer& layer) {
  Layer out;
  std::unordered_map<Vec, std::size_t, VecHash> seen;
  for (const auto& [v, word] : layer)
    for (std::size_t ti = 0; ti < net.size(); ++ti) {
      auto nv = fire(v, net.transitions[ti]);
      if (!nv || seen.count(*nv)) continue;
      seen.emplace(*nv, out.size());
      FiringWord w = word;
      w.push_back(ti);
      out.emplace_back(std::move(*nv), std::move(w));
    }
  return out;
}

/// Memoized bottom tests of projections alpha|_Q.
class ProjectedBottomCache {
 public:
  ProjectedBottomCache(const DenseNet& net, ExplorationBudget budget) : net_(net), budget_(budget) {}

  BottomStatus query(const Vec& v, std::uint64_t mask) {
    auto& per_mask = cache_[mask];
    auto pv = project(v, mask);
    if (auto it = per_mask.find(pv); it != per_mask.end()) return it->second;
    auto& projected = nets_.try_emplace(mask, project(net_, mask)).first->second;
    auto status = bottom_status(projected, pv, budget_);
    per_mask.emplace(std::move(pv), status);
    return status;
  }

 private:
  const DenseNet& net_;
  ExplorationBudget budget_;
  std::map<std::uint64_t, DenseNet> nets_;
  std::map<std::uint64_t, std::unordered_map<Vec, BottomStatus, VecHash>> cache_;
};

}  // namespace detail

inline ComponentResult component(const PetriNet& net, const Configuration& rho, const ExplorationBudget& budget) {
  const auto& p = net.states();
  auto g = explore(densify(net), rho.to_dense(p), budget);
  ComponentResult r;
  r.complete = g.exhausted;
  for (auto i : detail::component_nodes(g)) r.members.push_back(Configuration::from_dense(p, g.nodes[i]));
  return r;
}

/// True/false when decided within budget, nullopt otherwise.
inline std::optional<bool> is_bottom(const PetriNet& net, const Configuration& rho, const ExplorationBudget& budget) {
  return detail::bottom_status(densify(net), rho.to_dense(net.states()), budget).bottom;
}

struct BottomWitness {
  FiringWord sigma;
  FiringWord w;
  StateSet q;
  Configuration alpha;
  Configuration beta;
  /// Cardinal of the T|_Q-component of alpha|_Q.
  std::size_t component_size = 0;

  /// Largest of |sigma|, |w|, d*||alpha||, d*||beta|| (all bounded together by b).
  Count max_size(std::size_t d) const {
    Count m = std::max<Count>(sigma.size(), w.size());
    m = std::max(m, detail::checked_mul<Count>(d, alpha.norm_inf()));
    return std::max(m, detail::checked_mul<Count>(d, beta.norm_inf()));
  }
};

/// Searches witnesses by increasing |sigma|+|w|, then |sigma|, then word
/// order; the first hit is returned. Exploration depth is bounded by
/// budget.max_depth (default 64) and each layer and nested search by
/// budget.max_configurations.
inline std::optional<BottomWitness> extract_bottom(const PetriNet& net, const Configuration& rho,
                                                   const ExplorationBudget& budget) {
  budget.validate();
  const auto& p = net.states();
  const auto dense = densify(net);
  const std::size_t max_len = budget.max_depth.value_or(64);
  const auto masks = detail::subsets_by_size(p.size());
  detail::ProjectedBottomCache bottoms(dense, budget);

  std::vector<detail::Layer> sigma_layers{{{rho.to_dense(p), {}}}};
  // w-layers per alpha, grown on demand.
  std::unordered_map<Vec, std::vector<detail::Layer>, VecHash> w_layers;
  auto w_layer = [&](const Vec& alpha, std::size_t len) -> const detail::Layer& {
    auto& layers = w_layers[alpha];
    if (layers.empty()) layers.push_back({{alpha, {}}});
    while (layers.size() <= len) layers.push_back(detail::next_layer(dense, layers.back()));
    return layers[len];
  };

  for (std::size_t total = 0; total <= max_len; ++total) {
    for (std::size_t s = 0; s <= total; ++s) {
      while (sigma_layers.size() <= s) sigma_layers.push_back(detail::next_layer(dense, sigma_layers.back()));
      for (const auto& [alpha, sigma] : sigma_layers[s]) {
        const auto& betas = w_layer(alpha, total - s);
        if (betas.size() > budget.max_configurations) return std::nullopt;
        for (const auto& [beta, w] : betas) {
          for (auto mask : masks) {
            bool ok = true;
            for (std::size_t i = 0; i < p.size() && ok; ++i)
              ok = (mask >> i & 1U) ? alpha[i] == beta[i] : alpha[i] < beta[i];
            if (!ok) continue;
            auto status = bottoms.query(alpha, mask);
            if (status.bottom != true) continue;
            BottomWitness bw;
            bw.sigma = sigma;
            bw.w = w;
            bw.q = detail::subset_from_mask(p, mask);
            bw.alpha = Configuration::from_dense(p, alpha);
            bw.beta = Configuration::from_dense(p, beta);
            bw.component_size = status.component_size;
            return bw;
          }
        }
      }
      if (sigma_layers[s].size() > budget.max_configurations) return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Re-verifies the witness conditions with the public reach/bottom
/// primitives. Returns one message per failed condition.
inline std::vector<std::string> check_bottom_witness(const PetriNet& net, const Configuration& rho,
                                                     const BottomWitness& bw, const ExplorationBudget& budget) {
  std::vector<std::string> failures;
  if (!bw.q.is_subset_of(net.states())) failures.push_back("Q is not a subset of P");
  auto alpha = fire_word(net, rho, bw.sigma);
  if (!alpha || *alpha != bw.alpha) failures.push_back("(1) rho does not reach alpha by sigma");
  auto beta = fire_word(net, bw.alpha, bw.w);
  if (!beta || *beta != bw.beta) failures.push_back("(1) alpha does not reach beta by w");
  if (bw.alpha.restrict(bw.q) != bw.beta.restrict(bw.q)) failures.push_back("(2) alpha|_Q != beta|_Q");
  for (const auto& s : net.states().minus(bw.q))
    if (!(bw.alpha[s] < bw.beta[s])) failures.push_back("(3) beta does not exceed alpha on " + s);
  const auto projected = net.restrict(bw.q);
  const auto a_q = bw.alpha.restrict(bw.q);
  if (is_bottom(projected, a_q, budget) != true) failures.push_back("(4) alpha|_Q is not T|_Q-bottom");
  auto comp = component(projected, a_q, budget);
  if (!comp.complete) failures.push_back("(5) T|_Q-component of alpha|_Q is not finite within budget");
  else if (comp.members.size() != bw.component_size)
    failures.push_back("(5) component has " + std::to_string(comp.members.size()) + " members, witness records " +
                       std::to_string(bw.component_size));
  return failures;
}

enum class StepKind { Pumped, Grown, Exhausted };

struct StepOutcome {
  StepKind kind = StepKind::Exhausted;
  FiringWord sigma;
  Configuration reached;
  /// Q' for Grown, Q otherwise.
  StateSet q;
  /// Cardinal of the T|_Q'-component of reached|_Q' (Grown only).
  std::size_t component_size = 0;
};

/// One growth step from a configuration whose projection on Q is bottom:
/// either pump every state outside Q while returning to rho|_Q, or reach a
/// configuration that is bottom on a strictly larger set Q'.
inline StepOutcome extract_step(const PetriNet& net, const Configuration& rho, const StateSet& q,
                                const ExplorationBudget& budget) {
  budget.validate();
  const auto& p = net.states();
  const auto dense = densify(net);
  const auto qmask = detail::mask_from_subset(p, q);
  detail::ProjectedBottomCache bottoms(dense, budget);
  const Vec start = rho.to_dense(p);
  auto pre = bottoms.query(start, qmask);
  if (!pre.bottom) throw PreconditionError("bottom status of rho|_Q could not be decided within budget");
  if (!*pre.bottom) throw PreconditionError("rho|_Q is not T|_Q-bottom");

  const std::size_t max_len = budget.max_depth.value_or(64);
  const auto masks = detail::subsets_by_size(p.size());
  detail::Layer layer{{start, {}}};
  for (std::size_t len = 0; len <= max_len && !layer.empty(); ++len) {
    if (layer.size() > budget.max_configurations) break;
    for (const auto& [v, word] : layer) {
      bool pumped = true;
      for (std::size_t i = 0; i < p.size() && pumped; ++i)
        pumped = (qmask >> i & 1U) ? v[i] == start[i] : v[i] > start[i];
      if (pumped) return {StepKind::Pumped, word, Configuration::from_dense(p, v), q, pre.component_size};
      for (auto mask : masks) {
        if ((mask & qmask) != qmask || mask == qmask) continue;
        auto st = bottoms.query(v, mask);
        if (st.bottom == true)
          return {StepKind::Grown, word, Configuration::from_dense(p, v), detail::subset_from_mask(p, mask),
                  st.component_size};
      }
    }
    layer = detail::next_layer(dense, layer);
  }
  return {StepKind::Exhausted, {}, {}, q, 0};
}

}  // namespace poptk
