// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense-vector view of nets and configurations, used by every exploration
// routine. Indices follow the declaration order of a StateSet.

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "poptk/core.hpp"

namespace poptk {

using Vec = std::vector<Count>;

struct VecHash {
  std::size_t operator()(const Vec& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Count x : v) {
      h ^= std::hash<Count>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline bool leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool strictly_less(const Vec& a, const Vec& b) { return a != b && leq(a, b); }

struct DenseTransition {
  Vec pre;
  Vec post;
};

/// Transitions of a net (or of a projection of it) as dense vectors. Index
/// i always corresponds to transition i of the source net, so projections
/// may contain duplicates.
struct DenseNet {
  std::size_t dim = 0;
  std::vector<DenseTransition> transitions;

  std::size_t size() const { return transitions.size(); }
};

/// T|_Q over the state set `q`, keeping one dense transition per source transition.
inline DenseNet densify(const PetriNet& net, const StateSet& q) {
  DenseNet d;
  d.dim = q.size();
  for (const auto& t : net.transitions()) {
    auto r = t.restrict(q);
    d.transitions.push_back({r.pre.to_dense(q), r.post.to_dense(q)});
  }
  return d;
}

inline DenseNet densify(const PetriNet& net) { return densify(net, net.states()); }

inline bool enabled(const Vec& c, const DenseTransition& t) { return leq(t.pre, c); }

/// c - pre + post when enabled.
inline std::optional<Vec> fire(const Vec& c, const DenseTransition& t) {
  if (!enabled(c, t)) return std::nullopt;
  Vec out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = detail::checked_add(c[i] - t.pre[i], t.post[i]);
  return out;
}

inline std::optional<Vec> fire_word(Vec c, const DenseNet& net, const std::vector<std::size_t>& word) {
  for (std::size_t idx : word) {
    auto next = fire(c, net.transitions.at(idx));
    if (!next) return std::nullopt;
    c = std::move(*next);
  }
  return c;
}

inline Count norm_inf(const Vec& v) {
  Count m = 0;
  for (Count x : v) m = std::max(m, x);
  return m;
}

struct ExplorationBudget {
  std::size_t max_configurations = 1'000'000;
  std::optional<std::size_t> max_depth;

  void validate() const {
    if (max_configurations == 0) throw PreconditionError("exploration budget must allow at least one configuration");
  }
};

/// Explicit reachability graph built breadth-first. Node 0 is the start;
/// nodes are numbered in discovery order, successors in transition order.
struct ReachGraph {
  struct Edge {
    std::size_t transition;
    std::size_t target;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Vec> nodes;
  std::vector<std::vector<Edge>> successors;
  std::vector<std::size_t> parent;             // BFS tree parent, npos for the root
  std::vector<std::size_t> parent_transition;  // transition fired from parent
  std::vector<std::size_t> depth;
  std::unordered_map<Vec, std::size_t, VecHash> index;
  /// True iff the whole forward closure was enumerated within budget.
  bool exhausted = true;

  std::size_t size() const { return nodes.size(); }

  std::optional<std::size_t> find(const Vec& v) const {
    auto it = index.find(v);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  /// BFS-tree word from the root to `node` (shortest, lexicographically first).
  std::vector<std::size_t> word_to(std::size_t node) const {
    std::vector<std::size_t> w;
    while (parent[node] != npos) {
      w.push_back(parent_transition[node]);
      node = parent[node];
    }
    return {w.rbegin(), w.rend()};
  }

  /// Nodes from which one of `targets` is reachable inside the explored graph.
  std::vector<bool> can_reach(const std::vector<std::size_t>& targets) const {
    std::vector<std::vector<std::size_t>> pred(size());
    for (std::size_t u = 0; u < size(); ++u)
      for (const auto& e : successors[u]) pred[e.target].push_back(u);
    std::vector<bool> mark(size(), false);
    std::deque<std::size_t> queue;
    for (auto t : targets)
      if (!mark[t]) {
        mark[t] = true;
        queue.push_back(t);
      }
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto u : pred[v])
        if (!mark[u]) {
          mark[u] = true;
          queue.push_back(u);
        }
    }
    return mark;
  }
};

/// Breadth-first exploration. `on_new(graph, node)` is called for every newly
/// discovered node and may return false to stop early (the graph is then
/// marked as not exhausted).
template <class OnNew>
ReachGraph explore(const DenseNet& net, const Vec& start, const ExplorationBudget& budget, OnNew&& on_new) {
  budget.validate();
  ReachGraph g;
  auto add = [&g](Vec v, std::size_t parent, std::size_t t, std::size_t depth) {
    std::size_t id = g.nodes.size();
    g.index.emplace(v, id);
    g.nodes.push_back(std::move(v));
    g.successors.emplace_back();
    g.parent.push_back(parent);
    g.parent_transition.push_back(t);
    g.depth.push_back(depth);
    return id;
  };
  add(start, ReachGraph::npos, 0, 0);
  if (!on_new(g, std::size_t{0})) {
    g.exhausted = false;
    return g;
  }
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    bool at_depth_limit = budget.max_depth && g.depth[u] >= *budget.max_depth;
    for (std::size_t ti = 0; ti < net.size(); ++ti) {
      auto next = fire(g.nodes[u], net.transitions[ti]);
      if (!next) continue;
      if (auto known = g.find(*next)) {
        g.successors[u].push_back({ti, *known});
        continue;
      }
      if (at_depth_limit || g.nodes.size() >= budget.max_configurations) {
        g.exhausted = false;
        continue;
      }
      auto id = add(std::move(*next), u, ti, g.depth[u] + 1);
      g.successors[u].push_back({ti, id});
      if (!on_new(g, id)) {
        g.exhausted = false;
        return g;
      }
    }
  }
  return g;
}

inline ReachGraph explore(const DenseNet& net, const Vec& start, const ExplorationBudget& budget) {
  return explore(net, start, budget, [](const ReachGraph&, std::size_t) { return true; });
}

}  // namespace poptk
