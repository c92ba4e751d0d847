// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Petri nets with control-states: a finite set of controls (configurations
// over Q), edges labelled by transitions, and the path/cycle algebra on top
// (Parikh images, displacements, Euler reconstruction, total cycles, simple
// cycle decomposition).

#include <algorithm>
#include <concepts>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poptk/bottom.hpp"
#include "poptk/core.hpp"
#include "poptk/dense.hpp"
#include "poptk/reach.hpp"

namespace poptk {

/// Anything with numbered controls and numbered directed edges between them.
template <class G>
concept EdgeGraph = requires(const G& g, std::size_t i) {
  { g.num_controls() } -> std::convertible_to<std::size_t>;
  { g.num_edges() } -> std::convertible_to<std::size_t>;
  { g.edge_source(i) } -> std::convertible_to<std::size_t>;
  { g.edge_target(i) } -> std::convertible_to<std::size_t>;
};

/// Edge indices; consecutive edges chain.
using EdgePath = std::vector<std::size_t>;
/// Sequence of closed paths.
using Multicycle = std::vector<EdgePath>;
/// Edge index -> occurrence count, zeros omitted.
using ParikhImage = std::map<std::size_t, Count>;

/// Plain directed multigraph with named nodes and edges.
class Multigraph {
 public:
  struct Arc {
    std::string name;
    std::size_t source;
    std::size_t target;
  };

  Multigraph(std::vector<std::string> nodes, std::vector<Arc> arcs) : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    for (const auto& a : arcs_)
      if (a.source >= nodes_.size() || a.target >= nodes_.size())
        throw PreconditionError("edge '" + a.name + "' has an unknown endpoint");
  }

  std::size_t num_controls() const { return nodes_.size(); }
  std::size_t num_edges() const { return arcs_.size(); }
  std::size_t edge_source(std::size_t i) const { return arcs_.at(i).source; }
  std::size_t edge_target(std::size_t i) const { return arcs_.at(i).target; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::optional<std::size_t> node_index(const std::string& n) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), n);
    if (it == nodes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }
  std::optional<std::size_t> edge_index(const std::string& n) const {
    for (std::size_t i = 0; i < arcs_.size(); ++i)
      if (arcs_[i].name == n) return i;
    return std::nullopt;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<Arc> arcs_;
};

/// (S, T, E): controls are configurations over Q, an edge (s, t, s') means
/// s fires t|_Q into s'.
class ControlGraph {
 public:
  struct Edge {
    std::size_t source;
    std::size_t transition;
    std::size_t target;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  ControlGraph(PetriNet net, StateSet q, std::vector<Configuration> controls, std::vector<Edge> edges)
      : net_(std::move(net)), q_(std::move(q)), controls_(std::move(controls)), edges_(std::move(edges)) {
    if (controls_.empty()) throw PreconditionError("a control graph needs at least one control");
    for (std::size_t i = 0; i < controls_.size(); ++i) {
      if (!controls_[i].is_over(q_)) throw PreconditionError("control " + std::to_string(i) + " is not over Q");
      for (std::size_t j = 0; j < i; ++j)
        if (controls_[i] == controls_[j]) throw PreconditionError("duplicate control");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.source >= controls_.size() || e.target >= controls_.size() || e.transition >= net_.size())
        throw PreconditionError("edge " + std::to_string(i) + " is out of range");
      auto next = fire(controls_[e.source], net_[e.transition].restrict(q_));
      if (!next || *next != controls_[e.target])
        throw PreconditionError("edge " + std::to_string(i) + " is not a projected firing");
      for (std::size_t j = 0; j < i; ++j)
        if (edges_[j] == e) throw PreconditionError("duplicate edge");
    }
  }

  std::size_t num_controls() const { return controls_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t edge_source(std::size_t i) const { return edges_.at(i).source; }
  std::size_t edge_target(std::size_t i) const { return edges_.at(i).target; }

  const PetriNet& net() const { return net_; }
  const StateSet& q() const { return q_; }
  const std::vector<Configuration>& controls() const { return controls_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  std::optional<std::size_t> control_index(const Configuration& c) const {
    auto it = std::find(controls_.begin(), controls_.end(), c);
    if (it == controls_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - controls_.begin());
  }

  Action edge_displacement(std::size_t i) const { return displacement(net_[edge(i).transition]); }

 private:
  PetriNet net_;
  StateSet q_;
  std::vector<Configuration> controls_;
  std::vector<Edge> edges_;
};

/// Controls: the T|_Q-component of `seed`; edges: every projected firing
/// inside it, ordered by (source, transition).
inline ControlGraph build_control_graph(const PetriNet& net, const StateSet& q, const Configuration& seed,
                                        const ExplorationBudget& budget) {
  if (!q.is_subset_of(net.states())) throw PreconditionError("Q is not a subset of the net's states");
  if (!seed.is_over(q)) throw PreconditionError("seed is not a configuration over Q");
  auto dense = densify(net, q);
  auto g = explore(dense, seed.to_dense(q), budget);
  if (!g.exhausted) throw PreconditionError("component of the seed is not finite within budget");
  auto comp = detail::component_nodes(g);
  std::vector<Configuration> controls;
  std::map<std::size_t, std::size_t> renumber;
  for (auto id : comp) {
    renumber[id] = controls.size();
    controls.push_back(Configuration::from_dense(q, g.nodes[id]));
  }
  std::vector<ControlGraph::Edge> edges;
  for (auto id : comp)
    for (const auto& e : g.successors[id])
      if (auto it = renumber.find(e.target); it != renumber.end()) edges.push_back({renumber[id], e.transition, it->second});
  return ControlGraph(net, q, std::move(controls), std::move(edges));
}

inline ParikhImage parikh(const EdgePath& path) {
  ParikhImage m;
  for (auto e : path) ++m[e];
  return m;
}

inline ParikhImage parikh(const Multicycle& cycles) {
  ParikhImage m;
  for (const auto& c : cycles)
    for (auto e : c) ++m[e];
  return m;
}

template <EdgeGraph G>
bool is_path(const G& g, const EdgePath& path) {
  for (auto e : path)
    if (e >= g.num_edges()) return false;
  for (std::size_t j = 1; j < path.size(); ++j)
    if (g.edge_target(path[j - 1]) != g.edge_source(path[j])) return false;
  return true;
}

template <EdgeGraph G>
bool is_cycle(const G& g, const EdgePath& path) {
  return is_path(g, path) && (path.empty() || g.edge_source(path.front()) == g.edge_target(path.back()));
}

inline Action path_displacement(const ControlGraph& g, const EdgePath& path) {
  if (!is_path(g, path)) throw PreconditionError("not a path of the control graph");
  Action a;
  for (auto e : path) a = a + g.edge_displacement(e);
  return a;
}

inline Action multicycle_displacement(const ControlGraph& g, const Multicycle& cycles) {
  Action a;
  for (const auto& c : cycles) a = a + path_displacement(g, c);
  return a;
}

inline std::size_t multicycle_length(const Multicycle& cycles) {
  std::size_t n = 0;
  for (const auto& c : cycles) n += c.size();
  return n;
}

template <EdgeGraph G>
bool strongly_connected(const G& g) {
  const auto n = g.num_controls();
  if (n == 0) return false;
  auto sweep = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto from = forward ? g.edge_source(e) : g.edge_target(e);
        auto to = forward ? g.edge_target(e) : g.edge_source(e);
        if (from == v && !seen[to]) {
          seen[to] = true;
          queue.push_back(to);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return sweep(true) && sweep(false);
}

/// Closed path from `anchor` whose Parikh image is exactly `phi`
/// (Hierholzer on the multigraph with phi(e) parallel copies of e).
template <EdgeGraph G>
EdgePath euler_cycle(const G& g, const ParikhImage& phi, std::size_t anchor) {
  if (anchor >= g.num_controls()) throw PreconditionError("anchor is not a control");
  std::vector<Delta> balance(g.num_controls(), 0);
  Count total = 0;
  std::vector<std::vector<std::size_t>> out(g.num_controls());
  std::vector<Count> remaining(g.num_edges(), 0);
  for (const auto& [e, n] : phi) {
    if (e >= g.num_edges()) throw PreconditionError("edge " + std::to_string(e) + " out of range");
    if (n == 0) continue;
    remaining[e] = n;
    total = detail::checked_add(total, n);
    balance[g.edge_source(e)] -= static_cast<Delta>(n);
    balance[g.edge_target(e)] += static_cast<Delta>(n);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    if (remaining[e] > 0) out[g.edge_source(e)].push_back(e);
  if (total == 0) return {};
  for (std::size_t s = 0; s < balance.size(); ++s)
    if (balance[s] != 0) throw PreconditionError("Parikh image is not balanced at control " + std::to_string(s));
  if (out[anchor].empty()) throw PreconditionError("anchor is not incident to the support");

  std::vector<std::size_t> next(g.num_controls(), 0);
  struct Frame {
    std::size_t control;
    std::optional<std::size_t> via;
  };
  std::vector<Frame> stack{{anchor, std::nullopt}};
  EdgePath circuit;
  while (!stack.empty()) {
    auto v = stack.back().control;
    auto& adj = out[v];
    while (next[v] < adj.size() && remaining[adj[next[v]]] == 0) ++next[v];
    if (next[v] < adj.size()) {
      auto e = adj[next[v]];
      --remaining[e];
      stack.push_back({g.edge_target(e), e});
    } else {
      if (stack.back().via) circuit.push_back(*stack.back().via);
      stack.pop_back();
    }
  }
  if (circuit.size() != total) throw PreconditionError("support of the Parikh image is not connected");
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

/// Cycle from `anchor` using every edge, of length at most |E||S|: one
/// simple cycle through each edge not yet covered, merged with euler_cycle.
template <EdgeGraph G>
EdgePath total_cycle(const G& g, std::size_t anchor) {
  if (g.num_edges() == 0) throw PreconditionError("graph has no edges");
  if (!strongly_connected(g)) throw PreconditionError("graph is not strongly connected");
  ParikhImage phi;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (phi.count(e)) continue;  // already on an earlier cycle
    ++phi[e];
    // shortest path target(e) -> source(e)
    const auto from = g.edge_target(e), to = g.edge_source(e);
    std::vector<std::optional<std::size_t>> via(g.num_controls());
    std::vector<bool> seen(g.num_controls(), false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty() && !seen[to]) {
      auto v = queue.front();
      queue.pop_front();
      for (std::size_t f = 0; f < g.num_edges(); ++f)
        if (g.edge_source(f) == v && !seen[g.edge_target(f)]) {
          seen[g.edge_target(f)] = true;
          via[g.edge_target(f)] = f;
          queue.push_back(g.edge_target(f));
        }
    }
    for (auto v = to; v != from; v = g.edge_source(*via[v])) ++phi[*via[v]];
  }
  return euler_cycle(g, phi, anchor);
}

/// Splits a closed path into simple cycles with the same total Parikh image.
template <EdgeGraph G>
Multicycle decompose_simple(const G& g, const EdgePath& cycle) {
  if (!is_cycle(g, cycle)) throw PreconditionError("not a closed path");
  Multicycle out;
  if (cycle.empty()) return out;
  std::vector<std::size_t> controls{g.edge_source(cycle.front())};
  std::map<std::size_t, std::size_t> position{{controls.front(), 0}};
  EdgePath pending;
  for (auto e : cycle) {
    pending.push_back(e);
    auto t = g.edge_target(e);
    if (auto it = position.find(t); it != position.end()) {
      auto k = it->second;
      out.emplace_back(pending.begin() + static_cast<std::ptrdiff_t>(k), pending.end());
      pending.resize(k);
      for (std::size_t j = k + 1; j < controls.size(); ++j) position.erase(controls[j]);
      controls.resize(k + 1);
    } else {
      position[t] = controls.size();
      controls.push_back(t);
    }
  }
  return out;
}

/// Simple cycle: the visited controls s_1..s_k are distinct.
template <EdgeGraph G>
bool is_simple_cycle(const G& g, const EdgePath& cycle) {
  if (cycle.empty() || !is_cycle(g, cycle)) return false;
  std::vector<std::size_t> seen;
  for (auto e : cycle) {
    auto t = g.edge_target(e);
    if (std::find(seen.begin(), seen.end(), t) != seen.end()) return false;
    seen.push_back(t);
  }
  return true;
}

}  // namespace poptk
