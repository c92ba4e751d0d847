// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent oracles and random instance generators shared by the unit
// tests and the acceptance runner. Nothing here calls the algorithms it is
// used to check.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "poptk/poptk.hpp"

namespace poptk::testing {

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline StateSet make_states(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return StateSet(std::move(names));
}

inline Configuration random_configuration(Rng& rng, const StateSet& states, Count max_entry) {
  std::map<std::string, Count> m;
  for (const auto& s : states) m[s] = uniform(rng, 0, max_entry);
  return Configuration(m);
}

/// Random net with distinct transitions; entries of pre/post in [0, norm].
inline PetriNet random_net(Rng& rng, const StateSet& states, std::size_t max_transitions, Count norm) {
  std::vector<Transition> ts;
  const auto count = uniform(rng, 1, max_transitions);
  for (std::size_t tries = 0; ts.size() < count && tries < 100; ++tries) {
    Transition t{random_configuration(rng, states, norm), random_configuration(rng, states, norm)};
    if (t.pre == t.post) continue;
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
  }
  return PetriNet(states, std::move(ts));
}

/// Forward breadth-first search for a configuration covering `target`.
/// Returns the length of a shortest covering word, nullopt when none
/// exists, and `unknown` set when the cap stops the search first.
struct ForwardCover {
  std::optional<std::size_t> length;
  bool unknown = false;
};

inline ForwardCover forward_cover(const PetriNet& net, const Configuration& from, const Configuration& target,
                                  std::size_t cap) {
  std::map<Configuration, std::size_t> dist{{from, 0}};
  std::deque<Configuration> queue{from};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    if (target.leq(c)) return {dist[c], false};
    for (const auto& t : net.transitions()) {
      if (!t.pre.leq(c)) continue;
      std::map<std::string, Count> m;
      for (const auto& [s, n] : c.entries()) m[s] += n;
      for (const auto& [s, n] : t.pre.entries()) m[s] -= n;
      for (const auto& [s, n] : t.post.entries()) m[s] += n;
      Configuration next(m);
      if (dist.count(next)) continue;
      if (dist.size() >= cap) return {std::nullopt, true};
      dist[next] = dist[c] + 1;
      queue.push_back(next);
    }
  }
  return {std::nullopt, false};
}

/// All configurations reachable from `from`, or nullopt past the cap.
inline std::optional<std::set<Configuration>> forward_closure(const PetriNet& net, const Configuration& from,
                                                              std::size_t cap) {
  std::set<Configuration> seen{from};
  std::deque<Configuration> queue{from};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (const auto& t : net.transitions()) {
      if (!t.pre.leq(c)) continue;
      std::map<std::string, Count> m;
      for (const auto& [s, n] : c.entries()) m[s] += n;
      for (const auto& [s, n] : t.pre.entries()) m[s] -= n;
      for (const auto& [s, n] : t.post.entries()) m[s] += n;
      Configuration next(m);
      if (seen.insert(next).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(next);
      }
    }
  }
  return seen;
}

/// Minimal solutions of the system by enumeration over beta with
/// ||beta||_1 increasing, alpha forced by alpha(p) = s(p) (A beta)(p), up to
/// the Pottier box. A solution found at beta-norm N can only be dominated by
/// one of smaller beta-norm (or equal beta, hence equal alpha), so checking
/// against earlier minimal solutions is enough.
class BruteForceHilbert {
 public:
  explicit BruteForceHilbert(const DiophantineSystem& sys) : sys_(sys) {
    const auto box = pottier_bound(sys);
    if (!box.fits_ulong_p()) throw Error("box too large");
    bound_ = box.get_ui();
    for (const auto& p : sys.states) {
      signs_.push_back(sys.signs.at(p));
      std::vector<Delta> row;
      for (const auto& a : sys.actions) row.push_back(a[p]);
      rows_.push_back(row);
    }
  }

  std::vector<HilbertElement> run() {
    const std::size_t na = sys_.actions.size();
    if (na == 0) return {};
    beta_.assign(na, 0);
    for (Count norm = 1; norm <= bound_; ++norm) compose(0, norm, norm);
    std::vector<HilbertElement> out;
    for (const auto& x : found_) {
      std::vector<Count> alpha(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(rows_.size()));
      out.push_back({Configuration::from_dense(sys_.states, alpha),
                     std::vector<Count>(x.begin() + static_cast<std::ptrdiff_t>(rows_.size()), x.end())});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Count box() const { return bound_; }

 private:
  void compose(std::size_t i, Count left, Count norm) {
    if (i + 1 == beta_.size()) {
      beta_[i] = left;
      check(norm);
      return;
    }
    for (Count v = 0; v <= left; ++v) {
      beta_[i] = v;
      compose(i + 1, left - v, norm);
    }
  }

  void check(Count norm) {
    x_.clear();
    Count an = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Delta v = 0;
      for (std::size_t a = 0; a < beta_.size(); ++a) v += static_cast<Delta>(beta_[a]) * rows_[r][a];
      if (signs_[r] == 0) {
        if (v != 0) return;
        x_.push_back(0);
        continue;
      }
      Delta s = signs_[r] * v;
      if (s < 0) return;
      an += static_cast<Count>(s);
      x_.push_back(static_cast<Count>(s));
    }
    if (an + norm > bound_) return;
    x_.insert(x_.end(), beta_.begin(), beta_.end());
    for (const auto& m : found_) {
      bool le = true;
      for (std::size_t j = 0; j < m.size() && le; ++j) le = m[j] <= x_[j];
      if (le) return;
    }
    found_.push_back(x_);
  }

  const DiophantineSystem& sys_;
  Count bound_ = 0;
  std::vector<int> signs_;
  std::vector<std::vector<Delta>> rows_;
  std::vector<Count> beta_;
  std::vector<Count> x_;
  std::vector<std::vector<Count>> found_;
};

inline std::vector<HilbertElement> brute_force_hilbert(const DiophantineSystem& sys) {
  return BruteForceHilbert(sys).run();
}

inline DiophantineSystem random_system(Rng& rng, std::size_t d, std::size_t na, Delta coef) {
  DiophantineSystem sys;
  sys.states = make_states(d);
  for (const auto& p : sys.states) sys.signs[p] = uniform(rng, 0, 1) ? 1 : -1;
  for (std::size_t a = 0; a < na; ++a) {
    Action act;
    for (const auto& p : sys.states)
      act = act + Action{{p, static_cast<Delta>(uniform(rng, 0, 2 * coef)) - coef}};
    sys.action_names.push_back("a" + std::to_string(a + 1));
    sys.actions.push_back(act);
  }
  return sys;
}

/// Random strongly connected multigraph: a Hamiltonian cycle plus extras.
inline Multigraph random_strong_graph(Rng& rng, std::size_t max_nodes, std::size_t max_edges) {
  const std::size_t n = uniform(rng, 1, max_nodes);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Multigraph::Arc> arcs;
  for (std::size_t i = 0; i < n; ++i) arcs.push_back({"e" + std::to_string(arcs.size()), order[i], order[(i + 1) % n]});
  const std::size_t m = uniform(rng, n, std::max(n, max_edges));
  while (arcs.size() < m)
    arcs.push_back({"e" + std::to_string(arcs.size()), uniform(rng, 0, n - 1), uniform(rng, 0, n - 1)});
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back("c" + std::to_string(i));
  return Multigraph(nodes, arcs);
}

/// Sum of random cycles found by random walks returning to their start.
inline ParikhImage random_cycle_image(Rng& rng, const Multigraph& g, std::size_t cycles, std::size_t& anchor) {
  ParikhImage phi;
  anchor = uniform(rng, 0, g.num_controls() - 1);
  for (std::size_t k = 0; k < cycles; ++k) {
    // walk until back at anchor, capped; strongly connected so a return exists
    std::size_t v = anchor;
    std::vector<std::size_t> walk;
    for (std::size_t steps = 0; steps < 200; ++steps) {
      std::vector<std::size_t> outs;
      for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.edge_source(e) == v) outs.push_back(e);
      auto e = outs[uniform(rng, 0, outs.size() - 1)];
      walk.push_back(e);
      v = g.edge_target(e);
      if (v == anchor) break;
    }
    if (v != anchor) continue;
    for (auto e : walk) ++phi[e];
  }
  return phi;
}

inline bool chains(const Multigraph& g, const EdgePath& p) {
  for (std::size_t i = 1; i < p.size(); ++i)
    if (g.edge_target(p[i - 1]) != g.edge_source(p[i])) return false;
  return p.empty() || g.edge_target(p.back()) == g.edge_source(p.front());
}

inline ParikhImage count_edges(const EdgePath& p) {
  ParikhImage m;
  for (auto e : p) ++m[e];
  return m;
}

/// Random multicycle of a control graph: up to `count` closed random walks.
inline Multicycle random_multicycle(Rng& rng, const ControlGraph& g, std::size_t count) {
  Multicycle out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = uniform(rng, 0, g.num_controls() - 1);
    std::size_t v = start;
    EdgePath walk;
    for (std::size_t steps = 0; steps < 12; ++steps) {
      std::vector<std::size_t> outs;
      for (std::size_t e = 0; e < g.num_edges(); ++e)
        if (g.edge_source(e) == v) outs.push_back(e);
      if (outs.empty()) break;
      auto e = outs[uniform(rng, 0, outs.size() - 1)];
      walk.push_back(e);
      v = g.edge_target(e);
      if (v == start) break;
    }
    if (!walk.empty() && v == start) out.push_back(std::move(walk));
  }
  return out;
}

/// Total displacement of a multicycle, summed from raw pre/post counts.
inline std::map<std::string, std::int64_t> raw_displacement(const ControlGraph& g, const Multicycle& m) {
  std::map<std::string, std::int64_t> d;
  for (const auto& p : g.net().states()) d[p] = 0;
  for (const auto& c : m)
    for (auto e : c) {
      const auto& t = g.net()[g.edges()[e].transition];
      for (const auto& p : g.net().states())
        d[p] += static_cast<std::int64_t>(t.post[p]) - static_cast<std::int64_t>(t.pre[p]);
    }
  return d;
}

/// Re-checks the reduction postconditions from scratch: members are
/// closed paths, the four sign clauses, zero on Qr, heavy edges kept,
/// and |reduced| <= (|E|+d)(1+2|S|||T||)^(d(d+1)).
inline std::vector<std::string> reduction_failures(const ControlGraph& g, const Multicycle& theta, const StateSet& qr,
                                                   std::int64_t k, const Multicycle& reduced) {
  std::vector<std::string> out;
  for (const auto& c : reduced) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (g.edges()[c[i]].target != g.edges()[c[(i + 1) % c.size()]].source) out.push_back("member is not closed");
  }
  const auto before = raw_displacement(g, theta);
  const auto after = raw_displacement(g, reduced);
  for (const auto& [p, v] : before) {
    const auto w = after.at(p);
    if (v <= 0 && w > 0) out.push_back("clause <=0 fails on " + p);
    if (v <= -k && w >= 0) out.push_back("clause <=-k fails on " + p);
    if (v >= 0 && w < 0) out.push_back("clause >=0 fails on " + p);
    if (v >= k && w <= 0) out.push_back("clause >=k fails on " + p);
    if (qr.contains(p) && w != 0) out.push_back("nonzero on Qr at " + p);
  }
  std::map<std::size_t, std::int64_t> before_count, after_count;
  std::size_t length = 0;
  for (const auto& c : theta)
    for (auto e : c) ++before_count[e];
  for (const auto& c : reduced) {
    length += c.size();
    for (auto e : c) ++after_count[e];
  }
  for (const auto& [e, n] : before_count)
    if (n >= k && after_count[e] == 0) out.push_back("heavy edge dropped");
  Count t = 0;
  for (const auto& tr : g.net().transitions())
    for (const auto& p : g.net().states()) t = std::max({t, tr.pre[p], tr.post[p]});
  const unsigned long d = g.net().states().size();
  mpz_class factor;
  mpz_ui_pow_ui(factor.get_mpz_t(), 1 + 2 * g.num_controls() * t, d * (d + 1));
  if (mpz_class(static_cast<unsigned long>(length)) > mpz_class(static_cast<unsigned long>(g.num_edges() + d)) * factor)
    out.push_back("length bound exceeded");
  return out;
}

/// Random instance meeting the reduction precondition. Qr is drawn among
/// states with zero total displacement so that small k is admissible.
struct ReductionInstance {
  ControlGraph graph;
  Multicycle theta;
  StateSet qr;
  std::int64_t k;
};

inline std::optional<ReductionInstance> random_reduction_instance(Rng& rng) {
  const auto p = make_states(uniform(rng, 1, 3));
  auto net = random_net(rng, p, 3, 1);
  if (net.norm_inf() == 0) return std::nullopt;
  std::vector<std::string> q;
  for (const auto& s : p)
    if (uniform(rng, 0, 1)) q.push_back(s);
  StateSet qs(q);
  ExplorationBudget b;
  b.max_configurations = 200;
  std::optional<ControlGraph> g;
  try {
    g.emplace(build_control_graph(net, qs, random_configuration(rng, qs, 2), b));
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
  if (g->num_edges() == 0) return std::nullopt;
  auto theta = random_multicycle(rng, *g, uniform(rng, 1, 4));
  // repeat some cycles so that edge counts and displacements grow
  const auto n = theta.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = uniform(rng, 0, 2); r > 0; --r) theta.push_back(theta[i]);
  const auto total = raw_displacement(*g, theta);
  std::vector<std::string> zero;
  for (const auto& [s, v] : total)
    if (v == 0 && uniform(rng, 0, 1)) zero.push_back(s);
  return ReductionInstance{*g, std::move(theta), StateSet(zero), static_cast<std::int64_t>(uniform(rng, 1, 3))};
}

/// Closure under raw (pre, post) pairs, which may repeat or be identities.
inline std::optional<std::set<Configuration>> raw_closure(const std::vector<Transition>& ts, const Configuration& from,
                                                          std::size_t cap) {
  std::set<Configuration> seen{from};
  std::deque<Configuration> queue{from};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (const auto& t : ts) {
      if (!t.pre.leq(c)) continue;
      std::map<std::string, Count> m;
      for (const auto& [s, n] : c.entries()) m[s] += n;
      for (const auto& [s, n] : t.pre.entries()) m[s] -= n;
      for (const auto& [s, n] : t.post.entries()) m[s] += n;
      Configuration next(m);
      if (seen.insert(next).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(next);
      }
    }
  }
  return seen;
}

/// Re-derives the five bottom-witness conditions with explicit search over
/// the projected transitions. Empty means the witness is valid.
inline std::vector<std::string> bottom_witness_failures(const PetriNet& net, const Configuration& rho,
                                                        const BottomWitness& w, std::size_t cap) {
  std::vector<std::string> out;
  auto replay = [&](Configuration c, const FiringWord& word) -> std::optional<Configuration> {
    for (auto i : word) {
      if (i >= net.size()) return std::nullopt;
      const auto& t = net[i];
      if (!t.pre.leq(c)) return std::nullopt;
      std::map<std::string, Count> m;
      for (const auto& [s, n] : c.entries()) m[s] += n;
      for (const auto& [s, n] : t.pre.entries()) m[s] -= n;
      for (const auto& [s, n] : t.post.entries()) m[s] += n;
      c = Configuration(m);
    }
    return c;
  };
  if (replay(rho, w.sigma) != w.alpha) out.push_back("sigma does not lead to alpha");
  if (replay(w.alpha, w.w) != w.beta) out.push_back("w does not lead to beta");
  for (const auto& p : net.states()) {
    if (w.q.contains(p) && w.alpha[p] != w.beta[p]) out.push_back("alpha and beta differ on Q at " + p);
    if (!w.q.contains(p) && !(w.alpha[p] < w.beta[p])) out.push_back("beta does not exceed alpha at " + p);
  }
  std::vector<Transition> projected;
  for (const auto& t : net.transitions()) projected.push_back({t.pre.restrict(w.q), t.post.restrict(w.q)});
  const auto a = w.alpha.restrict(w.q);
  auto closure = raw_closure(projected, a, cap);
  if (!closure) {
    out.push_back("projected closure exceeds the cap");
    return out;
  }
  for (const auto& c : *closure) {
    auto back = raw_closure(projected, c, cap);
    if (!back || !back->count(a)) {
      out.push_back("alpha|_Q is not bottom");
      return out;
    }
  }
  if (closure->size() != w.component_size) out.push_back("component size mismatch");
  return out;
}

}  // namespace poptk::testing
