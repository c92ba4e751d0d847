// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Output semantics of protocols: the extended output function, membership in
// the 0- and 1-output stable sets, (T,F)-stabilization, and a falsification
// harness for the small-value characterization of stabilized configurations.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poptk/core.hpp"
#include "poptk/dense.hpp"
#include "poptk/reach.hpp"

namespace poptk {

/// Output values of the populated states of `c`.
inline std::set<Output> gamma_extended(const Protocol& p, const Configuration& c) {
  std::set<Output> out;
  for (const auto& [s, n] : c.entries()) out.insert(p.output(s));
  return out;
}

/// A reachable configuration populating a forbidden state.
struct StabilityViolation {
  std::string state;
  FiringWord word;
  Configuration reached;
};

/// Answers (T,F)-stabilization queries for a fixed net and F. One backward
/// coverability fixpoint per state outside F is computed up front and
/// shared by all queries.
class StabilizationChecker {
 public:
  StabilizationChecker(const PetriNet& net, const StateSet& f) : net_(net), dense_(densify(net)) {
    const auto& p = net.states();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (f.contains(p[i])) continue;
      Vec target(p.size(), 0);
      target[i] = 1;
      forbidden_.push_back(i);
      oracles_.emplace_back(dense_, std::move(target));
    }
  }

  bool is_stabilized(const Configuration& c) const { return is_stabilized(c.to_dense(net_.states())); }

  bool is_stabilized(const Vec& c) const {
    for (const auto& o : oracles_)
      if (o.covers(c)) return false;
    return true;
  }

  /// First forbidden state (declaration order) that can be populated, with a shortest witness.
  std::optional<StabilityViolation> violation(const Configuration& c) const {
    const auto& p = net_.states();
    auto v = c.to_dense(p);
    for (std::size_t k = 0; k < oracles_.size(); ++k) {
      auto w = oracles_[k].witness(v);
      if (!w) continue;
      auto reached = fire_word(v, dense_, *w);
      return StabilityViolation{p[forbidden_[k]], *w, Configuration::from_dense(p, *reached)};
    }
    return std::nullopt;
  }

 private:
  PetriNet net_;
  DenseNet dense_;
  std::vector<std::size_t> forbidden_;
  std::vector<BackwardCoverability> oracles_;
};

/// True iff no configuration reachable from `c` populates a state outside `f`.
inline bool is_stabilized(const PetriNet& net, const StateSet& f, const Configuration& c) {
  return StabilizationChecker(net, f).is_stabilized(c);
}

enum class OutputVerdict { StableZero, StableOne, Unstable, Unknown };

inline const char* to_string(OutputVerdict v) {
  switch (v) {
    case OutputVerdict::StableZero: return "STABLE0";
    case OutputVerdict::StableOne: return "STABLE1";
    case OutputVerdict::Unstable: return "UNSTABLE";
    case OutputVerdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct OutputWitness {
  FiringWord word;
  Configuration reached;
  std::string reason;
};

struct StabilityResult {
  OutputVerdict verdict = OutputVerdict::Unknown;
  /// Why the configuration is not 0-output stable (reached beta with gamma(beta) not within {0}).
  std::optional<OutputWitness> not_zero;
  /// Why the configuration is not 1-output stable (reached beta with gamma(beta) != {1}).
  std::optional<OutputWitness> not_one;
};

namespace detail {

inline std::optional<OutputWitness> populate_witness(const Protocol& p, const StateSet& allowed, const Configuration& c) {
  auto v = StabilizationChecker(p.net(), allowed).violation(c);
  if (!v) return std::nullopt;
  return OutputWitness{v->word, v->reached,
                       "state " + v->state + " with output " + output_symbol(p.output(v->state)) + " is coverable"};
}

}  // namespace detail

/// Classifies `c` as 0-output stable, 1-output stable, or neither.
///
/// 0-stability is exactly (T, gamma^-1(0))-stabilization. 1-stability fails
/// iff a state with output 0 or * is coverable or the zero configuration is
/// reachable; the latter is decided by budgeted exploration for nets that
/// can destroy agents and is Unknown when that exploration runs out.
inline StabilityResult output_stable(const Protocol& p, const Configuration& c, const ExplorationBudget& budget) {
  StabilityResult r;
  r.not_zero = detail::populate_witness(p, p.states_with_output(Output::Zero), c);
  if (!r.not_zero) {
    r.verdict = OutputVerdict::StableZero;
    return r;
  }
  r.not_one = detail::populate_witness(p, p.states_with_output(Output::One), c);
  if (!r.not_one && c.is_zero()) r.not_one = OutputWitness{{}, c, "zero configuration has empty output"};
  if (r.not_one) {
    r.verdict = OutputVerdict::Unstable;
    return r;
  }
  if (p.net().is_conservative()) {
    r.verdict = OutputVerdict::StableOne;
    return r;
  }
  const auto& states = p.states();
  std::optional<std::size_t> zero_node;
  auto g = explore(densify(p.net()), c.to_dense(states), budget, [&](const ReachGraph& graph, std::size_t id) {
    if (norm_inf(graph.nodes[id]) == 0) {
      zero_node = id;
      return false;
    }
    return true;
  });
  if (zero_node) {
    r.not_one = OutputWitness{g.word_to(*zero_node), Configuration{}, "zero configuration is reachable"};
    r.verdict = OutputVerdict::Unstable;
  } else {
    r.verdict = g.exhausted ? OutputVerdict::StableOne : OutputVerdict::Unknown;
  }
  return r;
}

struct RegionSample {
  Configuration config;
  /// alpha|_R <= rho|_R
  bool applicable = false;
  /// Only meaningful when applicable.
  bool stabilized = false;
};

struct RegionReport {
  /// R = {p | rho(p) < h}
  StateSet small_states;
  std::vector<RegionSample> samples;
  /// Indices of applicable samples that are not stabilized.
  std::vector<std::size_t> counterexamples;
};

/// Checks that every sample agreeing with the stabilized `rho` below `h`
/// (alpha|_R <= rho|_R) is itself stabilized. Valid as a probe for any h;
/// counterexamples are impossible once h reaches the Rackoff-derived bound.
inline RegionReport stabilized_region_check(const PetriNet& net, const StateSet& f, const Configuration& rho, Count h,
                                            const std::vector<Configuration>& samples) {
  StabilizationChecker checker(net, f);
  if (!checker.is_stabilized(rho)) throw PreconditionError("rho is not (T,F)-stabilized");
  RegionReport report;
  std::vector<std::string> small;
  for (const auto& s : net.states())
    if (rho[s] < h) small.push_back(s);
  report.small_states = StateSet(std::move(small));
  const auto rho_r = rho.restrict(report.small_states);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    RegionSample rs{samples[i], samples[i].restrict(report.small_states).leq(rho_r), false};
    if (rs.applicable) {
      rs.stabilized = checker.is_stabilized(samples[i]);
      if (!rs.stabilized) report.counterexamples.push_back(i);
    }
    report.samples.push_back(std::move(rs));
  }
  return report;
}

/// h = ||T|| (1 + ||T||)^(|P|^|P|), raised to 1 when that is zero.
inline FactoredNat region_threshold(const PetriNet& net) {
  const auto t = net.norm_inf();
  const auto d = net.states().size();
  auto h = FactoredNat(t) * FactoredNat(t + 1).pow(pow(BigNat(d), BigNat(d)));
  return h.is_zero() ? FactoredNat(1) : h;
}

}  // namespace poptk
