// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Whole-protocol checks: does a protocol stably compute a counting predicate
// i >= n on all inputs up to a bound, plus the two threshold protocols used
// as running examples.

#include <optional>
#include <string>
#include <vector>

#include "poptk/core.hpp"
#include "poptk/dense.hpp"
#include "poptk/reach.hpp"

namespace poptk {

/// phi(rho) = 1 iff rho(input_state) >= threshold.
struct CountingPredicate {
  std::string input_state;
  Count threshold = 1;

  bool operator()(Count m) const { return m >= threshold; }
};

enum class Verdict { Verified, Refuted, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Counterexample {
  Count input = 0;
  Configuration initial;
  /// Firing word from `initial` to `reached`.
  FiringWord trace;
  Configuration reached;
  std::string reason;
};

struct InputResult {
  Count input = 0;
  std::size_t configurations = 0;
  bool exhausted = true;
  bool ok = true;
};

struct VerificationReport {
  Verdict verdict = Verdict::Verified;
  Count first_input = 0;
  Count last_input = 0;
  std::vector<InputResult> inputs;
  std::optional<Counterexample> counterexample;
};

namespace detail {

/// Does the node's output violate membership of S_value at this node alone?
inline bool bad_output(const Protocol& p, const Vec& v, bool value) {
  const auto& states = p.states();
  bool any = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    any = true;
    auto o = p.output(states[i]);
    if (o != (value ? Output::One : Output::Zero)) return true;
  }
  return value && !any;
}

}  // namespace detail

/// Checks, for every m in [0, max_input], that every configuration
/// reachable from leaders + m.i can reach an output-stable configuration
/// for phi(m). Exploration graphs are closed under reachability, so output
/// stability inside the graph is exact: a node is in S_v iff it cannot reach
/// a node whose own output disagrees with v.
inline VerificationReport stably_computes(const Protocol& p, const CountingPredicate& phi, Count max_input,
                                          const ExplorationBudget& budget) {
  if (phi.threshold < 1) throw PreconditionError("threshold must be at least 1");
  if (p.inputs().size() != 1) throw PreconditionError("counting predicates need exactly one input state");
  if (!p.inputs().contains(phi.input_state))
    throw PreconditionError("'" + phi.input_state + "' is not the input state");
  budget.validate();

  VerificationReport report;
  report.last_input = max_input;
  const auto& states = p.states();
  const auto dense = densify(p.net());
  for (Count m = 0;; ++m) {
    const bool value = phi(m);
    const auto initial = p.leaders() + Configuration::single(phi.input_state, m);
    auto g = explore(dense, initial.to_dense(states), budget);
    InputResult r{m, g.size(), g.exhausted, true};
    if (g.exhausted) {
      std::vector<std::size_t> bad;
      for (std::size_t u = 0; u < g.size(); ++u)
        if (detail::bad_output(p, g.nodes[u], value)) bad.push_back(u);
      const auto unstable = g.can_reach(bad);
      std::vector<std::size_t> stable;
      for (std::size_t u = 0; u < g.size(); ++u)
        if (!unstable[u]) stable.push_back(u);
      const auto ok = g.can_reach(stable);
      for (std::size_t u = 0; u < g.size(); ++u) {
        if (ok[u]) continue;
        r.ok = false;
        report.verdict = Verdict::Refuted;
        report.counterexample =
            Counterexample{m, initial, g.word_to(u), Configuration::from_dense(states, g.nodes[u]),
                           std::string("no ") + (value ? "1" : "0") + "-output stable configuration is reachable"};
        break;
      }
    } else if (report.verdict == Verdict::Verified) {
      report.verdict = Verdict::Inconclusive;
    }
    report.inputs.push_back(r);
    if (!r.ok || m == max_input) break;
  }
  return report;
}

/// States {i, p}, no leaders, transitions (rho + i, rho + p) for every rho
/// over {i, p} with |rho| = n - 1, listed from rho = (n-1).i down to (n-1).p.
inline Protocol example1_protocol(Count n) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  StateSet states({"i", "p"});
  std::vector<Transition> ts;
  for (Count a = n; a-- > 0;) {
    Configuration rho{{"i", a}, {"p", n - 1 - a}};
    ts.push_back({rho + Configuration::single("i"), rho + Configuration::single("p")});
  }
  return Protocol(PetriNet(states, std::move(ts)), Configuration{}, StateSet({"i"}),
                  OutputMap{{"i", Output::Zero}, {"p", Output::One}});
}

/// Six states, leaders n.ibar, seven width-2 transitions.
inline Protocol example2_protocol(Count n) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  StateSet states({"i", "ibar", "p", "pbar", "q", "qbar"});
  auto pair = [](const std::string& a, const std::string& b) { return Configuration::single(a) + Configuration::single(b); };
  std::vector<Transition> ts{
      {pair("i", "ibar"), pair("p", "q")},     // t
      {pair("pbar", "i"), pair("p", "i")},     // t_p
      {pair("p", "ibar"), pair("pbar", "ibar")},  // tbar_p
      {pair("qbar", "i"), pair("q", "i")},     // t_q
      {pair("q", "ibar"), pair("qbar", "ibar")},  // tbar_q
      {pair("q", "pbar"), pair("q", "p")},     // t_pbar
      {pair("p", "qbar"), pair("p", "q")},     // t_qbar
  };
  OutputMap out;
  for (const auto& s : {"i", "p", "q"}) out[s] = Output::One;
  for (const auto& s : {"ibar", "pbar", "qbar"}) out[s] = Output::Zero;
  return Protocol(PetriNet(states, std::move(ts)), Configuration::single("ibar", n), StateSet({"i"}), out);
}

/// The same protocol with the 0 and 1 output classes exchanged.
inline Protocol swap_outputs(const Protocol& p) {
  OutputMap out = p.output();
  for (auto& [s, o] : out) {
    if (o == Output::Zero) o = Output::One;
    else if (o == Output::One) o = Output::Zero;
  }
  return Protocol(p.net(), p.leaders(), p.inputs(), out);
}

}  // namespace poptk
