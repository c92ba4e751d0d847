// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line front end. Reports are "key: value" lines; exit codes are
// 0 success, 1 negative answer, 2 usage or input error, 3 budget exhausted.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "poptk/poptk.hpp"

namespace poptk::cli {

enum Exit : int { Ok = 0, Negative = 1, Usage = 2, Budget = 3 };

namespace detail {

inline std::string word_text(const FiringWord& w) {
  std::string s;
  for (auto t : w) {
    if (!s.empty()) s += ' ';
    s += "t" + std::to_string(t);
  }
  return s;
}

inline std::string state_list(const StateSet& q) {
  std::string s;
  for (const auto& n : q) {
    if (!s.empty()) s += ' ';
    s += n;
  }
  return s;
}

inline ExplorationBudget make_budget(std::uint64_t max_configurations, std::optional<std::size_t> depth = std::nullopt) {
  ExplorationBudget b;
  b.max_configurations = max_configurations;
  b.max_depth = depth;
  b.validate();
  return b;
}

/// "i>=2"
inline CountingPredicate parse_predicate(const std::string& text) {
  auto pos = text.find(">=");
  if (pos == std::string::npos) throw ParseError("<predicate>", 1, 1, "expected STATE>=N");
  CountingPredicate phi;
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  phi.input_state = trim(text.substr(0, pos));
  auto num = trim(text.substr(pos + 2));
  if (phi.input_state.empty()) throw ParseError("<predicate>", 1, 1, "missing state name");
  if (!poptk::detail::is_number(num)) throw ParseError("<predicate>", 1, pos + 3, "expected a natural number");
  phi.threshold = poptk::detail::parse_count({num, pos + 3}, "<predicate>", 1);
  return phi;
}

inline std::string number_text(const FactoredNat& v, std::size_t max_bits = std::size_t{1} << 20) {
  if (auto m = v.materialize(max_bits)) return m->get_str();
  return v.to_string();
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"poptk: population protocol and Petri net analysis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string protocol_path, net_path, from, target, config, predicate, system_path, graph_path, parikh_text;
  std::uint64_t max_input = 0, budget = 1'000'000, states = 1, width = 0, leaders = 0, n = 1;
  std::size_t depth = 64;
  int which = 2;
  std::string out_path, anchor_name, to;
  bool digits_only = false, extract = false, total = false, constants = false;

  auto* verify = app.add_subcommand("verify", "check that a protocol stably computes i>=n on small inputs");
  verify->add_option("--protocol", protocol_path, "protocol file")->required();
  verify->add_option("--predicate", predicate, "counting predicate, e.g. i>=2")->required();
  verify->add_option("--max-input", max_input, "largest input count checked")->required();
  verify->add_option("--budget", budget, "configuration cap per input");

  auto* cover = app.add_subcommand("cover", "backward coverability with a shortest witness");
  cover->add_option("--net", net_path, "net or protocol file")->required();
  cover->add_option("--from", from, "start configuration, e.g. i=1,ibar=2")->required();
  cover->add_option("--target", target, "configuration to cover")->required();

  auto* reach = app.add_subcommand("reach", "enumerate the reachable set");
  reach->add_option("--net", net_path, "net or protocol file")->required();
  reach->add_option("--from", from, "start configuration")->required();
  reach->add_option("--to", to, "report whether this configuration is reachable");
  reach->add_option("--budget,--max", budget, "configuration cap");

  auto* stable = app.add_subcommand("stable", "classify a configuration as 0-stable, 1-stable or neither");
  stable->add_option("--protocol", protocol_path, "protocol file")->required();
  stable->add_option("--config", config, "configuration")->required();
  stable->add_option("--budget", budget, "configuration cap");

  auto* bottom = app.add_subcommand("bottom", "bottom test and bottom-witness extraction");
  bottom->add_option("--net", net_path, "net or protocol file")->required();
  bottom->add_option("--config,--from", config, "configuration")->required();
  bottom->add_option("--budget", budget, "configuration cap");
  bottom->add_option("--depth", depth, "longest sigma.w searched by --extract");
  bottom->add_flag("--extract", extract, "search a witness (sigma, w, Q, alpha, beta)");

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert basis of a system s(p)alpha(p) = sum beta(a)a(p)");
  hilbert->add_option("--system", system_path, "system file")->required();

  auto* euler = app.add_subcommand("euler", "Euler cycle with a given Parikh image, or a total cycle");
  euler->add_option("--graph", graph_path, "graph file")->required();
  euler->add_option("--parikh", parikh_text, "edge counts, e.g. e1=2,e2=2");
  euler->add_option("--anchor", anchor_name, "start control");
  euler->add_flag("--total", total, "build a total cycle instead");

  auto* bound = app.add_subcommand("bound", "evaluate the state-complexity bound");
  bound->add_option("--states", states, "|P|")->required();
  bound->add_option("--width", width, "interaction width")->required();
  bound->add_option("--leaders", leaders, "number of leaders")->required();
  bound->add_flag("--digits-only", digits_only, "print only the decimal digit count");
  bound->add_flag("--constants", constants, "also print the constants b, h, k, a, l, r with d = states");

  auto* emit = app.add_subcommand("emit-example", "write one of the two threshold protocols");
  emit->add_option("--which", which, "1 or 2")->required()->check(CLI::Range(1, 2));
  emit->add_option("--n", n, "threshold n >= 1")->required()->check(CLI::PositiveNumber);
  emit->add_option("--out", out_path, "output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return Usage;
  }

  try {
    if (*verify) {
      auto p = parse_protocol(read_file(protocol_path), protocol_path);
      auto phi = detail::parse_predicate(predicate);
      auto report = stably_computes(p, phi, max_input, detail::make_budget(budget));
      std::size_t configs = 0;
      for (const auto& r : report.inputs) configs += r.configurations;
      out << "verdict: " << to_string(report.verdict) << "\n";
      out << "predicate: " << phi.input_state << ">=" << phi.threshold << "\n";
      out << "inputs: " << report.first_input << ".." << report.last_input << "\n";
      out << "configurations: " << configs << "\n";
      for (const auto& r : report.inputs)
        if (!r.exhausted) out << "budget-exhausted-input: " << r.input << "\n";
      if (report.counterexample) {
        const auto& c = *report.counterexample;
        out << "input: " << c.input << "\n";
        out << "initial: " << format_configuration(c.initial, p.states()) << "\n";
        out << "trace: " << detail::word_text(c.trace) << "\n";
        out << "reached: " << format_configuration(c.reached, p.states()) << "\n";
        out << "reason: " << c.reason << "\n";
      }
      switch (report.verdict) {
        case Verdict::Verified: return Ok;
        case Verdict::Refuted: return Negative;
        case Verdict::Inconclusive: return Budget;
      }
    }
    if (*cover) {
      auto net = parse_net(read_file(net_path), net_path);
      auto a = parse_configuration(from, &net.states(), "--from");
      auto b = parse_configuration(target, &net.states(), "--target");
      auto w = coverable(net, a, b);
      out << "verdict: " << (w ? "COVERABLE" : "UNCOVERABLE") << "\n";
      if (!w) return Negative;
      out << "length: " << w->word.size() << "\n";
      out << "word: " << detail::word_text(w->word) << "\n";
      out << "reached: " << format_configuration(w->reached, net.states()) << "\n";
      return Ok;
    }
    if (*reach) {
      auto net = parse_net(read_file(net_path), net_path);
      auto a = parse_configuration(from, &net.states(), "--from");
      auto b = detail::make_budget(budget);
      if (!to.empty() || reach->count("--to")) {
        auto goal = parse_configuration(to, &net.states(), "--to");
        const auto& p = net.states();
        const auto gv = goal.to_dense(p);
        std::optional<std::size_t> hit;
        auto g = explore(densify(net), a.to_dense(p), b, [&](const ReachGraph& graph, std::size_t id) {
          if (graph.nodes[id] != gv) return true;
          hit = id;
          return false;
        });
        if (hit) {
          out << "verdict: REACHABLE\n";
          out << "word: " << detail::word_text(g.word_to(*hit)) << "\n";
          return Ok;
        }
        out << "verdict: " << (g.exhausted ? "UNREACHABLE" : "UNKNOWN") << "\n";
        out << "configurations: " << g.size() << "\n";
        return g.exhausted ? Negative : Budget;
      }
      auto rs = reachable_set(net, a, b);
      out << "exhausted: " << (rs.exhausted ? "true" : "false") << "\n";
      out << "configurations: " << rs.configurations.size() << "\n";
      for (const auto& c : rs.configurations) out << "config: " << format_configuration(c, net.states()) << "\n";
      return rs.exhausted ? Ok : Budget;
    }
    if (*stable) {
      auto p = parse_protocol(read_file(protocol_path), protocol_path);
      auto c = parse_configuration(config, &p.states(), "--config");
      auto r = output_stable(p, c, detail::make_budget(budget));
      out << "verdict: " << to_string(r.verdict) << "\n";
      auto show = [&](const char* key, const std::optional<OutputWitness>& w) {
        if (!w) return;
        out << key << "-word: " << detail::word_text(w->word) << "\n";
        out << key << "-reached: " << format_configuration(w->reached, p.states()) << "\n";
        out << key << "-reason: " << w->reason << "\n";
      };
      show("not-stable0", r.not_zero);
      show("not-stable1", r.not_one);
      switch (r.verdict) {
        case OutputVerdict::StableZero:
        case OutputVerdict::StableOne: return Ok;
        case OutputVerdict::Unstable: return Negative;
        case OutputVerdict::Unknown: return Budget;
      }
    }
    if (*bottom) {
      auto net = parse_net(read_file(net_path), net_path);
      auto c = parse_configuration(config, &net.states(), "--config");
      auto b = detail::make_budget(budget, extract ? std::optional<std::size_t>(depth) : std::nullopt);
      if (!extract) {
        auto verdict = is_bottom(net, c, b);
        out << "bottom: " << (!verdict ? "unknown" : *verdict ? "true" : "false") << "\n";
        if (verdict == true) out << "component: " << component(net, c, b).members.size() << "\n";
        return !verdict ? Budget : *verdict ? Ok : Negative;
      }
      auto w = extract_bottom(net, c, b);
      if (!w) {
        out << "witness: none\n";
        return Budget;
      }
      out << "witness: found\n";
      out << "sigma: " << detail::word_text(w->sigma) << "\n";
      out << "w: " << detail::word_text(w->w) << "\n";
      out << "Q: " << detail::state_list(w->q) << "\n";
      out << "alpha: " << format_configuration(w->alpha, net.states()) << "\n";
      out << "beta: " << format_configuration(w->beta, net.states()) << "\n";
      out << "component: " << w->component_size << "\n";
      return Ok;
    }
    if (*hilbert) {
      auto sys = parse_system(read_file(system_path), system_path);
      auto basis = hilbert_basis(sys);
      out << "elements: " << basis.size() << "\n";
      out << "pottier-bound: " << pottier_bound(sys).get_str() << "\n";
      for (const auto& h : basis) {
        std::string beta;
        for (std::size_t a = 0; a < h.beta.size(); ++a) {
          if (h.beta[a] == 0) continue;
          if (!beta.empty()) beta += ',';
          beta += sys.action_names[a] + "=" + std::to_string(h.beta[a]);
        }
        out << "element: alpha={" << format_configuration(h.alpha, sys.states) << "} beta={" << beta << "}\n";
      }
      return Ok;
    }
    if (*euler) {
      auto gf = parse_graph(read_file(graph_path), graph_path);
      const auto& g = gf.graph;
      std::optional<std::size_t> anchor = gf.anchor;
      if (!anchor_name.empty()) {
        anchor = g.node_index(anchor_name);
        if (!anchor) throw PreconditionError("unknown anchor '" + anchor_name + "'");
      }
      EdgePath cycle;
      if (total) {
        cycle = total_cycle(g, anchor.value_or(0));
      } else {
        auto phi = parse_parikh(parikh_text, g, "--parikh");
        if (!anchor) {
          auto first = std::find_if(phi.begin(), phi.end(), [](const auto& kv) { return kv.second > 0; });
          anchor = first == phi.end() ? 0 : g.edge_source(first->first);
        }
        cycle = euler_cycle(g, phi, *anchor);
      }
      std::string names;
      for (auto e : cycle) {
        if (!names.empty()) names += ' ';
        names += g.arcs()[e].name;
      }
      out << "length: " << cycle.size() << "\n";
      out << "cycle: " << names << "\n";
      return Ok;
    }
    if (*bound) {
      BoundInputs in{states, width, leaders};
      auto v = main_theorem_bound(in);
      if (!digits_only) out << "bound: " << detail::number_text(v) << "\n";
      out << "digits: " << v.decimal_digits().get_str() << "\n";
      if (constants) {
        auto c = section8_constants(states, width, leaders);
        auto show = [&](const char* key, const FactoredNat& x) {
          out << key << "-digits: " << x.decimal_digits().get_str() << "\n";
        };
        show("b", c.b);
        show("h", c.h);
        show("k", c.k);
        show("a", c.a);
        show("l", c.ell);
        out << "r: " << c.r.get_str() << "\n";
        for (const auto& item : consistency_check(in)) out << "check: " << item.claim << " " << (item.holds ? "holds" : "FAILS") << "\n";
      }
      return Ok;
    }
    if (*emit) {
      auto p = which == 1 ? example1_protocol(n) : example2_protocol(n);
      auto text = serialize_protocol(p);
      if (out_path.empty()) {
        out << text;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error("cannot write '" + out_path + "'");
        f << text;
        out << "wrote: " << out_path << "\n";
      }
      return Ok;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}

}  // namespace poptk::cli
