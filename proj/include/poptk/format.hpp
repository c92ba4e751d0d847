// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Line-oriented text formats for protocols and nets, configuration
// literals, edge-labelled graphs, and Diophantine systems. '#' starts a
// comment everywhere. Errors carry file, line and column (1-based).
//
//   states: i ibar p pbar q qbar
//   input: i
//   leaders: ibar=2
//   output0: ibar pbar qbar
//   output1: i p q
//   trans: i ibar -> p q

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "poptk/core.hpp"
#include "poptk/cpn.hpp"
#include "poptk/error.hpp"
#include "poptk/hilbert.hpp"

namespace poptk {

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

/// Splits a line into names, numbers and single-character punctuation.
/// "->" is kept as one token.
inline std::vector<Token> tokenize(std::string_view line, const std::string& file, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({"->", i + 1});
      i += 2;
      continue;
    }
    if (is_name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && is_name_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), i + 1});
      i = j;
      continue;
    }
    if (std::string_view(":=,*+-").find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), i + 1});
      ++i;
      continue;
    }
    throw ParseError(file, lineno, i + 1, std::string("unexpected character '") + c + "'");
  }
  return out;
}

inline bool is_number(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline bool is_identifier(const std::string& s) {
  return !s.empty() && !is_number(s) && s != "-" && s != "->" && is_name_char(s.front());
}

inline Count parse_count(const Token& t, const std::string& file, std::size_t line) {
  Count v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (!is_number(t.text) || ec != std::errc() || ptr != t.text.data() + t.text.size())
    throw ParseError(file, line, t.column, "expected a natural number, got '" + t.text + "'");
  return v;
}

/// Cursor over the tokens of one line.
class LineReader {
 public:
  LineReader(std::vector<Token> tokens, std::string file, std::size_t line, std::size_t end_column)
      : tokens_(std::move(tokens)), file_(std::move(file)), line_(line), end_column_(end_column) {}

  bool done() const { return pos_ >= tokens_.size(); }
  const Token& peek() const {
    if (done()) fail("unexpected end of line");
    return tokens_[pos_];
  }
  bool peek_is(const std::string& s) const { return !done() && tokens_[pos_].text == s; }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& s) {
    if (done()) fail("expected '" + s + "'");
    if (tokens_[pos_].text != s) error(tokens_[pos_], "expected '" + s + "', got '" + tokens_[pos_].text + "'");
    ++pos_;
  }
  std::string identifier() {
    if (done()) fail("expected a name");
    const auto& t = tokens_[pos_];
    if (!is_identifier(t.text)) error(t, "expected a name, got '" + t.text + "'");
    ++pos_;
    return t.text;
  }
  Count count() {
    if (done()) fail("expected a natural number");
    return parse_count(tokens_[pos_++], file_, line_);
  }
  void expect_end() const {
    if (!done()) error(tokens_[pos_], "unexpected '" + tokens_[pos_].text + "'");
  }

  [[noreturn]] void error(const Token& t, const std::string& what) const { throw ParseError(file_, line_, t.column, what); }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(file_, line_, end_column_, what); }

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string file_;
  std::size_t line_;
  std::size_t end_column_;
};

/// Non-blank lines as readers whose first two tokens are "key" ":".
template <class F>
void for_each_line(const std::string& text, const std::string& file, F&& f) {
  std::istringstream in(text);
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokenize(line, file, no);
    if (toks.empty()) continue;
    f(LineReader(std::move(toks), file, no, line.size() + 1));
  }
}

/// "a=2,b=1" or "a=2 b=1" entries until the end of the line.
inline Configuration read_assignments(LineReader& r, const StateSet* states) {
  std::map<std::string, Count> m;
  while (!r.done()) {
    const Token at = r.peek();
    auto name = r.identifier();
    if (states && !states->contains(name)) r.error(at, "undeclared state '" + name + "'");
    r.expect("=");
    auto n = r.count();
    if (!m.emplace(name, n).second) r.error(at, "state '" + name + "' given twice");
    if (r.peek_is(",")) {
      r.next();
      if (r.done()) r.fail("expected an entry after ','");
    }
  }
  return Configuration(m);
}

/// Multiset in repetition syntax ("a a b"), or "-" for empty, up to `stop`.
inline Configuration read_multiset(LineReader& r, const StateSet& states, const std::string& stop) {
  if (r.peek_is("-")) {
    r.next();
    return {};
  }
  std::map<std::string, Count> m;
  bool any = false;
  while (!r.done() && !r.peek_is(stop)) {
    const Token at = r.peek();
    auto name = r.identifier();
    if (!states.contains(name)) r.error(at, "undeclared state '" + name + "'");
    m[name] = checked_add<Count>(m[name], 1);
    any = true;
  }
  if (!any) r.fail("expected a multiset of states or '-'");
  return Configuration(m);
}

inline StateSet read_state_list(LineReader& r, const StateSet* declared) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  while (!r.done()) {
    const Token at = r.peek();
    auto name = r.identifier();
    if (declared && !declared->contains(name)) r.error(at, "undeclared state '" + name + "'");
    if (!seen.insert(name).second) r.error(at, "state '" + name + "' listed twice");
    names.push_back(name);
  }
  return StateSet(std::move(names));
}

}  // namespace detail

/// Everything a protocol file can declare; net-only files leave the rest empty.
struct ProtocolFile {
  StateSet states;
  std::vector<Transition> transitions;
  Configuration leaders;
  StateSet inputs;
  StateSet output0;
  StateSet output1;

  PetriNet net() const { return PetriNet(states, transitions); }

  /// States in neither output list get '*'.
  Protocol protocol() const {
    OutputMap out;
    for (const auto& s : states) out[s] = Output::Star;
    for (const auto& s : output0) out[s] = Output::Zero;
    for (const auto& s : output1) out[s] = Output::One;
    return Protocol(net(), leaders, inputs, out);
  }
};

inline ProtocolFile parse_protocol_file(const std::string& text, const std::string& file = "<input>") {
  ProtocolFile pf;
  bool have_states = false;
  std::set<std::string> seen_keys;
  detail::for_each_line(text, file, [&](detail::LineReader r) {
    const detail::Token key = r.next();
    r.expect(":");
    if (key.text != "trans" && !seen_keys.insert(key.text).second) r.error(key, "'" + key.text + "' given twice");
    if (key.text == "states") {
      pf.states = detail::read_state_list(r, nullptr);
      if (pf.states.empty()) r.fail("a protocol needs at least one state");
      have_states = true;
      return;
    }
    if (!have_states) r.error(key, "'states:' must come first");
    if (key.text == "input") {
      pf.inputs = detail::read_state_list(r, &pf.states);
    } else if (key.text == "leaders") {
      pf.leaders = detail::read_assignments(r, &pf.states);
    } else if (key.text == "output0") {
      pf.output0 = detail::read_state_list(r, &pf.states);
    } else if (key.text == "output1") {
      pf.output1 = detail::read_state_list(r, &pf.states);
    } else if (key.text == "trans") {
      Transition t;
      t.pre = detail::read_multiset(r, pf.states, "->");
      r.expect("->");
      t.post = detail::read_multiset(r, pf.states, "");
      r.expect_end();
      if (std::find(pf.transitions.begin(), pf.transitions.end(), t) != pf.transitions.end())
        r.error(key, "duplicate transition");
      pf.transitions.push_back(std::move(t));
    } else {
      r.error(key, "unknown key '" + key.text + "'");
    }
  });
  if (!have_states) throw ParseError(file, 1, 1, "missing 'states:' line");
  for (const auto& s : pf.output0)
    if (pf.output1.contains(s)) throw ParseError(file, 1, 1, "state '" + s + "' is in both output lists");
  return pf;
}

inline Protocol parse_protocol(const std::string& text, const std::string& file = "<input>") {
  return parse_protocol_file(text, file).protocol();
}

inline PetriNet parse_net(const std::string& text, const std::string& file = "<input>") {
  return parse_protocol_file(text, file).net();
}

/// "i=3,ibar=2"; the empty string is the zero configuration. With `states`,
/// names must be declared there.
inline Configuration parse_configuration(const std::string& text, const StateSet* states = nullptr,
                                         const std::string& what = "<configuration>") {
  auto toks = detail::tokenize(text, what, 1);
  detail::LineReader r(std::move(toks), what, 1, text.size() + 1);
  return detail::read_assignments(r, states);
}

inline std::string format_configuration(const Configuration& c) {
  std::string s;
  for (const auto& [name, n] : c.entries()) {
    if (!s.empty()) s += ',';
    s += name + "=" + std::to_string(n);
  }
  return s;
}

/// Same, in the declaration order of `states`.
inline std::string format_configuration(const Configuration& c, const StateSet& states) {
  std::string s;
  for (const auto& name : states) {
    if (c[name] == 0) continue;
    if (!s.empty()) s += ',';
    s += name + "=" + std::to_string(c[name]);
  }
  return s;
}

namespace detail {

inline std::string multiset_text(const Configuration& c, const StateSet& states) {
  std::string s;
  for (const auto& name : states)
    for (Count k = 0; k < c[name]; ++k) {
      if (!s.empty()) s += ' ';
      s += name;
    }
  return s.empty() ? "-" : s;
}

inline std::string joined(const StateSet& s) {
  std::string out;
  for (const auto& n : s) out += " " + n;
  return out;
}

}  // namespace detail

inline std::string format_transition(const Transition& t, const StateSet& states) {
  return detail::multiset_text(t.pre, states) + " -> " + detail::multiset_text(t.post, states);
}

inline std::string serialize_net(const PetriNet& net) {
  std::string s = "states:" + detail::joined(net.states()) + "\n";
  for (const auto& t : net.transitions()) s += "trans: " + format_transition(t, net.states()) + "\n";
  return s;
}

inline std::string serialize_protocol(const Protocol& p) {
  const auto& states = p.states();
  std::string s = "states:" + detail::joined(states) + "\n";
  s += "input:" + detail::joined(p.inputs()) + "\n";
  s += "leaders:";
  if (!p.leaders().is_zero()) s += " " + format_configuration(p.leaders(), states);
  s += "\n";
  s += "output0:" + detail::joined(p.states_with_output(Output::Zero)) + "\n";
  s += "output1:" + detail::joined(p.states_with_output(Output::One)) + "\n";
  for (const auto& t : p.net().transitions()) s += "trans: " + format_transition(t, states) + "\n";
  return s;
}

/// Graph file:
///   controls: s1 s2
///   edge e1: s1 -> s2
///   anchor: s1          (optional)
struct GraphFile {
  Multigraph graph;
  std::optional<std::size_t> anchor;
};

inline GraphFile parse_graph(const std::string& text, const std::string& file = "<input>") {
  std::optional<std::vector<std::string>> nodes;
  std::vector<Multigraph::Arc> arcs;
  std::optional<std::string> anchor;
  std::size_t anchor_line = 0, anchor_col = 0;
  std::set<std::string> names;
  auto node_of = [&](detail::LineReader& r) {
    const detail::Token at = r.peek();
    auto n = r.identifier();
    auto it = std::find(nodes->begin(), nodes->end(), n);
    if (it == nodes->end()) r.error(at, "undeclared control '" + n + "'");
    return static_cast<std::size_t>(it - nodes->begin());
  };
  detail::for_each_line(text, file, [&](detail::LineReader r) {
    const detail::Token key = r.next();
    if (key.text == "controls") {
      r.expect(":");
      if (nodes) r.error(key, "'controls' given twice");
      nodes = detail::read_state_list(r, nullptr).names();
      if (nodes->empty()) r.fail("expected at least one control");
      return;
    }
    if (!nodes) r.error(key, "'controls:' must come first");
    if (key.text == "edge") {
      const detail::Token at = r.peek();
      auto name = r.identifier();
      if (!names.insert(name).second) r.error(at, "edge '" + name + "' declared twice");
      r.expect(":");
      auto s = node_of(r);
      r.expect("->");
      auto t = node_of(r);
      r.expect_end();
      arcs.push_back({name, s, t});
    } else if (key.text == "anchor") {
      r.expect(":");
      if (anchor) r.error(key, "'anchor' given twice");
      anchor_line = r.line();
      anchor_col = r.peek().column;
      anchor = r.identifier();
      r.expect_end();
    } else {
      r.error(key, "unknown key '" + key.text + "'");
    }
  });
  if (!nodes) throw ParseError(file, 1, 1, "missing 'controls:' line");
  GraphFile g{Multigraph(*nodes, arcs), std::nullopt};
  if (anchor) {
    g.anchor = g.graph.node_index(*anchor);
    if (!g.anchor) throw ParseError(file, anchor_line, anchor_col, "undeclared control '" + *anchor + "'");
  }
  return g;
}

/// "e1=2,e2=2" over the edge names of `g`.
inline ParikhImage parse_parikh(const std::string& text, const Multigraph& g, const std::string& what = "<parikh>") {
  auto c = parse_configuration(text, nullptr, what);
  ParikhImage phi;
  for (const auto& [name, n] : c.entries()) {
    auto e = g.edge_index(name);
    if (!e) throw ParseError(what, 1, text.find(name) + 1, "unknown edge '" + name + "'");
    phi[*e] = n;
  }
  return phi;
}

/// System file: one line per state, "p: + = 2*a1 + 1*a2". The sign is '+',
/// '-' or '0' (no alpha unknown); terms are "[c*]name" joined by '+' or '-';
/// a lone "0" is the empty sum. Actions are numbered by first occurrence.
inline DiophantineSystem parse_system(const std::string& text, const std::string& file = "<input>") {
  std::vector<std::string> states;
  std::map<std::string, int> signs;
  std::vector<std::string> action_names;
  std::vector<std::map<std::string, Delta>> coeffs;
  detail::for_each_line(text, file, [&](detail::LineReader r) {
    const detail::Token at = r.peek();
    auto p = r.identifier();
    if (signs.count(p)) r.error(at, "state '" + p + "' given twice");
    r.expect(":");
    const detail::Token s = r.next();
    int sign = 0;
    if (s.text == "+") sign = 1;
    else if (s.text == "-") sign = -1;
    else if (s.text == "0") sign = 0;
    else r.error(s, "expected a sign '+', '-' or '0'");
    r.expect("=");
    states.push_back(p);
    signs[p] = sign;
    if (r.peek_is("0")) {
      r.next();
      r.expect_end();
      return;
    }
    bool first = true;
    while (!r.done()) {
      Delta neg = 1;
      if (r.peek_is("+") || r.peek_is("-")) {
        neg = r.next().text == "-" ? -1 : 1;
      } else if (!first) {
        r.error(r.peek(), "expected '+' or '-'");
      }
      first = false;
      Count c = 1;
      if (detail::is_number(r.peek().text)) {
        c = r.count();
        r.expect("*");
      }
      if (c > static_cast<Count>(std::numeric_limits<Delta>::max())) r.fail("coefficient too large");
      auto a = r.identifier();
      auto it = std::find(action_names.begin(), action_names.end(), a);
      std::size_t idx = static_cast<std::size_t>(it - action_names.begin());
      if (it == action_names.end()) {
        action_names.push_back(a);
        coeffs.emplace_back();
      }
      coeffs[idx][p] = detail::checked_add(coeffs[idx][p], neg * static_cast<Delta>(c));
    }
  });
  for (const auto& a : action_names)
    if (std::find(states.begin(), states.end(), a) != states.end())
      throw ParseError(file, 1, 1, "'" + a + "' is both a state and an action");
  DiophantineSystem sys;
  sys.states = StateSet(states);
  sys.signs = signs;
  sys.action_names = action_names;
  for (const auto& m : coeffs) {
    Action a;
    for (const auto& [p, v] : m) a = a + Action{{p, v}};
    sys.actions.push_back(a);
  }
  return sys;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace poptk
