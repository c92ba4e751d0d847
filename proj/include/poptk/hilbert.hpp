// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hilbert bases of the homogeneous systems
//
//   s(p) * alpha(p) = sum_a beta(a) * a(p)      for every state p
//
// over unknowns alpha in N^P and beta in N^A, solved by the
// Contejean-Devie completion procedure.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "poptk/bignum.hpp"
#include "poptk/core.hpp"

namespace poptk {

/// s(p) is +1 or -1; 0 marks a row with no alpha unknown (0 = sum_a beta(a) a(p)).
struct DiophantineSystem {
  StateSet states;
  std::map<std::string, int> signs;
  std::vector<std::string> action_names;
  std::vector<Action> actions;

  void validate() const {
    for (const auto& p : states) {
      auto it = signs.find(p);
      if (it == signs.end()) throw PreconditionError("no sign for state '" + p + "'");
      if (it->second < -1 || it->second > 1) throw PreconditionError("sign must be -1, 0 or +1");
    }
    if (action_names.size() != actions.size()) throw PreconditionError("action names and actions differ in length");
    for (const auto& a : actions)
      for (const auto& [s, v] : a.entries())
        if (!states.contains(s)) throw PreconditionError("action uses undeclared state '" + s + "'");
  }

  std::size_t dimension() const { return states.size(); }
};

struct HilbertElement {
  Configuration alpha;
  /// One count per action of the system.
  std::vector<Count> beta;

  Count norm1() const {
    Count n = alpha.agents();
    for (auto b : beta) n = detail::checked_add(n, b);
    return n;
  }
  friend bool operator==(const HilbertElement&, const HilbertElement&) = default;
  friend auto operator<=>(const HilbertElement&, const HilbertElement&) = default;
};

/// (2 + sum_a ||a||_inf)^d, the bound on ||alpha||_1 + ||beta||_1 of every basis element.
inline BigNat pottier_bound(const DiophantineSystem& sys) {
  Count sum = 2;
  for (const auto& a : sys.actions) sum = detail::checked_add(sum, a.norm_inf());
  return pow(BigNat(sum), BigNat(static_cast<unsigned long>(sys.dimension())));
}

namespace detail {

/// The system as M x = 0 over x = (alpha restricted to signed rows, beta).
struct LinearForm {
  std::size_t rows = 0;
  std::vector<std::size_t> alpha_rows;      // row of each alpha unknown
  std::vector<std::vector<Delta>> columns;  // columns[j][row]
};

inline LinearForm linear_form(const DiophantineSystem& sys) {
  LinearForm f;
  f.rows = sys.states.size();
  for (std::size_t r = 0; r < f.rows; ++r) {
    int s = sys.signs.at(sys.states[r]);
    if (s == 0) continue;
    f.alpha_rows.push_back(r);
    std::vector<Delta> col(f.rows, 0);
    col[r] = s;
    f.columns.push_back(std::move(col));
  }
  for (const auto& a : sys.actions) {
    auto dense = a.to_dense(sys.states);
    for (auto& v : dense) v = -v;
    f.columns.push_back(std::move(dense));
  }
  return f;
}

inline HilbertElement to_element(const DiophantineSystem& sys, const LinearForm& f, const std::vector<Count>& x) {
  std::vector<Count> alpha(sys.states.size(), 0);
  for (std::size_t i = 0; i < f.alpha_rows.size(); ++i) alpha[f.alpha_rows[i]] = x[i];
  HilbertElement h;
  h.alpha = Configuration::from_dense(sys.states, alpha);
  h.beta.assign(x.begin() + static_cast<std::ptrdiff_t>(f.alpha_rows.size()), x.end());
  return h;
}

}  // namespace detail

/// All componentwise-minimal nonzero solutions, sorted.
inline std::vector<HilbertElement> hilbert_basis(const DiophantineSystem& sys) {
  sys.validate();
  const auto f = detail::linear_form(sys);
  const std::size_t n = f.columns.size();
  const std::size_t m = f.rows;

  struct Candidate {
    std::vector<Count> x;
    std::vector<Delta> image;  // M x
  };
  std::vector<std::vector<Count>> basis;
  auto dominated = [&](const std::vector<Count>& x) {
    return std::any_of(basis.begin(), basis.end(), [&](const std::vector<Count>& b) {
      for (std::size_t j = 0; j < n; ++j)
        if (b[j] > x[j]) return false;
      return true;
    });
  };

  std::vector<Candidate> frontier;
  for (std::size_t j = 0; j < n; ++j) {
    Candidate c{std::vector<Count>(n, 0), f.columns[j]};
    c.x[j] = 1;
    frontier.push_back(std::move(c));
  }
  while (!frontier.empty()) {
    std::vector<Candidate> open;
    for (auto& c : frontier) {
      bool solved = std::all_of(c.image.begin(), c.image.end(), [](Delta v) { return v == 0; });
      if (!solved) {
        open.push_back(std::move(c));
      } else if (!dominated(c.x)) {
        basis.push_back(c.x);
      }
    }
    std::set<std::vector<Count>> seen;
    std::vector<Candidate> next;
    for (const auto& c : open) {
      for (std::size_t j = 0; j < n; ++j) {
        // extend only in directions that move M x towards zero
        Delta dot = 0;
        for (std::size_t r = 0; r < m; ++r) dot = detail::checked_add(dot, detail::checked_mul(c.image[r], f.columns[j][r]));
        if (dot >= 0) continue;
        Candidate e = c;
        e.x[j] = detail::checked_add<Count>(e.x[j], 1);
        if (dominated(e.x) || !seen.insert(e.x).second) continue;
        for (std::size_t r = 0; r < m; ++r) e.image[r] += f.columns[j][r];
        next.push_back(std::move(e));
      }
    }
    frontier = std::move(next);
  }

  std::vector<HilbertElement> out;
  for (const auto& x : basis) out.push_back(detail::to_element(sys, f, x));
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff (alpha, beta) satisfies every row of the system.
inline bool is_solution(const DiophantineSystem& sys, const HilbertElement& h) {
  if (h.beta.size() != sys.actions.size()) return false;
  for (const auto& p : sys.states) {
    Delta lhs = sys.signs.at(p) * static_cast<Delta>(h.alpha[p]);
    if (sys.signs.at(p) == 0 && h.alpha[p] != 0) return false;
    Delta rhs = 0;
    for (std::size_t a = 0; a < sys.actions.size(); ++a)
      rhs = detail::checked_add(rhs, detail::checked_mul(static_cast<Delta>(h.beta[a]), sys.actions[a][p]));
    if (lhs != rhs) return false;
  }
  return true;
}

inline bool leq(const HilbertElement& a, const HilbertElement& b) {
  if (!a.alpha.leq(b.alpha)) return false;
  for (std::size_t i = 0; i < a.beta.size(); ++i)
    if (a.beta[i] > b.beta[i]) return false;
  return true;
}

inline HilbertElement operator+(const HilbertElement& a, const HilbertElement& b) {
  HilbertElement r{a.alpha + b.alpha, a.beta};
  for (std::size_t i = 0; i < r.beta.size(); ++i) r.beta[i] = detail::checked_add(r.beta[i], b.beta[i]);
  return r;
}

/// Writes a solution as a sum of basis elements (indices into `basis`,
/// repeated by multiplicity). Greedy subtraction always succeeds for
/// solutions of an equation system: removing a basis element below a
/// solution leaves a solution.
inline std::optional<std::vector<std::size_t>> decompose_solution(const DiophantineSystem& sys,
                                                                  const std::vector<HilbertElement>& basis,
                                                                  HilbertElement x) {
  std::vector<std::size_t> parts;
  auto is_zero = [](const HilbertElement& h) {
    return h.alpha.is_zero() && std::all_of(h.beta.begin(), h.beta.end(), [](Count c) { return c == 0; });
  };
  while (!is_zero(x)) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < basis.size() && !pick; ++i)
      if (leq(basis[i], x)) pick = i;
    if (!pick) return std::nullopt;
    parts.push_back(*pick);
    const auto& b = basis[*pick];
    std::map<std::string, Count> alpha;
    for (const auto& [s, c] : x.alpha.entries()) alpha[s] = c - b.alpha[s];
    x.alpha = Configuration(alpha);
    for (std::size_t i = 0; i < x.beta.size(); ++i) x.beta[i] -= b.beta[i];
  }
  (void)sys;
  return parts;
}

}  // namespace poptk
