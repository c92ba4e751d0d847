// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Closed-form bounds: the state-complexity bound on counting thresholds, the
// bottom-extraction bound b, its lower-bound corollary, and the constant
// ladder b, h, k, a, l, r used to combine them.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "poptk/bignum.hpp"
#include "poptk/error.hpp"

namespace poptk {

struct BoundInputs {
  /// |P|, or d.
  std::uint64_t num_states = 1;
  /// width of the reachability relation, or ||T||.
  std::uint64_t width = 0;
  /// |rho_L|, or ||rho_L||.
  std::uint64_t leaders = 0;
};

namespace detail {

inline std::uint64_t bound_base(std::uint64_t t, std::uint64_t l) {
  return checked_add(checked_add<std::uint64_t>(4, checked_mul<std::uint64_t>(4, t)), checked_mul<std::uint64_t>(2, l));
}

inline BigNat ubig(std::uint64_t v) {
  BigNat b;
  mpz_import(b.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return b;
}

}  // namespace detail

/// (4 + 4w + 2l)^(s^((s+2)^2))
inline FactoredNat main_theorem_bound(const BoundInputs& in) {
  const BigNat s = detail::ubig(in.num_states);
  const BigNat e = pow(s, (s + 2) * (s + 2));
  return FactoredNat(detail::bound_base(in.width, in.leaders)).pow(e);
}

/// (4 + 4t + 2r)^(d^d (1 + (2 + d^d)^(d+1)))
inline FactoredNat theorem61_bound(std::uint64_t d, std::uint64_t t_norm, std::uint64_t r_norm) {
  if (d < 1) throw PreconditionError("d must be at least 1");
  const BigNat dd = pow(detail::ubig(d), detail::ubig(d));
  const BigNat e = dd * (1 + pow(2 + dd, detail::ubig(d + 1)));
  return FactoredNat(detail::bound_base(t_norm, r_norm)).pow(e);
}

struct Section8Constants {
  FactoredNat b, h, k, a, ell;
  BigNat r;
  /// Exponent of b: (d-1)^(d-1) (1 + (2 + (d-1)^(d-1))^d).
  BigNat b_exponent;
};

inline Section8Constants section8_constants(std::uint64_t d, std::uint64_t t_norm, std::uint64_t l_norm) {
  if (d < 2) throw PreconditionError("d must be at least 2");
  const BigNat bd = detail::ubig(d);
  const BigNat m = pow(bd - 1, bd - 1);
  Section8Constants c;
  c.b_exponent = m * (1 + pow(2 + m, bd));
  c.b = FactoredNat(detail::bound_base(t_norm, l_norm)).pow(c.b_exponent);
  c.h = FactoredNat(d) * FactoredNat(detail::checked_add<std::uint64_t>(t_norm, 1)) * c.b;
  c.k = FactoredNat(d) * c.h.pow(bd * bd + bd + 1);
  c.a = c.h.pow(2 * bd + 3);
  c.ell = c.h.pow(5 * bd * bd);
  c.r = 2 * c.b_exponent * (5 * bd * bd + 2 * bd + 4);
  return c;
}

struct ConsistencyItem {
  std::string claim;
  bool holds = false;
};

/// The three inequalities chaining the constants back to the main bound:
/// h <= b^2, h^(5d^2+2d+4) <= (4+4t+2l)^r, r <= d^((d+2)^2).
inline std::vector<ConsistencyItem> consistency_check(const BoundInputs& in) {
  const auto d = in.num_states;
  const auto c = section8_constants(d, in.width, in.leaders);
  const BigNat bd = detail::ubig(d);
  std::vector<ConsistencyItem> out;
  out.push_back({"h <= b^2", c.h <= c.b * c.b});
  out.push_back({"h^(5d^2+2d+4) <= (4+4t+2l)^r",
                 c.h.pow(5 * bd * bd + 2 * bd + 4) <= FactoredNat(detail::bound_base(in.width, in.leaders)).pow(c.r)});
  out.push_back({"r <= d^((d+2)^2)", c.r <= pow(bd, (bd + 2) * (bd + 2))});
  return out;
}

namespace detail {

/// floor(((lnln n - lnln 10m) / ln 2)^h - 2) clamped at 0, given n > 10m and
/// an enclosure of ln n at each requested precision.
inline BigNat corollary_floor(const std::function<void(Interval&)>& ln_n, std::uint64_t m, const mpq_class& h) {
  auto floor_at = [&](mpfr_prec_t prec) -> std::optional<BigNat> {
    Interval a(prec), b(prec), l2(prec), hq(prec);
    Mpfr t(prec), u(prec), x_lo(prec), x_hi(prec), y_lo(prec), y_hi(prec);
    ln_n(a);
    mpfr_log(a.lo.get(), a.lo.get(), MPFR_RNDD);
    mpfr_log(a.hi.get(), a.hi.get(), MPFR_RNDU);
    const BigNat ten_m = 10 * ubig(m);
    mpfr_set_z(b.lo.get(), ten_m.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(b.hi.get(), ten_m.get_mpz_t(), MPFR_RNDU);
    mpfr_log(b.lo.get(), b.lo.get(), MPFR_RNDD);
    mpfr_log(b.hi.get(), b.hi.get(), MPFR_RNDU);
    mpfr_log(b.lo.get(), b.lo.get(), MPFR_RNDD);
    mpfr_log(b.hi.get(), b.hi.get(), MPFR_RNDU);
    mpfr_const_log2(l2.lo.get(), MPFR_RNDD);
    mpfr_const_log2(l2.hi.get(), MPFR_RNDU);
    // x = (a - b) / ln 2, known to be positive
    mpfr_sub(x_lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
    mpfr_sub(x_hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
    if (mpfr_sgn(x_lo.get()) < 0) mpfr_set_zero(x_lo.get(), 1);
    mpfr_div(x_lo.get(), x_lo.get(), l2.hi.get(), MPFR_RNDD);
    mpfr_div(x_hi.get(), x_hi.get(), l2.lo.get(), MPFR_RNDU);
    mpfr_set_q(hq.lo.get(), h.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hq.hi.get(), h.get_mpq_t(), MPFR_RNDU);
    // x^h is monotone in x; in h it moves one way or the other, so take both ends
    mpfr_pow(y_lo.get(), x_lo.get(), hq.lo.get(), MPFR_RNDD);
    mpfr_pow(t.get(), x_lo.get(), hq.hi.get(), MPFR_RNDD);
    mpfr_min(y_lo.get(), y_lo.get(), t.get(), MPFR_RNDD);
    mpfr_pow(y_hi.get(), x_hi.get(), hq.lo.get(), MPFR_RNDU);
    mpfr_pow(u.get(), x_hi.get(), hq.hi.get(), MPFR_RNDU);
    mpfr_max(y_hi.get(), y_hi.get(), u.get(), MPFR_RNDU);
    mpfr_sub_ui(y_lo.get(), y_lo.get(), 2, MPFR_RNDD);
    mpfr_sub_ui(y_hi.get(), y_hi.get(), 2, MPFR_RNDU);
    BigNat lo, hi;
    mpfr_get_z(lo.get_mpz_t(), y_lo.get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), y_hi.get(), MPFR_RNDD);
    if (lo < 0) lo = 0;
    if (hi < 0) hi = 0;
    if (lo != hi) return std::nullopt;
    return lo;
  };
  for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t{1} << 16); prec *= 2) {
    auto first = floor_at(prec);
    if (!first) continue;
    auto second = floor_at(2 * prec);
    if (!second) continue;
    if (*first != *second) throw Error("corollary bound: precisions disagree");
    return *first;
  }
  throw Error("corollary bound: floor not determined");
}

inline void check_corollary_domain(std::uint64_t m, const mpq_class& h) {
  if (m == 0) throw PreconditionError("m must be at least 1");
  if (!(h > 0 && h < mpq_class(1, 2))) throw PreconditionError("h must lie strictly between 0 and 1/2");
}

}  // namespace detail

/// floor(((lnln n - lnln 10m) / ln 2)^h - 2), clamped at 0; 0 when n <= 10m.
inline BigNat corollary_state_lower_bound(const FactoredNat& n, std::uint64_t m, mpq_class h) {
  h.canonicalize();
  detail::check_corollary_domain(m, h);
  if (n <= FactoredNat(m) * FactoredNat(10)) return 0;
  return detail::corollary_floor([&](detail::Interval& out) { n.ln_interval(out); }, m, h);
}

inline BigNat corollary_state_lower_bound(const BigNat& n, std::uint64_t m, mpq_class h) {
  h.canonicalize();
  detail::check_corollary_domain(m, h);
  if (n <= 10 * detail::ubig(m)) return 0;
  return detail::corollary_floor(
      [&](detail::Interval& out) {
        mpfr_set_z(out.lo.get(), n.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(out.hi.get(), n.get_mpz_t(), MPFR_RNDU);
        mpfr_log(out.lo.get(), out.lo.get(), MPFR_RNDD);
        mpfr_log(out.hi.get(), out.hi.get(), MPFR_RNDU);
      },
      m, h);
}

}  // namespace poptk
