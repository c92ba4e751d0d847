// Copyright (c) poptk contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact big naturals. BigNat is a plain GMP integer. FactoredNat keeps a
// natural as a product of prime powers with BigNat exponents, which lets
// towers such as 8^(6^64) be multiplied, raised and compared exactly
// without ever writing their digits down.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "poptk/error.hpp"

namespace poptk {

using BigNat = mpz_class;

namespace detail {

/// RAII holder for an MPFR float.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  ~Mpfr() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// Closed interval [lo, hi] of reals with outward-rounded endpoints.
struct Interval {
  Mpfr lo;
  Mpfr hi;
  explicit Interval(mpfr_prec_t prec) : lo(prec), hi(prec) {}
};

inline std::size_t bit_length(const BigNat& n) { return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

}  // namespace detail

/// Exact b^e for exponents that fit a machine word.
inline BigNat pow(const BigNat& base, const BigNat& exponent) {
  if (exponent == 0) return 1;
  if (base == 0 || base == 1) return base;
  if (!exponent.fits_ulong_p()) throw OverflowError("exponent too large to materialize");
  BigNat r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
  return r;
}

inline BigNat pow(std::uint64_t base, std::uint64_t exponent) { return pow(BigNat(base), BigNat(exponent)); }

inline std::size_t decimal_digits(const BigNat& n) {
  if (n == 0) return 1;
  return n.get_str(10).size();
}

class FactoredNat {
 public:
  /// One.
  FactoredNat() = default;

  FactoredNat(std::uint64_t n) {  // NOLINT(google-explicit-constructor)
    if (n == 0) {
      zero_ = true;
      return;
    }
    for (std::uint64_t p = 2; p * p <= n; ++p) {
      while (n % p == 0) {
        exps_[p] += 1;
        n /= p;
      }
    }
    if (n > 1) exps_[n] += 1;
  }

  static FactoredNat power(std::uint64_t base, const BigNat& exponent) { return FactoredNat(base).pow(exponent); }

  bool is_zero() const { return zero_; }
  bool is_one() const { return !zero_ && exps_.empty(); }
  const std::map<std::uint64_t, BigNat>& factors() const { return exps_; }

  FactoredNat pow(const BigNat& e) const {
    if (e < 0) throw PreconditionError("negative exponent");
    if (e == 0) return FactoredNat();
    FactoredNat r = *this;
    for (auto& [p, x] : r.exps_) x *= e;
    return r;
  }

  friend FactoredNat operator*(const FactoredNat& a, const FactoredNat& b) {
    if (a.zero_ || b.zero_) return FactoredNat(0);
    FactoredNat r = a;
    for (const auto& [p, x] : b.exps_) r.exps_[p] += x;
    return r;
  }

  /// Upper bound on the number of bits of the value.
  BigNat bit_length_bound() const {
    if (zero_) return 0;
    BigNat bits = 1;
    for (const auto& [p, x] : exps_) bits += x * static_cast<unsigned long>(detail::bit_length(BigNat(p)));
    return bits;
  }

  /// The value as a BigNat, unless it would exceed `max_bits` bits.
  std::optional<BigNat> materialize(std::size_t max_bits = std::size_t{1} << 24) const {
    if (zero_) return BigNat(0);
    if (bit_length_bound() > BigNat(static_cast<unsigned long>(max_bits))) return std::nullopt;
    BigNat r = 1;
    for (const auto& [p, x] : exps_) r *= poptk::pow(BigNat(p), x);
    return r;
  }

  /// Exact number of decimal digits, certified by interval logarithms.
  BigNat decimal_digits() const {
    if (zero_ || is_one()) return 1;
    if (auto k = power_of_ten()) return *k + 1;
    for (mpfr_prec_t prec = start_precision();; prec *= 2) {
      detail::Interval lg(prec);
      log_interval(exps_, lg, 10);
      BigNat lo, hi;
      mpfr_get_z(lo.get_mpz_t(), lg.lo.get(), MPFR_RNDD);
      mpfr_get_z(hi.get_mpz_t(), lg.hi.get(), MPFR_RNDD);
      if (lo == hi) return lo + 1;
      if (prec > (mpfr_prec_t{1} << 20)) throw Error("digit count did not converge");
    }
  }

  /// Natural logarithm enclosure, for callers doing their own interval work.
  void ln_interval(detail::Interval& out) const {
    if (zero_) throw PreconditionError("logarithm of zero");
    log_interval(exps_, out, 0);
  }

  std::string to_string() const {
    if (zero_) return "0";
    if (auto v = materialize(256)) return v->get_str();
    std::string s;
    for (const auto& [p, x] : exps_) {
      if (!s.empty()) s += " * ";
      s += std::to_string(p) + "^" + x.get_str();
    }
    return s;
  }

  friend std::strong_ordering operator<=>(const FactoredNat& a, const FactoredNat& b) {
    if (a.zero_ || b.zero_) {
      if (a.zero_ && b.zero_) return std::strong_ordering::equal;
      return a.zero_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    // Cancel common factors; what remains on each side shares no prime, so
    // the two sides are equal only when both are empty.
    std::map<std::uint64_t, BigNat> left, right;
    std::map<std::uint64_t, BigNat> net = a.exps_;
    for (const auto& [p, x] : b.exps_) net[p] -= x;
    for (const auto& [p, x] : net) {
      if (x > 0) left[p] = x;
      if (x < 0) right[p] = -x;
    }
    if (left.empty() && right.empty()) return std::strong_ordering::equal;
    if (right.empty()) return std::strong_ordering::greater;
    if (left.empty()) return std::strong_ordering::less;
    mpfr_prec_t prec = 64;
    for (const auto* m : {&left, &right})
      for (const auto& [p, x] : *m) prec = std::max<mpfr_prec_t>(prec, 64 + 2 * detail::bit_length(x));
    for (;; prec *= 2) {
      detail::Interval l(prec), r(prec);
      log_interval(left, l, 0);
      log_interval(right, r, 0);
      if (mpfr_less_p(l.hi.get(), r.lo.get())) return std::strong_ordering::less;
      if (mpfr_greater_p(l.lo.get(), r.hi.get())) return std::strong_ordering::greater;
      if (prec > (mpfr_prec_t{1} << 22)) throw Error("comparison did not converge");
    }
  }
  friend bool operator==(const FactoredNat& a, const FactoredNat& b) { return a.zero_ == b.zero_ && a.exps_ == b.exps_; }

 private:
  std::optional<BigNat> power_of_ten() const {
    for (const auto& [p, x] : exps_)
      if (p != 2 && p != 5) return std::nullopt;
    auto two = exps_.find(2), five = exps_.find(5);
    if (two == exps_.end() || five == exps_.end() || two->second != five->second) return std::nullopt;
    return two->second;
  }

  mpfr_prec_t start_precision() const {
    mpfr_prec_t prec = 64;
    for (const auto& [p, x] : exps_) prec = std::max<mpfr_prec_t>(prec, 64 + 2 * detail::bit_length(x));
    return prec;
  }

  /// Sum of x_p * log_base(p) into [out.lo, out.hi]; base 0 means natural log.
  static void log_interval(const std::map<std::uint64_t, BigNat>& m, detail::Interval& out, unsigned base) {
    auto prec = mpfr_get_prec(out.lo.get());
    mpfr_set_zero(out.lo.get(), 1);
    mpfr_set_zero(out.hi.get(), 1);
    detail::Mpfr t(prec), d(prec);
    for (const auto& [p, x] : m) {
      for (auto [dst, rnd, inv] : {std::tuple{out.lo.get(), MPFR_RNDD, MPFR_RNDU}, std::tuple{out.hi.get(), MPFR_RNDU, MPFR_RNDD}}) {
        mpfr_log_ui(t.get(), p, rnd);
        if (base != 0) {
          mpfr_log_ui(d.get(), base, inv);
          mpfr_div(t.get(), t.get(), d.get(), rnd);
        }
        mpfr_mul_z(t.get(), t.get(), x.get_mpz_t(), rnd);
        mpfr_add(dst, dst, t.get(), rnd);
      }
    }
  }

  bool zero_ = false;
  std::map<std::uint64_t, BigNat> exps_;
};

}  // namespace poptk
