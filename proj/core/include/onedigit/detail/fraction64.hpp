#pragma once

// Fixed-width fractions used inside the level-set search.
//
// Any value within Caps fits in int64 numerator/denominator (both caps are
// int64), and every product of two such numbers fits in __int128. Results are
// only produced when they are within the caps; nullopt covers both undefined
// operations and out-of-caps results, which the search treats the same way.

#include <cstdint>
#include <numeric>
#include <optional>

#include "onedigit/rational.hpp"

namespace onedigit::detail {

using i128 = __int128;
using u128 = unsigned __int128;

struct Frac64 {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Frac64&, const Frac64&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const Frac64& f) {
    return H::combine(std::move(h), f.num, f.den);
  }
};

/// Numeric three-way comparison.
inline int compare(const Frac64& a, const Frac64& b) {
  if (a.den == b.den) return (a.num > b.num) - (a.num < b.num);
  const i128 lhs = static_cast<i128>(a.num) * b.den;
  const i128 rhs = static_cast<i128>(b.num) * a.den;
  return (lhs > rhs) - (lhs < rhs);
}

inline bool numeric_less(const Frac64& a, const Frac64& b) { return compare(a, b) < 0; }

inline Rational to_rational(const Frac64& f) { return Rational(BigInt(f.num), BigInt(f.den)); }

/// Exact conversion when the value fits; nullopt otherwise.
std::optional<Frac64> from_rational(const Rational& r);

inline std::uint64_t abs_u64(std::int64_t v) {
  return v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

inline u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v); }

/// Narrows num/den (already coprime, den > 0) when within the caps.
inline std::optional<Frac64> within(i128 num, u128 den, const Caps& caps) {
  if (abs_u128(num) > static_cast<u128>(caps.max_abs_numerator)) return std::nullopt;
  if (den > static_cast<u128>(caps.max_denominator)) return std::nullopt;
  return Frac64{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

std::optional<Frac64> add_slow(const Frac64& a, const Frac64& b, const Caps& caps);

inline std::optional<Frac64> add(const Frac64& a, const Frac64& b, const Caps& caps) {
  if (a.den == 1 && b.den == 1) {
    return within(static_cast<i128>(a.num) + b.num, 1, caps);
  }
  const std::uint64_t ad = static_cast<std::uint64_t>(a.den);
  const std::uint64_t bd = static_cast<std::uint64_t>(b.den);
  const std::uint64_t g = std::gcd(ad, bd);
  const i128 l = static_cast<i128>(a.num) * static_cast<i128>(bd / g);
  const i128 r = static_cast<i128>(b.num) * static_cast<i128>(ad / g);
  i128 t = 0;
  if (__builtin_add_overflow(l, r, &t)) return add_slow(a, b, caps);
  if (t == 0) return Frac64{0, 1};
  std::uint64_t g2 = 1;
  if (g != 1) g2 = std::gcd(g, static_cast<std::uint64_t>(abs_u128(t) % g));
  return within(t / static_cast<i128>(g2), static_cast<u128>(ad / g) * (bd / g2), caps);
}

inline std::optional<Frac64> sub(const Frac64& a, const Frac64& b, const Caps& caps) {
  // |b.num| <= caps.max_abs_numerator <= INT64_MAX, so negation is safe.
  return add(a, Frac64{-b.num, b.den}, caps);
}

inline std::optional<Frac64> mul(const Frac64& a, const Frac64& b, const Caps& caps) {
  if (a.num == 0 || b.num == 0) return Frac64{0, 1};
  const std::uint64_t g1 = std::gcd(abs_u64(a.num), static_cast<std::uint64_t>(b.den));
  const std::uint64_t g2 = std::gcd(abs_u64(b.num), static_cast<std::uint64_t>(a.den));
  const i128 num = static_cast<i128>(a.num / static_cast<std::int64_t>(g1)) *
                   (b.num / static_cast<std::int64_t>(g2));
  const u128 den = static_cast<u128>(static_cast<std::uint64_t>(a.den) / g2) *
                   (static_cast<std::uint64_t>(b.den) / g1);
  return within(num, den, caps);
}

inline std::optional<Frac64> div(const Frac64& a, const Frac64& b, const Caps& caps) {
  if (b.num == 0) return std::nullopt;
  const Frac64 inv = b.num < 0 ? Frac64{-b.den, -b.num} : Frac64{b.den, b.num};
  return mul(a, inv, caps);
}

/// |base|^exp bounded by `bound`; nullopt once a partial power exceeds it.
inline std::optional<u128> bounded_pow(std::uint64_t base, int exp, std::int64_t bound) {
  if (base <= 1) return static_cast<u128>(exp == 0 ? 1 : base);
  const u128 limit = static_cast<u128>(bound);
  u128 b = base;
  u128 result = 1;
  if (b > limit) return std::nullopt;
  while (exp > 0) {
    if (exp & 1) {
      result *= b;
      if (result > limit) return std::nullopt;
    }
    exp >>= 1;
    if (exp > 0) {
      b *= b;
      if (b > limit) return std::nullopt;
    }
  }
  return result;
}

inline std::optional<Frac64> pow(const Frac64& base, const Frac64& exp, const Caps& caps,
                                 bool allow_negative_exponents) {
  if (exp.den != 1) return std::nullopt;
  if (exp.num < 0 && !allow_negative_exponents) return std::nullopt;
  if (exp.num == 0) {
    if (base.num == 0) return std::nullopt;
    return Frac64{1, 1};
  }
  const std::uint64_t magnitude = abs_u64(exp.num);
  if (magnitude > static_cast<std::uint64_t>(caps.max_exponent_magnitude)) return std::nullopt;
  if (exp.num < 0 && base.num == 0) return std::nullopt;
  const int e = static_cast<int>(magnitude);
  const bool invert = exp.num < 0;
  const std::uint64_t top = invert ? static_cast<std::uint64_t>(base.den) : abs_u64(base.num);
  const std::uint64_t bottom = invert ? abs_u64(base.num) : static_cast<std::uint64_t>(base.den);
  auto num = bounded_pow(top, e, caps.max_abs_numerator);
  if (!num) return std::nullopt;
  auto den = bounded_pow(bottom, e, caps.max_denominator);
  if (!den) return std::nullopt;
  i128 signed_num = static_cast<i128>(*num);
  if (base.num < 0 && (e & 1)) signed_num = -signed_num;
  return within(signed_num, *den, caps);
}

}  // namespace onedigit::detail
