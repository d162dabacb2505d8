#pragma once

// Exact rational arithmetic with cap-guarded potentiation.
//
// Every value is kept in lowest terms with a positive denominator, so two
// Rationals are equal iff their (numerator, denominator) pairs are equal.
// Operations that can fail (division, potentiation) report a Discard reason
// instead of throwing: a failing candidate expression is dropped, it never
// aborts a search.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace onedigit {

using BigInt = boost::multiprecision::cpp_int;

enum class Discard : std::uint8_t {
  DivByZero,
  PowDomain,
  Overflow,
};

std::string_view to_string(Discard reason);

/// Magnitude bounds that keep the search space finite.
struct Caps {
  std::int64_t max_abs_numerator = 1'000'000'000'000;  // 10^12
  std::int64_t max_denominator = 1'000'000;            // 10^6
  int max_exponent_magnitude = 20;

  static constexpr int kExponentCeiling = 64;

  /// Throws std::invalid_argument unless all bounds are positive and the
  /// exponent bound is at most kExponentCeiling.
  void validate() const;

  /// Numerator and denominator bounds multiplied by `factor` (saturating).
  Caps scaled(std::int64_t factor) const;

  friend bool operator==(const Caps&, const Caps&) = default;
};

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
  explicit Rational(BigInt value) : num_(std::move(value)), den_(1) {}

  /// Reduces to lowest terms. Throws std::domain_error on a zero denominator.
  Rational(BigInt numerator, BigInt denominator);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_.sign(); }

  /// The value as int64 when it is an integer that fits.
  std::optional<std::int64_t> to_int64() const;

  /// "n" for integers, "n/d" otherwise.
  std::string str() const;

  /// Parses the output of str(). Throws std::invalid_argument.
  static Rational from_string(std::string_view text);

  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  void normalize();

  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Either a value or the reason it was discarded.
class Outcome {
 public:
  Outcome(Rational value) : state_(std::move(value)) {}  // NOLINT(implicit)
  Outcome(Discard reason) : state_(reason) {}            // NOLINT(implicit)

  bool ok() const { return std::holds_alternative<Rational>(state_); }
  explicit operator bool() const { return ok(); }

  /// Precondition: ok().
  const Rational& value() const { return std::get<Rational>(state_); }
  /// Precondition: !ok().
  Discard reason() const { return std::get<Discard>(state_); }

  friend bool operator==(const Outcome&, const Outcome&) = default;

 private:
  std::variant<Rational, Discard> state_;
};

std::ostream& operator<<(std::ostream& os, const Outcome& o);

Rational rat_add(const Rational& a, const Rational& b);
Rational rat_sub(const Rational& a, const Rational& b);
Rational rat_mul(const Rational& a, const Rational& b);
Outcome rat_div(const Rational& a, const Rational& b);

/// base^exp for integer exponents with |exp| <= caps.max_exponent_magnitude.
///
/// PowDomain: non-integer exponent, 0^0, or a negative exponent while
/// negative exponents are disabled. DivByZero: 0 to a negative power.
/// Overflow: the exponent exceeds the cap, or the result's numerator or
/// denominator exceeds the caps. Squaring stops as soon as a partial power
/// crosses its bound.
Outcome rat_pow(const Rational& base, const Rational& exp, const Caps& caps,
                bool allow_negative_exponents = false);

bool rat_within(const Rational& v, const Caps& caps);

inline Rational operator+(const Rational& a, const Rational& b) { return rat_add(a, b); }
inline Rational operator-(const Rational& a, const Rational& b) { return rat_sub(a, b); }
inline Rational operator*(const Rational& a, const Rational& b) { return rat_mul(a, b); }

}  // namespace onedigit
