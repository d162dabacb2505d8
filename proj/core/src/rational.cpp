#include "onedigit/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace onedigit {

std::string_view to_string(Discard reason) {
  switch (reason) {
    case Discard::DivByZero: return "DivByZero";
    case Discard::PowDomain: return "PowDomain";
    case Discard::Overflow: return "Overflow";
  }
  return "?";
}

void Caps::validate() const {
  if (max_abs_numerator <= 0 || max_denominator <= 0 || max_exponent_magnitude <= 0) {
    throw std::invalid_argument("caps: all bounds must be positive");
  }
  if (max_exponent_magnitude > kExponentCeiling) {
    throw std::invalid_argument("caps: max_exponent_magnitude must be <= 64");
  }
}

namespace {

std::int64_t saturating_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return std::numeric_limits<std::int64_t>::max();
  return out;
}

}  // namespace

Caps Caps::scaled(std::int64_t factor) const {
  Caps out = *this;
  out.max_abs_numerator = saturating_mul(max_abs_numerator, factor);
  out.max_denominator = saturating_mul(max_denominator, factor);
  return out;
}

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::optional<std::int64_t> Rational::to_int64() const {
  if (den_ != 1) return std::nullopt;
  if (num_ > std::numeric_limits<std::int64_t>::max() ||
      num_ < std::numeric_limits<std::int64_t>::min()) {
    return std::nullopt;
  }
  return num_.convert_to<std::int64_t>();
}

std::string Rational::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational Rational::from_string(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start) throw std::invalid_argument("rational: empty integer");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw std::invalid_argument("rational: bad character in '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den.is_zero()) throw std::invalid_argument("rational: zero denominator");
  return Rational(parse_int(text.substr(0, slash)), std::move(den));
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = -out.num_;
  return out;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_.compare(b.num_) <=> 0;
  BigInt lhs = a.num_ * b.den_;
  BigInt rhs = b.num_ * a.den_;
  return lhs.compare(rhs) <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::ostream& operator<<(std::ostream& os, const Outcome& o) {
  if (o.ok()) return os << "Value(" << o.value() << ")";
  return os << "Discard(" << to_string(o.reason()) << ")";
}

Rational rat_add(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.denominator() == b.denominator()) {
    return Rational(a.numerator() + b.numerator(), a.denominator());
  }
  return Rational(a.numerator() * b.denominator() + b.numerator() * a.denominator(),
                  a.denominator() * b.denominator());
}

Rational rat_sub(const Rational& a, const Rational& b) { return rat_add(a, -b); }

Rational rat_mul(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  return Rational(a.numerator() * b.numerator(), a.denominator() * b.denominator());
}

Outcome rat_div(const Rational& a, const Rational& b) {
  if (b.is_zero()) return Discard::DivByZero;
  return Rational(a.numerator() * b.denominator(), a.denominator() * b.numerator());
}

namespace {

// |base|^exp, or nullopt once any partial power exceeds `bound`. For
// |base| >= 2 every partial power divides the final one, so an early exit
// means the final power is out of bounds too.
std::optional<BigInt> bounded_pow(BigInt base, int exp, std::int64_t bound) {
  if (base < 0) base = -base;
  if (base <= 1) return exp == 0 ? BigInt(1) : base;
  BigInt result = 1;
  while (exp > 0) {
    if (exp & 1) {
      result *= base;
      if (result > bound) return std::nullopt;
    }
    exp >>= 1;
    if (exp > 0) {
      base *= base;
      if (base > bound) return std::nullopt;
    }
  }
  return result;
}

}  // namespace

Outcome rat_pow(const Rational& base, const Rational& exp, const Caps& caps,
                bool allow_negative_exponents) {
  if (!exp.is_integer()) return Discard::PowDomain;
  const bool negative = exp.sign() < 0;
  if (negative && !allow_negative_exponents) return Discard::PowDomain;
  const BigInt magnitude = negative ? BigInt(-exp.numerator()) : exp.numerator();
  if (magnitude.is_zero()) {
    if (base.is_zero()) return Discard::PowDomain;
    return Rational(1);
  }
  if (negative && base.is_zero()) return Discard::DivByZero;
  if (magnitude > caps.max_exponent_magnitude) return Discard::Overflow;
  const int e = magnitude.convert_to<int>();

  // With a negative exponent the base's denominator lands on top.
  const BigInt& top = negative ? base.denominator() : base.numerator();
  const BigInt& bottom = negative ? base.numerator() : base.denominator();
  auto num = bounded_pow(top, e, caps.max_abs_numerator);
  if (!num) return Discard::Overflow;
  auto den = bounded_pow(bottom, e, caps.max_denominator);
  if (!den) return Discard::Overflow;

  BigInt signed_num = std::move(*num);
  if (base.sign() < 0 && (e & 1)) signed_num = -signed_num;
  return Rational(std::move(signed_num), std::move(*den));
}

bool rat_within(const Rational& v, const Caps& caps) {
  const BigInt& n = v.numerator();
  if (n > caps.max_abs_numerator || n < -BigInt(caps.max_abs_numerator)) return false;
  return v.denominator() <= caps.max_denominator;
}

}  // namespace onedigit
