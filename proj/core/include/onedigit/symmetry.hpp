#pragma once

// Parametric single-digit identities: one expression template in the digit
// `a` that evaluates to a known value for every digit in its domain.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "onedigit/expr.hpp"
#include "onedigit/rational.hpp"

namespace onedigit {

/// 10^n + 10^(n-1) + ... + 1, the repunit with n + 1 ones.
Rational f_n_10(int n);

struct Family {
  std::string id;
  /// Template in the letter 'a', e.g. "(aa - a)/(a + a)"; each run of a's is
  /// a repdigit of the substituted digit.
  std::string pattern;
  std::function<Rational(int)> expected;
  std::vector<int> domain;

  /// Throws ParseError if the pattern is malformed.
  Expr build(int a) const;
};

/// Instantiates a pattern for digit `a` (the builder behind Family::build).
Expr instantiate(std::string_view pattern, int a);

std::vector<Family> builtin_families();

struct FamilyPass {};
struct FamilyFail {
  int a = 0;
  EvalOutcome actual;
  Rational expected;
};
using FamilyResult = std::variant<FamilyPass, FamilyFail>;

/// Checks every digit of the domain; reports the first failure.
FamilyResult check_family(const Family& f, const Caps& caps);

}  // namespace onedigit
