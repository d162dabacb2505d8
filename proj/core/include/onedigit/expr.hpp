#pragma once

// Single-digit expression trees.
//
// A leaf is a repdigit: Leaf(4, 3) is the numeral 444 and costs three digits.
// Internal nodes apply one of the five binary operations. Trees are immutable
// and share subtrees, so copying an Expr is a reference-count bump.

#include <compare>
#include <cstdint>
#include <memory>
#include <string_view>

#include "onedigit/rational.hpp"

namespace onedigit {

// Declaration order is the operator tag order used by the canonical ordering.
enum class Op : std::uint8_t { Add, Sub, Mul, Div, Pow };

inline constexpr Op kAllOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow};

char op_symbol(Op op);
constexpr bool is_commutative(Op op) { return op == Op::Add || op == Op::Mul; }

using EvalOutcome = Outcome;

class Expr {
 public:
  /// digit in 1..9, repeat >= 1; throws std::invalid_argument otherwise.
  static Expr leaf(int digit, int repeat = 1);
  /// Throws std::invalid_argument if the operands use different digits.
  static Expr node(Op op, Expr left, Expr right);

  bool is_leaf() const;
  /// The digit every leaf of this tree carries.
  int digit() const;
  /// Leaf only.
  int repeat() const;
  /// Node only.
  Op op() const;
  const Expr& left() const;
  const Expr& right() const;

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  /// Canonical total order: leaves before nodes; leaves by (digit, repeat);
  /// nodes by operator tag, then left child, then right child.
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

 private:
  struct Rep;
  explicit Expr(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

/// digit * (10^repeat - 1) / 9
Rational repdigit_value(int digit, int repeat);

/// Exact value of `e`. Children are evaluated left before right and the first
/// failure wins. Any intermediate value outside `caps` is an Overflow.
EvalOutcome evaluate(const Expr& e, const Caps& caps, bool allow_negative_exponents = false);

/// Total number of digit occurrences (sum of leaf repeats).
int digit_count(const Expr& e);

/// Recursively orders the operands of Add and Mul nodes. Idempotent.
Expr canonicalize(const Expr& e);

/// Number of nodes, leaves included.
std::size_t tree_size(const Expr& e);

}  // namespace onedigit
