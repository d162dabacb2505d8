#include "onedigit/expr.hpp"

#include <stdexcept>
#include <string>

namespace onedigit {

struct Expr::Rep {
  std::uint8_t digit = 0;
  Op op = Op::Add;
  int repeat = 0;
  // Null for leaves.
  Expr left{nullptr};
  Expr right{nullptr};
};

char op_symbol(Op op) {
  switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    case Op::Pow: return '^';
  }
  return '?';
}

Expr Expr::leaf(int digit, int repeat) {
  if (digit < 1 || digit > 9) throw std::invalid_argument("leaf digit must be in 1..9");
  if (repeat < 1) throw std::invalid_argument("leaf repeat must be >= 1");
  auto rep = std::make_shared<Rep>();
  rep->digit = static_cast<std::uint8_t>(digit);
  rep->repeat = repeat;
  return Expr(std::move(rep));
}

Expr Expr::node(Op op, Expr left, Expr right) {
  if (left.digit() != right.digit()) {
    throw std::invalid_argument("operands use different digits (" + std::to_string(left.digit()) +
                                " and " + std::to_string(right.digit()) + ")");
  }
  auto rep = std::make_shared<Rep>();
  rep->digit = left.rep_->digit;
  rep->op = op;
  rep->left = std::move(left);
  rep->right = std::move(right);
  return Expr(std::move(rep));
}

bool Expr::is_leaf() const { return rep_->left.rep_ == nullptr; }
int Expr::digit() const { return rep_->digit; }

int Expr::repeat() const {
  if (!is_leaf()) throw std::logic_error("repeat() on a node");
  return rep_->repeat;
}

Op Expr::op() const {
  if (is_leaf()) throw std::logic_error("op() on a leaf");
  return rep_->op;
}

const Expr& Expr::left() const {
  if (is_leaf()) throw std::logic_error("left() on a leaf");
  return rep_->left;
}

const Expr& Expr::right() const {
  if (is_leaf()) throw std::logic_error("right() on a leaf");
  return rep_->right;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.rep_->digit == b.rep_->digit && a.rep_->repeat == b.rep_->repeat;
  return a.rep_->op == b.rep_->op && a.left() == b.left() && a.right() == b.right();
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (a.is_leaf() != b.is_leaf()) {
    return a.is_leaf() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_leaf()) {
    if (auto c = a.rep_->digit <=> b.rep_->digit; c != 0) return c;
    return a.rep_->repeat <=> b.rep_->repeat;
  }
  if (auto c = a.rep_->op <=> b.rep_->op; c != 0) return c;
  if (auto c = a.left() <=> b.left(); c != 0) return c;
  return a.right() <=> b.right();
}

Rational repdigit_value(int digit, int repeat) {
  if (digit < 1 || digit > 9 || repeat < 1) {
    throw std::invalid_argument("repdigit_value: digit in 1..9 and repeat >= 1 required");
  }
  BigInt value = 0;
  for (int i = 0; i < repeat; ++i) value = value * 10 + digit;
  return Rational(std::move(value));
}

EvalOutcome evaluate(const Expr& e, const Caps& caps, bool allow_negative_exponents) {
  if (e.is_leaf()) {
    Rational v = repdigit_value(e.digit(), e.repeat());
    if (!rat_within(v, caps)) return Discard::Overflow;
    return v;
  }
  EvalOutcome lhs = evaluate(e.left(), caps, allow_negative_exponents);
  if (!lhs) return lhs;
  EvalOutcome rhs = evaluate(e.right(), caps, allow_negative_exponents);
  if (!rhs) return rhs;

  const Rational& a = lhs.value();
  const Rational& b = rhs.value();
  EvalOutcome out = Rational();
  switch (e.op()) {
    case Op::Add: out = rat_add(a, b); break;
    case Op::Sub: out = rat_sub(a, b); break;
    case Op::Mul: out = rat_mul(a, b); break;
    case Op::Div: out = rat_div(a, b); break;
    case Op::Pow: out = rat_pow(a, b, caps, allow_negative_exponents); break;
  }
  if (out && !rat_within(out.value(), caps)) return Discard::Overflow;
  return out;
}

int digit_count(const Expr& e) {
  if (e.is_leaf()) return e.repeat();
  return digit_count(e.left()) + digit_count(e.right());
}

std::size_t tree_size(const Expr& e) {
  if (e.is_leaf()) return 1;
  return 1 + tree_size(e.left()) + tree_size(e.right());
}

Expr canonicalize(const Expr& e) {
  if (e.is_leaf()) return e;
  Expr lhs = canonicalize(e.left());
  Expr rhs = canonicalize(e.right());
  if (is_commutative(e.op()) && rhs < lhs) std::swap(lhs, rhs);
  return Expr::node(e.op(), std::move(lhs), std::move(rhs));
}

}  // namespace onedigit
