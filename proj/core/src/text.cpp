#include "onedigit/text.hpp"

#include <optional>

namespace onedigit {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      detail_(message) {}

namespace {

constexpr std::string_view kTimesSign = "\xC3\x97";  // U+00D7 in UTF-8

class Parser {
 public:
  Parser(std::string_view text, std::optional<int> digit) : text_(text), digit_(digit) {}

  Expr run() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = expr();
    skip_space();
    if (!at_end()) {
      if (peek() == ')') fail("unbalanced ')'");
      if (peek() == '^') fail("chained '^' is not allowed; parenthesize the exponent");
      fail("unexpected token '" + token_text() + "'");
    }
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        lhs = combine(Op::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = combine(Op::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      skip_space();
      if (accept('*') || accept(kTimesSign)) {
        lhs = combine(Op::Mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = combine(Op::Div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = atom();
    skip_space();
    if (accept('^')) {
      Expr exponent = atom();
      skip_space();
      if (!at_end() && peek() == '^') fail("chained '^' is not allowed; parenthesize the exponent");
      return combine(Op::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  Expr atom() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    const std::size_t start = pos_;
    if (accept('(')) {
      Expr inner = expr();
      skip_space();
      if (!accept(')')) {
        if (at_end()) fail(start, "unbalanced '('");
        fail("expected ')' but found '" + token_text() + "'");
      }
      return inner;
    }
    if (is_digit(peek())) return numeral();
    if (peek() == ')') fail("unbalanced ')'");
    fail("unexpected token '" + token_text() + "'");
  }

  Expr numeral() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) ++pos_;
    std::string_view lit = text_.substr(start, pos_ - start);
    const char d = lit.front();
    for (char c : lit) {
      if (c != d) fail(start, "numeral '" + std::string(lit) + "' is not a repdigit");
    }
    if (d == '0') fail(start, "digit 0 is not allowed");
    const int digit = d - '0';
    if (digit_ && *digit_ != digit) {
      fail(start, "mixed digits: expected " + std::to_string(*digit_) + ", found " +
                      std::to_string(digit));
    }
    if (!digit_) digit_ = digit;
    return Expr::leaf(digit, static_cast<int>(lit.size()));
  }

  Expr combine(Op op, Expr lhs, Expr rhs) {
    return Expr::node(op, std::move(lhs), std::move(rhs));
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void skip_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
      ++pos_;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  bool accept(char c) {
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept(std::string_view s) {
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  std::string token_text() const {
    if (at_end()) return "<end>";
    // Keep multi-byte UTF-8 sequences intact in messages.
    std::size_t len = 1;
    const auto lead = static_cast<unsigned char>(text_[pos_]);
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    return std::string(text_.substr(pos_, len));
  }

  [[noreturn]] void fail(const std::string& message) const { fail(pos_, message); }
  [[noreturn]] void fail(std::size_t at, const std::string& message) const {
    throw ParseError(at, message);
  }

  std::string_view text_;
  std::optional<int> digit_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  if (e.is_leaf()) return 4;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Pow: return 3;
  }
  return 0;
}

void render_into(const Expr& e, std::string& out);

void render_operand(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  render_into(e, out);
  if (parens) out += ')';
}

void render_into(const Expr& e, std::string& out) {
  if (e.is_leaf()) {
    out.append(static_cast<std::size_t>(e.repeat()), static_cast<char>('0' + e.digit()));
    return;
  }
  const int prec = precedence(e);
  if (e.op() == Op::Pow) {
    render_operand(e.left(), !e.left().is_leaf(), out);
    out += '^';
    render_operand(e.right(), !e.right().is_leaf(), out);
    return;
  }
  // Left-associative: an equal-precedence right operand keeps its parens.
  render_operand(e.left(), precedence(e.left()) < prec, out);
  switch (e.op()) {
    case Op::Add: out += " + "; break;
    case Op::Sub: out += " - "; break;
    case Op::Mul: out += " * "; break;
    case Op::Div: out += '/'; break;
    case Op::Pow: break;
  }
  render_operand(e.right(), precedence(e.right()) <= prec, out);
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text, std::nullopt).run(); }

Expr parse(std::string_view text, int digit) { return Parser(text, digit).run(); }

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

}  // namespace onedigit
