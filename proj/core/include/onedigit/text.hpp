#pragma once

// ASCII expression format shared by the corpus files and the CLI.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '×' | '/') factor)*
//   factor := atom ('^' atom)?
//   atom   := repdigit | '(' expr ')'
//
// '+', '-', '*', '/' associate to the left. '^' takes a single atom on each
// side, so "a^b^c" is rejected. Whitespace is ignored. There is no unary
// minus. Every numeral must be a repdigit of one shared digit.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "onedigit/expr.hpp"

namespace onedigit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& message);

  /// Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }
  /// The message without the offset prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

Expr parse(std::string_view text);

/// As parse(), additionally requiring every numeral to use `digit`.
Expr parse(std::string_view text, int digit);

/// Minimal-parenthesis rendering; parse(render(e)) == e structurally.
std::string render(const Expr& e);

}  // namespace onedigit
