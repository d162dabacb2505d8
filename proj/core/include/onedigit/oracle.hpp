#pragma once

// Brute-force reference for the level-set solver.
//
// Enumerates every expression tree with up to five digits, with no
// canonicalization and no value deduplication, and evaluates each tree with
// evaluate(). It shares no code with the solver's search path, so agreement
// between the two is meaningful.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>

#include "onedigit/rational.hpp"
#include "onedigit/solver.hpp"

namespace onedigit {

inline constexpr int kOracleMaxDigits = 5;

class OracleBudgetExceeded : public std::invalid_argument {
 public:
  explicit OracleBudgetExceeded(int requested);
};

/// Minimal digit count per reachable value, for one configuration.
class OracleTable {
 public:
  /// Throws OracleBudgetExceeded when cfg.max_digits > kOracleMaxDigits.
  explicit OracleTable(const SearchConfig& cfg);

  /// nullopt when no tree within the budget evaluates to `target`.
  std::optional<int> minimal_count(const Rational& target) const;

  std::size_t trees_enumerated() const { return trees_; }
  const std::map<Rational, int>& counts() const { return best_; }

 private:
  std::map<Rational, int> best_;
  std::size_t trees_ = 0;
};

/// nullopt stands for NotFoundWithinBudget.
std::optional<int> oracle_minimal_count(const Rational& target, const SearchConfig& cfg);

}  // namespace onedigit
