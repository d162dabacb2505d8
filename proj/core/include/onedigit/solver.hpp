#pragma once

// Minimal digit-count search by level sets.
//
// S_k maps every value reachable with exactly k copies of the digit (within
// the caps) to one witness expression. S_k is seeded with the k-digit repdigit
// and filled with op(a, b) for a in S_i, b in S_{k-i}. Among all k-digit
// candidates for a value the witness kept is the smallest in the canonical
// Expr order, which makes the result independent of evaluation order and of
// the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "onedigit/detail/fraction64.hpp"
#include "onedigit/expr.hpp"
#include "onedigit/rational.hpp"

namespace onedigit {

/// Bit set over Op.
class OpSet {
 public:
  constexpr OpSet() = default;
  constexpr OpSet(std::initializer_list<Op> ops) {
    for (Op op : ops) bits_ |= bit(op);
  }
  static constexpr OpSet all() { return OpSet{Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow}; }

  constexpr bool contains(Op op) const { return (bits_ & bit(op)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr void insert(Op op) { bits_ |= bit(op); }

  friend constexpr bool operator==(OpSet, OpSet) = default;

 private:
  static constexpr std::uint8_t bit(Op op) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(op)); }
  std::uint8_t bits_ = 0;
};

struct SearchConfig {
  int digit = 1;
  int max_digits = 6;
  Caps caps;
  OpSet ops = OpSet::all();
  bool allow_negative_exponents = false;
  /// Worker threads for level construction; 0 means hardware concurrency.
  unsigned threads = 1;
  /// Upper bound on level-set memory; 0 means half of physical memory.
  std::size_t memory_limit_bytes = 0;

  /// Throws std::invalid_argument.
  void validate() const;
  std::size_t effective_memory_limit() const;
  unsigned effective_threads() const;
};

/// The level sets would not fit in the configured memory limit.
class BudgetTooLarge : public std::runtime_error {
 public:
  BudgetTooLarge(int level, std::size_t estimated_bytes, std::size_t limit_bytes);
  int level() const { return level_; }
  std::size_t estimated_bytes() const { return estimated_; }
  std::size_t limit_bytes() const { return limit_; }

 private:
  int level_;
  std::size_t estimated_;
  std::size_t limit_;
};

struct Solution {
  int digit = 0;
  Rational target;
  Expr expr;
  int count = 0;
};

struct NotFoundWithinBudget {
  int budget = 0;
  friend bool operator==(const NotFoundWithinBudget&, const NotFoundWithinBudget&) = default;
};

using SolveResult = std::variant<Solution, NotFoundWithinBudget>;

struct RangeRow {
  std::int64_t target = 0;
  SolveResult result;
};

class LevelSets;

/// Read-only view of one level S_k.
class LevelSet {
 public:
  int k() const { return k_; }
  std::size_t size() const { return end_ - begin_; }
  /// True when the level was built for specific targets only.
  bool partial() const;

  std::optional<Expr> find(const Rational& value) const;
  bool contains(const Rational& value) const;

  /// i-th value in increasing numeric order.
  Rational value(std::size_t i) const;
  Expr expr(std::size_t i) const;

 private:
  friend class LevelSets;
  LevelSet(const LevelSets* owner, int k, std::size_t begin, std::size_t end)
      : owner_(owner), k_(k), begin_(begin), end_(end) {}

  std::optional<std::size_t> index_of(const detail::Frac64& v) const;

  const LevelSets* owner_;
  int k_;
  std::size_t begin_;
  std::size_t end_;
};

/// Incrementally built S_1, S_2, ... for one configuration.
class LevelSets {
 public:
  explicit LevelSets(SearchConfig cfg);

  const SearchConfig& config() const { return cfg_; }
  int levels() const { return static_cast<int>(level_begin_.size()) - 2; }
  LevelSet level(int k) const;
  std::size_t total_entries() const { return entries_.size(); }

  /// Builds S_{levels()+1} in full. Throws BudgetTooLarge.
  void extend();

  /// Builds S_{levels()+1} keeping only the listed values. No further level
  /// can be built on top of a partial one.
  void extend_partial(std::span<const detail::Frac64> keep);

 private:
  friend class LevelSet;

  struct Entry {
    detail::Frac64 value;
    std::uint32_t left = 0;   // entry id, or the repeat count for leaves
    std::uint32_t right = 0;  // entry id
    std::uint8_t op = kLeaf;
  };
  static constexpr std::uint8_t kLeaf = 0xFF;

  class Builder;

  void build_next(const std::vector<detail::Frac64>* keep);
  void update_ranks(std::size_t new_begin);
  std::uint64_t order_key(std::uint32_t id) const;
  Expr materialize(std::uint32_t id) const;

  SearchConfig cfg_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> level_begin_;
  std::vector<bool> level_partial_;
  // rank_[id] is the position of entry id in the canonical Expr order;
  // order_[rank] is its inverse.
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint32_t> order_;
};

/// All levels 1..cfg.max_digits in full.
LevelSets build_level_sets(const SearchConfig& cfg);

SolveResult solve(const Rational& target, const SearchConfig& cfg);

/// One row per integer in [lo, hi], all answered from one level-set build.
std::vector<RangeRow> solve_range(std::int64_t lo, std::int64_t hi, const SearchConfig& cfg);

/// As solve_range for an arbitrary target list; results follow input order.
std::vector<SolveResult> solve_targets(std::span<const Rational> targets, const SearchConfig& cfg);

}  // namespace onedigit
