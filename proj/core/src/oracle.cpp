#include "onedigit/oracle.hpp"

#include <string>
#include <vector>

#include "onedigit/expr.hpp"

namespace onedigit {

OracleBudgetExceeded::OracleBudgetExceeded(int requested)
    : std::invalid_argument("oracle enumerates at most " + std::to_string(kOracleMaxDigits) +
                            " digits, requested " + std::to_string(requested)) {}

OracleTable::OracleTable(const SearchConfig& cfg) {
  cfg.validate();
  if (cfg.max_digits > kOracleMaxDigits) throw OracleBudgetExceeded(cfg.max_digits);

  // trees[k]: every tree with exactly k digits.
  std::vector<std::vector<Expr>> trees(static_cast<std::size_t>(cfg.max_digits) + 1);
  for (int k = 1; k <= cfg.max_digits; ++k) {
    auto& out = trees[static_cast<std::size_t>(k)];
    out.push_back(Expr::leaf(cfg.digit, k));
    for (int i = 1; i < k; ++i) {
      for (const Expr& lhs : trees[static_cast<std::size_t>(i)]) {
        for (const Expr& rhs : trees[static_cast<std::size_t>(k - i)]) {
          for (Op op : kAllOps) {
            if (cfg.ops.contains(op)) out.push_back(Expr::node(op, lhs, rhs));
          }
        }
      }
    }
    for (const Expr& e : out) {
      EvalOutcome v = evaluate(e, cfg.caps, cfg.allow_negative_exponents);
      if (v) best_.try_emplace(v.value(), k);
    }
    trees_ += out.size();
  }
}

std::optional<int> OracleTable::minimal_count(const Rational& target) const {
  auto it = best_.find(target);
  if (it == best_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> oracle_minimal_count(const Rational& target, const SearchConfig& cfg) {
  return OracleTable(cfg).minimal_count(target);
}

}  // namespace onedigit
