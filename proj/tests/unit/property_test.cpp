#include <gtest/gtest.h>

#include <random>

#include "onedigit/oracle.hpp"
#include "onedigit/solver.hpp"
#include "onedigit/text.hpp"
#include "test_support.hpp"

namespace onedigit {
namespace {

using testing::random_expr;

TEST(Property, RenderParseRoundTrip) {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 10000; ++i) {
    const int digit = 1 + static_cast<int>(rng() % 9);
    const Expr e = random_expr(rng, digit, 1 + static_cast<int>(rng() % 7));
    const std::string text = render(e);
    const Expr back = parse(text);
    ASSERT_EQ(back, e) << text;
    ASSERT_EQ(render(back), text);
    ASSERT_EQ(parse(text, digit), e);
  }
}

TEST(Property, CanonicalizeIsIdempotentAndValuePreserving) {
  std::mt19937_64 rng(7);
  const Caps caps;
  for (int i = 0; i < 5000; ++i) {
    const int digit = 1 + static_cast<int>(rng() % 9);
    const Expr e = random_expr(rng, digit, 1 + static_cast<int>(rng() % 6));
    const Expr c = canonicalize(e);
    ASSERT_EQ(canonicalize(c), c) << render(e);
    ASSERT_TRUE(testing::same_classification(evaluate(c, caps), evaluate(e, caps))) << render(e);
    ASSERT_EQ(digit_count(c), digit_count(e));
    ASSERT_EQ(tree_size(c), tree_size(e));
    ASSERT_LE(c, e);
  }
}

TEST(Property, ReorderingCanChangeTheDiscardReason) {
  const Expr e = parse("(444 + 4)^(444/44) + 44^444");
  const Expr c = canonicalize(e);
  EXPECT_EQ(evaluate(e, Caps{}), Outcome(Discard::PowDomain));
  EXPECT_EQ(evaluate(c, Caps{}), Outcome(Discard::Overflow));
  EXPECT_TRUE(testing::same_classification(evaluate(c, Caps{}), evaluate(e, Caps{})));
  EXPECT_FALSE(testing::same_classification(Outcome(Rational(1)), Outcome(Rational(2))));
  EXPECT_FALSE(testing::same_classification(Outcome(Rational(1)), Outcome(Discard::Overflow)));
}

TEST(Property, RepdigitRecurrence) {
  for (int d = 1; d <= 9; ++d) {
    EXPECT_EQ(repdigit_value(d, 1), Rational(d));
    for (int n = 1; n < 20; ++n) {
      ASSERT_EQ(repdigit_value(d, n + 1), repdigit_value(d, n) * Rational(10) + Rational(d)) << d << " " << n;
    }
  }
}

TEST(Property, WitnessesAreSound) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 6; ++i) {
    SearchConfig cfg;
    cfg.digit = 1 + static_cast<int>(rng() % 9);
    cfg.max_digits = 6;
    for (const auto& row : solve_range(-100, 1000, cfg)) {
      if (const auto* s = std::get_if<Solution>(&row.result)) {
        ASSERT_EQ(evaluate(s->expr, cfg.caps), Outcome(Rational(row.target)));
        ASSERT_EQ(digit_count(s->expr), s->count);
        ASSERT_EQ(canonicalize(s->expr), s->expr);
        ASSERT_LE(s->count, cfg.max_digits);
      }
    }
  }
}

// Loosening the caps can only shorten or keep a representation.
TEST(Property, WiderCapsNeverIncreaseCounts) {
  std::mt19937_64 rng(99);
  std::vector<Rational> targets;
  for (int i = 0; i < 20; ++i) targets.emplace_back(static_cast<std::int64_t>(rng() % 5000));
  for (int digit : {2, 7}) {
    SearchConfig narrow;
    narrow.digit = digit;
    narrow.max_digits = 6;
    narrow.caps.max_abs_numerator = 100000;
    narrow.caps.max_denominator = 100;
    SearchConfig wide = narrow;
    wide.caps = narrow.caps.scaled(10);
    const auto a = solve_targets(targets, narrow);
    const auto b = solve_targets(targets, wide);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto* sa = std::get_if<Solution>(&a[i]);
      const auto* sb = std::get_if<Solution>(&b[i]);
      if (sa == nullptr) continue;
      ASSERT_NE(sb, nullptr) << targets[i];
      ASSERT_LE(sb->count, sa->count) << targets[i];
    }
  }
}

TEST(Property, LargerBudgetsNeverLoseTargets) {
  std::vector<Rational> targets;
  for (std::int64_t t = 0; t <= 400; ++t) targets.emplace_back(t);
  SearchConfig cfg;
  cfg.digit = 6;
  std::vector<SolveResult> previous;
  for (int k = 3; k <= 7; ++k) {
    cfg.max_digits = k;
    auto current = solve_targets(targets, cfg);
    for (std::size_t i = 0; i < previous.size(); ++i) {
      if (const auto* p = std::get_if<Solution>(&previous[i])) {
        const auto* c = std::get_if<Solution>(&current[i]);
        ASSERT_NE(c, nullptr) << targets[i];
        ASSERT_EQ(c->count, p->count) << targets[i];
      }
    }
    previous = std::move(current);
  }
}

TEST(Property, RationalTargetsMatchOracle) {
  for (int d : {3, 8}) {
    SearchConfig cfg;
    cfg.digit = d;
    cfg.max_digits = 5;
    const OracleTable oracle(cfg);
    std::mt19937_64 rng(static_cast<unsigned>(d));
    std::vector<Rational> targets;
    for (int i = 0; i < 300; ++i) targets.push_back(testing::random_rational(rng, 60));
    const auto results = solve_targets(targets, cfg);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Rational& t = targets[i];
      const auto& r = results[i];
      const auto expected = oracle.minimal_count(t);
      if (const auto* s = std::get_if<Solution>(&r)) {
        ASSERT_TRUE(expected.has_value()) << t;
        ASSERT_EQ(s->count, *expected) << t;
      } else {
        ASSERT_FALSE(expected.has_value()) << t;
      }
    }
  }
}

}  // namespace
}  // namespace onedigit
