// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "onedigit/cli.hpp"
#include "onedigit/corpus.hpp"
#include "onedigit/oracle.hpp"
#include "onedigit/solver.hpp"
#include "onedigit/symmetry.hpp"
#include "onedigit/text.hpp"
#include "test_support.hpp"

namespace onedigit {
namespace {

using Clock = std::chrono::steady_clock;
using testing::shipped_data;
using testing::test_data;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

// --- 1. builtin families -----------------------------------------------------

Verdict symmetry_suite() {
  Verdict v;
  const auto t0 = Clock::now();
  int passed = 0;
  const auto families = builtin_families();
  for (const Family& f : families) {
    const FamilyResult r = check_family(f, Caps{});
    if (const auto* fail = std::get_if<FamilyFail>(&r)) {
      std::ostringstream os;
      os << f.id << " " << f.pattern << " at a=" << fail->a << " gives " << fail->actual << ", expected "
         << fail->expected;
      v.fail(os.str());
    } else {
      ++passed;
    }
  }
  const double s = seconds_since(t0);
  if (s >= 1.0) v.fail("took " + fmt_seconds(s));
  v.detail = std::to_string(passed) + "/" + std::to_string(families.size()) + " families hold, " +
             fmt_seconds(s) + (v.pass ? "" : "; " + v.detail);
  return v;
}

// --- 2. golden file ------------------------------------------------------------

Verdict golden_corpus() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto entries = load_corpus(test_data("golden_30.txt"));
  const VerifyReport r = verify_corpus(entries, Caps{});
  const double s = seconds_since(t0);
  const DigitTally t = r.overall();

  std::set<std::pair<int, std::string>> seen;
  for (const auto& e : entries) seen.insert({e.digit, std::to_string(e.target) + " = " + e.raw});
  const std::pair<int, std::string> named[] = {
      {9, "10 = 9 + 9/9"}, {2, "16 = 2^(2 + 2)"}, {1, "100 = (11 - 1)^(1 + 1)"}, {8, "101 = 8888/88"}};
  for (const auto& n : named) {
    if (!seen.contains(n)) v.fail("missing entry '" + n.second + "'");
  }
  if (entries.size() != 30) v.fail(std::to_string(entries.size()) + " entries");
  if (t.verified != 30 || t.mismatch != 0 || t.parse_error != 0) v.fail("not all entries verify");
  if (r.per_digit.size() != 9) v.fail("does not cover all nine digits");
  if (s >= 1.0) v.fail("took " + fmt_seconds(s));
  const std::string summary = std::to_string(t.verified) + "/" + std::to_string(entries.size()) +
                              " verified over " + std::to_string(r.per_digit.size()) + " digits, " +
                              fmt_seconds(s);
  v.detail = v.pass ? summary : summary + "; " + v.detail;
  return v;
}

// --- 3. typo -------------------------------------------------------------------

Verdict typo_detection() {
  Verdict v;
  const std::string path = test_data("typo_line.txt").string();
  const VerifyReport r = verify_corpus(load_corpus(path), Caps{});
  if (r.mismatches.size() != 1) {
    v.fail(std::to_string(r.mismatches.size()) + " mismatches");
  } else if (*r.mismatches[0].actual != Outcome(Rational(5))) {
    std::ostringstream os;
    os << "actual " << *r.mismatches[0].actual;
    v.fail(os.str());
  }
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({"verify", "--corpus", path}, out, err);
  if (code != cli::kVerificationFailed) v.fail("exit code " + std::to_string(code));
  if (v.pass) v.detail = "6 = (44 - 4)/(4 + 4) is a Mismatch with value 5, exit code " + std::to_string(code);
  return v;
}

// --- 4. oracle -----------------------------------------------------------------

Verdict oracle_equivalence() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t reachable = 0;
  for (int d = 1; d <= 9; ++d) {
    SearchConfig cfg;
    cfg.digit = d;
    cfg.max_digits = kOracleMaxDigits;
    const OracleTable oracle(cfg);
    for (const RangeRow& row : solve_range(0, 1000, cfg)) {
      const auto expected = oracle.minimal_count(Rational(row.target));
      const auto* s = std::get_if<Solution>(&row.result);
      const std::string where = "digit " + std::to_string(d) + " target " + std::to_string(row.target);
      if (expected.has_value() != (s != nullptr)) {
        v.fail(where + ": reachability differs");
      } else if (s != nullptr && s->count != *expected) {
        v.fail(where + ": solver " + std::to_string(s->count) + ", oracle " + std::to_string(*expected));
      }
      reachable += expected.has_value() ? 1 : 0;
    }
  }
  const double s = seconds_since(t0);
  if (s >= 120.0) v.fail("took " + fmt_seconds(s));
  const std::string summary =
      std::to_string(reachable) + " reachable (digit, target) pairs agree, " + fmt_seconds(s);
  v.detail = v.pass ? summary : summary + "; " + v.detail;
  return v;
}

// --- 5. digit 4 as an upper bound ------------------------------------------------

std::vector<CorpusEntry> shipped_digit(int digit) {
  std::vector<CorpusEntry> out;
  for (auto& e : load_corpus(shipped_data("corpus/joint_0_100.txt"))) {
    if (e.digit == digit) out.push_back(std::move(e));
  }
  for (auto& e : load_corpus(shipped_data("corpus/digit_" + std::to_string(digit) + ".txt"))) {
    out.push_back(std::move(e));
  }
  return out;
}

Verdict digit_four_upper_bound() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto entries = shipped_digit(4);
  int budget = 1;
  for (const auto& e : entries) {
    const CorpusEntry checked = verify_entry(e, Caps{});
    if (checked.status == EntryStatus::Verified) budget = std::max(budget, digit_count(*checked.parsed));
  }
  SearchConfig cfg;
  cfg.digit = 4;
  cfg.max_digits = budget;
  const VerifyReport r = verify_corpus(entries, Caps{}, cfg);
  const SolverComparison& c = *r.solver;
  std::set<std::int64_t> targets;
  for (const auto& e : entries) targets.insert(e.target);
  if (targets.size() != 1001) v.fail(std::to_string(targets.size()) + " distinct targets");
  if (!c.violations.empty()) {
    const Improvement& i = c.violations.front();
    v.fail(std::to_string(c.violations.size()) + " violations, first " + std::to_string(i.target) + " = " + i.raw);
  }
  if (c.skipped != 0) v.fail(std::to_string(c.skipped) + " skipped");
  if (c.compared != r.overall().verified) v.fail("not every verified entry was compared");
  const std::string summary = std::to_string(c.compared) + " verified entries within their digit count (" +
                              std::to_string(c.improvements.size()) + " shorter), budget " +
                              std::to_string(budget) + ", " + fmt_seconds(seconds_since(t0));
  v.detail = v.pass ? summary : summary + "; " + v.detail;
  return v;
}

// --- 6. digit 9 full range --------------------------------------------------------

Verdict digit_nine_full_range() {
  Verdict v;
  SearchConfig cfg;
  cfg.digit = 9;
  cfg.max_digits = 10;
  const auto t0 = Clock::now();
  const auto rows = solve_range(0, 1000, cfg);
  const double s = seconds_since(t0);

  std::map<std::int64_t, int> found;
  for (const auto& row : rows) {
    if (const auto* sol = std::get_if<Solution>(&row.result)) found[row.target] = sol->count;
  }
  std::size_t covered = 0;
  for (const auto& e : shipped_digit(9)) {
    const CorpusEntry checked = verify_entry(e, Caps{});
    if (checked.status != EntryStatus::Verified) continue;
    const int printed = digit_count(*checked.parsed);
    if (printed > cfg.max_digits) continue;
    ++covered;
    const auto it = found.find(e.target);
    if (it == found.end()) {
      v.fail("target " + std::to_string(e.target) + " unsolved");
    } else if (it->second > printed) {
      v.fail("target " + std::to_string(e.target) + " needs " + std::to_string(it->second));
    }
  }
  if (rows.size() != 1001) v.fail(std::to_string(rows.size()) + " rows");
  if (s >= 300.0) v.fail("took " + fmt_seconds(s));
  const std::string summary = std::to_string(found.size()) + "/1001 solved, " + std::to_string(rows.size() - found.size()) +
                              " NOT-FOUND, all " + std::to_string(covered) + " tabulated targets covered, " +
                              fmt_seconds(s);
  v.detail = v.pass ? summary : summary + "; " + v.detail;
  return v;
}

// --- 7. thread independence ------------------------------------------------------------

Verdict determinism() {
  Verdict v;
  for (const std::string format : {"human", "machine"}) {
    std::string docs[2];
    const char* threads[2] = {"1", "4"};
    for (int i = 0; i < 2; ++i) {
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::run({"solve", "--digit", "9", "--range", "0..1000", "--budget", "10", "--format", format,
                                 "--threads", threads[i]},
                                out, err);
      if (code != cli::kOk) v.fail(format + " run with " + threads[i] + " threads exited " + std::to_string(code));
      docs[i] = testing::strip_volatile(out.str());
    }
    if (docs[0] != docs[1]) v.fail(format + " output differs between 1 and 4 threads");
    if (docs[0].empty()) v.fail(format + " output is empty");
  }
  if (v.pass) v.detail = "human and machine tables identical with 1 and 4 threads";
  return v;
}

// --- 8. properties ----------------------------------------------------------------------

Verdict properties() {
  Verdict v;
  std::mt19937_64 rng(8);

  for (int i = 0; i < 2000 && v.pass; ++i) {
    const Rational a = testing::random_rational(rng);
    const Rational b = testing::random_rational(rng);
    const Rational c = testing::random_rational(rng);
    if (a + b != b + a || a * b != b * a) v.fail("commutativity");
    if ((a + b) + c != a + (b + c) || (a * b) * c != a * (b * c)) v.fail("associativity");
    if (a * (b + c) != a * b + a * c) v.fail("distributivity");
    if (a + Rational(0) != a || a * Rational(1) != a || a - a != Rational(0)) v.fail("identities");
    if (!a.is_zero() && rat_div(a, a) != Outcome(Rational(1))) v.fail("inverse");
  }

  for (int i = 0; i < 10000 && v.pass; ++i) {
    const int digit = 1 + static_cast<int>(rng() % 9);
    const Expr e = testing::random_expr(rng, digit, 1 + static_cast<int>(rng() % 7));
    const std::string text = render(e);
    if (parse(text) != e) v.fail("round trip of " + text);
    const Expr c = canonicalize(e);
    if (canonicalize(c) != c) v.fail("canonicalize not idempotent on " + text);
    if (!testing::same_classification(evaluate(c, Caps{}), evaluate(e, Caps{}))) v.fail("canonicalize changes the value of " + text);
  }

  for (int d = 1; d <= 9 && v.pass; ++d) {
    for (int n = 1; n < 15; ++n) {
      if (repdigit_value(d, n + 1) != repdigit_value(d, n) * Rational(10) + Rational(d)) v.fail("repdigit recurrence");
    }
  }

  std::vector<Rational> targets;
  for (int i = 0; i < 20; ++i) targets.emplace_back(static_cast<std::int64_t>(rng() % 1001));
  SearchConfig base;
  base.digit = 1 + static_cast<int>(rng() % 9);
  base.max_digits = 7;
  SearchConfig wide = base;
  wide.caps = base.caps.scaled(10);
  const auto a = solve_targets(targets, base);
  const auto b = solve_targets(targets, wide);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto* sa = std::get_if<Solution>(&a[i]);
    const auto* sb = std::get_if<Solution>(&b[i]);
    if (sa != nullptr && (sb == nullptr || sb->count > sa->count)) v.fail("10x caps raised the count of " + targets[i].str());
  }

  if (v.pass) {
    v.detail = "field axioms, 10000 round trips, canonical form, repdigits, 20 targets under 10x caps (digit " +
               std::to_string(base.digit) + ")";
  }
  return v;
}

}  // namespace
}  // namespace onedigit

int main() {
  using onedigit::Verdict;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"symmetric families", onedigit::symmetry_suite},
      {"golden corpus", onedigit::golden_corpus},
      {"typo detection", onedigit::typo_detection},
      {"oracle equivalence", onedigit::oracle_equivalence},
      {"tables as upper bound, digit 4", onedigit::digit_four_upper_bound},
      {"full range, digit 9, budget 10", onedigit::digit_nine_full_range},
      {"thread independence", onedigit::determinism},
      {"property suites", onedigit::properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << ": " << v.detail
              << std::endl;
    failed += v.pass ? 0 : 1;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
