#pragma once

// Transcribed representation tables: loading, exact verification, and
// comparison against the solver.
//
// File format (UTF-8, line oriented):
//
//   # comment
//   digit: 4
//   10 = (44 - 4)/4
//
// Entry lines belong to the most recent `digit:` header. Errata files use the
// same headers with lines `<target> = <original> => <corrected>`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "onedigit/expr.hpp"
#include "onedigit/solver.hpp"

namespace onedigit {

class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, int line, const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

enum class EntryStatus { Unchecked, Verified, Mismatch, ParseError };

std::string_view to_string(EntryStatus s);

struct CorpusEntry {
  int digit = 0;
  std::int64_t target = 0;
  std::string raw;
  std::string source;
  int line = 0;

  EntryStatus status = EntryStatus::Unchecked;
  /// Mismatch only: the value (or discard) the expression actually produced.
  std::optional<EvalOutcome> actual;
  /// ParseError only.
  std::string message;
  /// Set whenever parsing succeeded.
  std::optional<Expr> parsed;
};

std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& source = "<memory>");
/// Throws FormatError, or std::runtime_error if the file cannot be read.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path);

CorpusEntry verify_entry(CorpusEntry e, const Caps& caps);

struct ErrataLine {
  int digit = 0;
  std::int64_t target = 0;
  std::string original;
  std::string corrected;
  int line = 0;
};

class Errata {
 public:
  Errata() = default;
  explicit Errata(std::vector<ErrataLine> lines);

  static Errata parse(std::string_view text, const std::string& source = "<memory>");
  static Errata load(const std::filesystem::path& path);

  const ErrataLine* find(int digit, std::int64_t target, std::string_view raw) const;
  const std::vector<ErrataLine>& lines() const { return lines_; }

 private:
  std::vector<ErrataLine> lines_;
};

struct DigitTally {
  std::size_t verified = 0;
  std::size_t mismatch = 0;
  std::size_t parse_error = 0;
  /// Failing entries whose errata correction verifies.
  std::size_t errata_fixed = 0;

  std::size_t total() const { return verified + mismatch + parse_error; }
  friend bool operator==(const DigitTally&, const DigitTally&) = default;
};

struct ErrataApplied {
  CorpusEntry entry;  // the original, failing entry
  std::string corrected;
  EntryStatus corrected_status = EntryStatus::Unchecked;
  std::string corrected_detail;
};

struct Improvement {
  int digit = 0;
  std::int64_t target = 0;
  std::string raw;
  int printed_count = 0;
  int solver_count = 0;
  std::string solver_expr;
};

struct SolverComparison {
  std::size_t compared = 0;
  std::size_t equal = 0;
  /// Printed count exceeds the solver budget and the solver found nothing.
  std::size_t skipped = 0;
  std::vector<Improvement> improvements;
  /// Solver count above the printed count; never expected under equal caps.
  std::vector<Improvement> violations;
};

struct VerifyReport {
  std::map<int, DigitTally> per_digit;
  std::vector<CorpusEntry> mismatches;
  std::vector<CorpusEntry> parse_errors;
  std::vector<ErrataApplied> errata;
  std::optional<SolverComparison> solver;

  DigitTally overall() const;
  std::size_t total() const { return overall().total(); }
  /// No failing entry outside the errata-acknowledged set.
  bool clean() const;
};

/// Verifies every entry, applies errata to failing ones, and optionally
/// compares each verified entry with the solver at the digit count of the
/// printed expression (capped by solver_cfg->max_digits). Throws
/// BudgetTooLarge.
VerifyReport verify_corpus(std::span<const CorpusEntry> entries, const Caps& caps,
                           const std::optional<SearchConfig>& solver_cfg = std::nullopt,
                           const Errata* errata = nullptr);

nlohmann::json to_json(const VerifyReport& report);
/// Inverse of to_json. Throws nlohmann::json::exception on malformed input.
VerifyReport report_from_json(const nlohmann::json& j);

/// Aligned plain-text tables.
std::string render_human(const VerifyReport& report);

}  // namespace onedigit
