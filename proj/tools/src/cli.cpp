#include "onedigit/cli.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "onedigit/corpus.hpp"
#include "onedigit/solver.hpp"
#include "onedigit/symmetry.hpp"
#include "onedigit/text.hpp"

#ifndef ONEDIGIT_VERSION
#define ONEDIGIT_VERSION "0.0.0"
#endif

namespace onedigit::cli {

std::string tool_version() { return ONEDIGIT_VERSION; }

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},
          {"config", config},
          {"version", version},
          {"started", started},
          {"duration_seconds", duration_seconds}};
}

namespace {

using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::int64_t max_num = Caps{}.max_abs_numerator;
  std::int64_t max_den = Caps{}.max_denominator;
  int max_exp = Caps{}.max_exponent_magnitude;
  std::string ops = "+-*/^";
  bool allow_neg_exp = false;
  std::string format = "human";
  std::string out;
  std::optional<unsigned> threads;
  std::size_t memory_mb = 0;
};

void add_common(CLI::App& cmd, Common& c, bool search) {
  cmd.add_option("--max-num", c.max_num, "Largest |numerator| of any intermediate value")
      ->capture_default_str();
  cmd.add_option("--max-den", c.max_den, "Largest denominator of any intermediate value")
      ->capture_default_str();
  cmd.add_option("--max-exp", c.max_exp, "Largest exponent magnitude")->capture_default_str();
  cmd.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  if (search) {
    cmd.add_option("--ops", c.ops, "Allowed operators, e.g. \"+-*/\"")->capture_default_str();
    cmd.add_flag("--allow-neg-exp", c.allow_neg_exp, "Allow negative integer exponents");
    cmd.add_option("--threads", c.threads, "Worker threads (0 = all cores; default $ONEDIGIT_THREADS or 1)");
    cmd.add_option("--memory-mb", c.memory_mb, "Level-set memory limit in MiB (0 = half of physical memory)");
  }
}

Caps caps_of(const Common& c) {
  Caps caps;
  caps.max_abs_numerator = c.max_num;
  caps.max_denominator = c.max_den;
  caps.max_exponent_magnitude = c.max_exp;
  try {
    caps.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return caps;
}

OpSet parse_ops(const std::string& text) {
  OpSet ops;
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '+': ops.insert(Op::Add); break;
      case '-': ops.insert(Op::Sub); break;
      case '*': ops.insert(Op::Mul); break;
      case '/': ops.insert(Op::Div); break;
      case '^': ops.insert(Op::Pow); break;
      case ',':
      case ' ': break;
      default:
        if (text.compare(i, 2, "\xC3\x97") == 0) {
          ops.insert(Op::Mul);
          ++i;
          break;
        }
        throw UsageError("--ops: unknown operator '" + std::string(1, text[i]) + "'");
    }
  }
  if (ops.empty()) throw UsageError("--ops: at least one operator is required");
  return ops;
}

std::string ops_text(OpSet ops) {
  std::string s;
  for (Op op : kAllOps) {
    if (ops.contains(op)) s += op_symbol(op);
  }
  return s;
}

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ONEDIGIT_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw UsageError("ONEDIGIT_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
  }
  return 1;
}

SearchConfig search_config(const Common& c, int digit, int budget) {
  if (digit < 1 || digit > 9) throw UsageError("digit must be in 1..9");
  if (budget < 1) throw UsageError("--budget must be at least 1");
  SearchConfig cfg;
  cfg.digit = digit;
  cfg.max_digits = budget;
  cfg.caps = caps_of(c);
  cfg.ops = parse_ops(c.ops);
  cfg.allow_negative_exponents = c.allow_neg_exp;
  cfg.threads = resolve_threads(c.threads);
  cfg.memory_limit_bytes = c.memory_mb << 20;
  return cfg;
}

nlohmann::json caps_json(const Caps& caps) {
  return {{"max_abs_numerator", caps.max_abs_numerator},
          {"max_denominator", caps.max_denominator},
          {"max_exponent_magnitude", caps.max_exponent_magnitude}};
}

// Thread count is deliberately absent: it never changes the output.
nlohmann::json search_json(const SearchConfig& cfg) {
  return {{"budget", cfg.max_digits},
          {"caps", caps_json(cfg.caps)},
          {"ops", ops_text(cfg.ops)},
          {"allow_negative_exponents", cfg.allow_negative_exponents}};
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  static const std::regex re(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("--range must look like LO..HI, got '" + text + "'");
  const std::int64_t lo = std::stoll(m[1]);
  const std::int64_t hi = std::stoll(m[2]);
  if (lo > hi) throw UsageError("--range: LO must not exceed HI");
  if (hi - lo > 10'000'000) throw UsageError("--range: at most 10^7 targets");
  return {lo, hi};
}

std::vector<int> parse_digits(const std::string& text) {
  static const std::regex range_re(R"(^\s*([1-9])\s*\.\.\s*([1-9])\s*$)");
  std::smatch m;
  std::vector<int> digits;
  if (std::regex_match(text, m, range_re)) {
    for (int d = std::stoi(m[1]); d <= std::stoi(m[2]); ++d) digits.push_back(d);
  } else {
    for (char c : text) {
      if (c >= '1' && c <= '9') {
        digits.push_back(c - '0');
      } else if (c != ',' && c != ' ') {
        throw UsageError("--digits takes e.g. 1..9 or 1,4,9; got '" + text + "'");
      }
    }
  }
  std::sort(digits.begin(), digits.end());
  digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
  if (digits.empty()) throw UsageError("--digits: no digit given");
  return digits;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest start_manifest(std::string command, nlohmann::json config) {
  return RunManifest{std::move(command), std::move(config), tool_version(), utc_now(), 0};
}

void finish_manifest(RunManifest& m, Clock::time_point t0) {
  m.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

// Human documents start with the manifest as '#' lines. Only the `started`
// line varies between identical runs.
void human_header(std::ostream& os, const RunManifest& m) {
  os << "# onedigit " << m.version << " " << m.command << '\n';
  os << "# config " << m.config.dump() << '\n';
  os << "# started " << m.started << ", " << std::fixed << std::setprecision(3) << m.duration_seconds
     << " s\n";
  os.unsetf(std::ios::floatfield);
}

// Writes to --out/--report when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("error writing " + path);
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  Common common;
  int digit = 0;
  std::optional<std::int64_t> target;
  std::string range;
  int budget = 6;
};

nlohmann::json result_json(std::int64_t target, const SolveResult& r) {
  if (const auto* s = std::get_if<Solution>(&r)) {
    return {{"target", target}, {"found", true}, {"count", s->count}, {"expr", render(s->expr)}};
  }
  return {{"target", target}, {"found", false}};
}

std::string solve_table_human(const std::vector<RangeRow>& rows) {
  std::size_t tw = 6;
  for (const auto& r : rows) tw = std::max(tw, std::to_string(r.target).size());
  std::ostringstream os;
  os << pad_left("target", tw) << "  count  expression\n";
  for (const auto& r : rows) {
    os << pad_left(std::to_string(r.target), tw) << "  ";
    if (const auto* s = std::get_if<Solution>(&r.result)) {
      os << pad_left(std::to_string(s->count), 5) << "  " << render(s->expr) << '\n';
    } else {
      os << pad_left("-", 5) << "  NOT-FOUND\n";
    }
  }
  return os.str();
}

std::string solve_document(const RunManifest& m, const std::vector<RangeRow>& rows, const std::string& format) {
  if (format == "machine") {
    nlohmann::json j;
    j["manifest"] = m.to_json();
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) j["rows"].push_back(result_json(r.target, r.result));
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  human_header(os, m);
  os << solve_table_human(rows);
  return os.str();
}

std::pair<std::int64_t, std::int64_t> target_span(const std::optional<std::int64_t>& target,
                                                  const std::string& range) {
  if (target && !range.empty()) throw UsageError("give either --target or --range, not both");
  if (target) return {*target, *target};
  if (range.empty()) throw UsageError("one of --target or --range is required");
  return parse_range(range);
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto [lo, hi] = target_span(a.target, a.range);
  const SearchConfig cfg = search_config(a.common, a.digit, a.budget);
  nlohmann::json config = search_json(cfg);
  config["digit"] = cfg.digit;
  config["range"] = {lo, hi};
  RunManifest m = start_manifest("solve", config);
  const auto rows = solve_range(lo, hi, cfg);
  finish_manifest(m, t0);
  emit(a.common.out, out, solve_document(m, rows, a.common.format));
  return kOk;
}

// ---------------------------------------------------------------------------
// table

struct TableArgs {
  Common common;
  std::string digits = "1..9";
  std::string range;
  int budget = 6;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const std::vector<int> digits = parse_digits(a.digits);
  if (a.range.empty()) throw UsageError("--range is required");
  const auto [lo, hi] = parse_range(a.range);

  if (digits.size() == 1) {
    SolveArgs single{a.common, digits.front(), std::nullopt, a.range, a.budget};
    return cmd_solve(single, out);
  }

  std::vector<std::vector<RangeRow>> columns;
  nlohmann::json config;
  for (int d : digits) {
    const SearchConfig cfg = search_config(a.common, d, a.budget);
    if (config.is_null()) config = search_json(cfg);
    columns.push_back(solve_range(lo, hi, cfg));
  }
  config["digits"] = digits;
  config["range"] = {lo, hi};
  RunManifest m = start_manifest("table", config);
  finish_manifest(m, t0);

  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  std::string text;
  if (a.common.format == "machine") {
    nlohmann::json j;
    j["manifest"] = m.to_json();
    j["digits"] = digits;
    j["rows"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      nlohmann::json cells = nlohmann::json::array();
      for (std::size_t c = 0; c < digits.size(); ++c) {
        nlohmann::json cell = result_json(columns[c][i].target, columns[c][i].result);
        cell.erase("target");
        cell["digit"] = digits[c];
        cells.push_back(std::move(cell));
      }
      j["rows"].push_back({{"target", lo + static_cast<std::int64_t>(i)}, {"cells", std::move(cells)}});
    }
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::vector<std::string>> grid(n + 1, std::vector<std::string>(digits.size() + 1));
    grid[0][0] = "target";
    for (std::size_t c = 0; c < digits.size(); ++c) grid[0][c + 1] = "digit " + std::to_string(digits[c]);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i + 1][0] = std::to_string(lo + static_cast<std::int64_t>(i));
      for (std::size_t c = 0; c < digits.size(); ++c) {
        const auto* s = std::get_if<Solution>(&columns[c][i].result);
        grid[i + 1][c + 1] = s != nullptr ? render(s->expr) : "NOT-FOUND";
      }
    }
    std::vector<std::size_t> width(digits.size() + 1, 0);
    for (const auto& row : grid) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    human_header(os, m);
    for (const auto& row : grid) {
      std::string line = pad_left(row[0], width[0]);
      for (std::size_t c = 1; c < row.size(); ++c) line += "  " + pad_right(row[c], width[c]);
      while (!line.empty() && line.back() == ' ') line.pop_back();
      os << line << '\n';
    }
    text = os.str();
  }
  emit(a.common.out, out, text);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  Common common;
  std::vector<std::string> corpora;
  std::string errata;
  std::optional<int> budget;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const Caps caps = caps_of(a.common);

  std::vector<CorpusEntry> entries;
  for (const std::string& path : a.corpora) {
    auto part = load_corpus(path);
    entries.insert(entries.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::optional<Errata> errata;
  if (!a.errata.empty()) errata = Errata::load(a.errata);

  std::optional<SearchConfig> solver_cfg;
  nlohmann::json config = {{"caps", caps_json(caps)}};
  if (a.budget) {
    solver_cfg = search_config(a.common, 1, *a.budget);
    config["solver"] = search_json(*solver_cfg);
  }
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : a.corpora) files.push_back(std::filesystem::path(p).filename().string());
  config["corpus"] = files;
  if (errata) config["errata"] = std::filesystem::path(a.errata).filename().string();

  RunManifest m = start_manifest("verify", config);
  const VerifyReport report = verify_corpus(entries, caps, solver_cfg, errata ? &*errata : nullptr);
  finish_manifest(m, t0);

  std::string text;
  if (a.common.format == "machine") {
    nlohmann::json j;
    j["manifest"] = m.to_json();
    j["report"] = to_json(report);
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    human_header(os, m);
    os << render_human(report);
    text = os.str();
  }
  emit(a.report, out, text);

  const bool violations = report.solver && !report.solver->violations.empty();
  if (!report.clean() || violations) {
    const DigitTally t = report.overall();
    err << "verification failed: " << t.mismatch << " mismatch, " << t.parse_error << " parse error, "
        << t.errata_fixed << " fixed by errata";
    if (violations) err << ", " << report.solver->violations.size() << " solver violations";
    err << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// symmetry

struct SymmetryArgs {
  Common common;
  std::string report;
};

std::string expected_text(const Family& f) {
  std::vector<Rational> values;
  for (int a : f.domain) values.push_back(f.expected(a));
  if (std::all_of(values.begin(), values.end(), [&](const Rational& v) { return v == values.front(); })) {
    return values.front().str();
  }
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ",";
    s += values[i].str();
  }
  return s;
}

std::string domain_text(const std::vector<int>& domain) {
  bool contiguous = domain.size() > 2;
  for (std::size_t i = 1; i < domain.size(); ++i) contiguous = contiguous && domain[i] == domain[i - 1] + 1;
  if (contiguous) return std::to_string(domain.front()) + ".." + std::to_string(domain.back());
  std::string s;
  for (std::size_t i = 0; i < domain.size(); ++i) s += (i > 0 ? "," : "") + std::to_string(domain[i]);
  return s;
}

int cmd_symmetry(const SymmetryArgs& a, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const Caps caps = caps_of(a.common);
  RunManifest m = start_manifest("symmetry", {{"caps", caps_json(caps)}});

  struct Row {
    const Family* family;
    FamilyResult result;
  };
  const std::vector<Family> families = builtin_families();
  std::vector<Row> rows;
  std::size_t failed = 0;
  for (const Family& f : families) {
    rows.push_back(Row{&f, check_family(f, caps)});
    if (std::holds_alternative<FamilyFail>(rows.back().result)) ++failed;
  }
  finish_manifest(m, t0);

  auto detail = [](const FamilyFail& fail) {
    std::ostringstream os;
    os << "a=" << fail.a << " gave " << fail.actual << ", expected " << fail.expected;
    return os.str();
  };

  std::string text;
  if (a.common.format == "machine") {
    nlohmann::json j;
    j["manifest"] = m.to_json();
    j["families"] = nlohmann::json::array();
    for (const Row& r : rows) {
      nlohmann::json expected = nlohmann::json::array();
      for (int d : r.family->domain) expected.push_back(r.family->expected(d).str());
      nlohmann::json item = {{"id", r.family->id},
                             {"pattern", r.family->pattern},
                             {"domain", r.family->domain},
                             {"expected", expected}};
      if (const auto* fail = std::get_if<FamilyFail>(&r.result)) {
        item["status"] = "Fail";
        item["detail"] = detail(*fail);
      } else {
        item["status"] = "Pass";
      }
      j["families"].push_back(std::move(item));
    }
    j["passed"] = rows.size() - failed;
    j["failed"] = failed;
    text = j.dump(2) + "\n";
  } else {
    std::vector<std::array<std::string, 5>> grid;
    grid.push_back({"family", "pattern", "domain", "value", "status"});
    for (const Row& r : rows) {
      const auto* fail = std::get_if<FamilyFail>(&r.result);
      grid.push_back({r.family->id, r.family->pattern, domain_text(r.family->domain), expected_text(*r.family),
                      fail != nullptr ? "Fail: " + detail(*fail) : "Pass"});
    }
    std::array<std::size_t, 5> width{};
    for (const auto& row : grid) {
      for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    human_header(os, m);
    for (const auto& row : grid) {
      for (std::size_t c = 0; c < 4; ++c) os << pad_right(row[c], width[c]) << "  ";
      os << row[4] << '\n';
    }
    os << rows.size() - failed << " of " << rows.size() << " families pass\n";
    text = os.str();
  }
  emit(a.report, out, text);
  if (failed > 0) {
    err << failed << " symmetric families failed\n";
    return kVerificationFailed;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal single-digit representations of integers", "onedigit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Minimal representations of one target or a range");
  solve_cmd->add_option("--digit", solve.digit, "Digit 1..9")->required()->check(CLI::Range(1, 9));
  solve_cmd->add_option("--target", solve.target, "Single target");
  solve_cmd->add_option("--range", solve.range, "Targets LO..HI");
  solve_cmd->add_option("--budget", solve.budget, "Largest digit count searched")->capture_default_str();
  solve_cmd->add_option("--out", solve.common.out, "Write the table here instead of stdout");
  add_common(*solve_cmd, solve.common, true);

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Joint table: one column per digit");
  table_cmd->add_option("--digits", table.digits, "Digits, e.g. 1..9 or 1,4,9")->capture_default_str();
  table_cmd->add_option("--range", table.range, "Targets LO..HI")->required();
  table_cmd->add_option("--budget", table.budget, "Largest digit count searched")->capture_default_str();
  table_cmd->add_option("--out", table.common.out, "Write the table here instead of stdout");
  add_common(*table_cmd, table.common, true);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check transcribed tables by exact evaluation");
  verify_cmd->add_option("--corpus", verify.corpora, "Corpus file (repeatable)")->required();
  verify_cmd->add_option("--errata", verify.errata, "Errata file with corrected lines");
  verify_cmd->add_option("--budget", verify.budget,
                         "Also compare each verified entry with the solver, up to this digit count");
  verify_cmd->add_option("--report", verify.report, "Write the report here instead of stdout");
  add_common(*verify_cmd, verify.common, true);

  SymmetryArgs symmetry;
  auto* symmetry_cmd = app.add_subcommand("symmetry", "Check the builtin symmetric families");
  symmetry_cmd->add_option("--report", symmetry.report, "Write the report here instead of stdout");
  add_common(*symmetry_cmd, symmetry.common, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*table_cmd) return cmd_table(table, out);
    if (*verify_cmd) return cmd_verify(verify, out, err);
    if (*symmetry_cmd) return cmd_symmetry(symmetry, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kFormatError;
  } catch (const BudgetTooLarge& e) {
    err << "budget too large: " << e.what() << '\n';
    return kBudgetTooLarge;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsageError;
}

}  // namespace onedigit::cli
