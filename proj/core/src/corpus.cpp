#include "onedigit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "onedigit/text.hpp"

namespace onedigit {

FormatError::FormatError(std::string source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

std::string_view to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::Unchecked: return "Unchecked";
    case EntryStatus::Verified: return "Verified";
    case EntryStatus::Mismatch: return "Mismatch";
    case EntryStatus::ParseError: return "ParseError";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::int64_t> parse_target(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

// Walks a line-oriented file, tracking `digit:` headers. `on_entry` receives
// (digit, line number, target text, expression text).
template <typename OnEntry>
void scan_lines(std::string_view text, const std::string& source, OnEntry on_entry) {
  int digit = 0;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("digit:")) {
      std::string_view d = trim(line.substr(6));
      if (d.size() != 1 || d[0] < '1' || d[0] > '9') {
        throw FormatError(source, lineno, "section header needs a digit 1..9, got '" + std::string(d) + "'");
      }
      digit = d[0] - '0';
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(source, lineno, "malformed line (no '='): '" + std::string(line) + "'");
    }
    if (digit == 0) throw FormatError(source, lineno, "entry before any 'digit:' header");
    std::string_view target = trim(line.substr(0, eq));
    if (!parse_target(target)) {
      throw FormatError(source, lineno, "target '" + std::string(target) + "' is not a non-negative integer");
    }
    on_entry(digit, lineno, *parse_target(target), trim(line.substr(eq + 1)));
    if (nl == text.size()) break;
  }
}

std::string normalize_raw(std::string_view raw) {
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.compare(i, 2, "\xC3\x97") == 0) {
      out += '*';
      ++i;
    } else if (raw[i] != ' ' && raw[i] != '\t') {
      out += raw[i];
    }
  }
  return out;
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& source) {
  std::vector<CorpusEntry> out;
  scan_lines(text, source, [&](int digit, int line, std::int64_t target, std::string_view expr) {
    CorpusEntry e;
    e.digit = digit;
    e.target = target;
    e.raw = std::string(expr);
    e.source = source;
    e.line = line;
    out.push_back(std::move(e));
  });
  return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path), path.filename().string());
}

CorpusEntry verify_entry(CorpusEntry e, const Caps& caps) {
  e.actual.reset();
  e.message.clear();
  e.parsed.reset();
  try {
    e.parsed = parse(e.raw, e.digit);
  } catch (const ParseError& err) {
    e.status = EntryStatus::ParseError;
    e.message = err.what();
    return e;
  }
  EvalOutcome value = evaluate(*e.parsed, caps);
  if (value && value.value() == Rational(e.target)) {
    e.status = EntryStatus::Verified;
  } else {
    e.status = EntryStatus::Mismatch;
    e.actual = std::move(value);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Errata

Errata::Errata(std::vector<ErrataLine> lines) : lines_(std::move(lines)) {}

Errata Errata::parse(std::string_view text, const std::string& source) {
  std::vector<ErrataLine> lines;
  scan_lines(text, source, [&](int digit, int line, std::int64_t target, std::string_view rest) {
    const auto arrow = rest.find("=>");
    if (arrow == std::string_view::npos) {
      throw FormatError(source, line, "errata line needs '<original> => <corrected>'");
    }
    lines.push_back(ErrataLine{digit, target, std::string(trim(rest.substr(0, arrow))),
                               std::string(trim(rest.substr(arrow + 2))), line});
  });
  return Errata(std::move(lines));
}

Errata Errata::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.filename().string());
}

const ErrataLine* Errata::find(int digit, std::int64_t target, std::string_view raw) const {
  const std::string key = normalize_raw(raw);
  for (const ErrataLine& l : lines_) {
    if (l.digit == digit && l.target == target && normalize_raw(l.original) == key) return &l;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Report

DigitTally VerifyReport::overall() const {
  DigitTally t;
  for (const auto& [digit, d] : per_digit) {
    t.verified += d.verified;
    t.mismatch += d.mismatch;
    t.parse_error += d.parse_error;
    t.errata_fixed += d.errata_fixed;
  }
  return t;
}

bool VerifyReport::clean() const {
  const DigitTally t = overall();
  return t.mismatch + t.parse_error == t.errata_fixed;
}

namespace {

void compare_with_solver(const std::vector<const CorpusEntry*>& verified, const SearchConfig& base,
                         SolverComparison& cmp) {
  std::map<int, std::vector<const CorpusEntry*>> by_digit;
  for (const CorpusEntry* e : verified) by_digit[e->digit].push_back(e);

  for (const auto& [digit, entries] : by_digit) {
    SearchConfig cfg = base;
    cfg.digit = digit;
    cfg.max_digits = 1;
    std::vector<Rational> targets;
    for (const CorpusEntry* e : entries) {
      cfg.max_digits = std::max(cfg.max_digits, std::min(digit_count(*e->parsed), base.max_digits));
      targets.emplace_back(e->target);
    }
    std::vector<SolveResult> results = solve_targets(targets, cfg);

    for (std::size_t i = 0; i < entries.size(); ++i) {
      const CorpusEntry& e = *entries[i];
      const int printed = digit_count(*e.parsed);
      const int budget = std::min(printed, base.max_digits);
      Improvement row{digit, e.target, e.raw, printed, 0, {}};
      const auto* sol = std::get_if<Solution>(&results[i]);
      if (sol != nullptr) {
        row.solver_count = sol->count;
        row.solver_expr = render(sol->expr);
      }
      if (sol != nullptr && sol->count <= budget) {
        ++cmp.compared;
        if (sol->count < printed) {
          cmp.improvements.push_back(std::move(row));
        } else {
          ++cmp.equal;
        }
      } else if (printed > base.max_digits) {
        ++cmp.skipped;
      } else {
        cmp.violations.push_back(std::move(row));
      }
    }
  }
}

}  // namespace

VerifyReport verify_corpus(std::span<const CorpusEntry> entries, const Caps& caps,
                           const std::optional<SearchConfig>& solver_cfg, const Errata* errata) {
  VerifyReport report;
  std::vector<CorpusEntry> checked;
  checked.reserve(entries.size());
  for (const CorpusEntry& e : entries) checked.push_back(verify_entry(e, caps));

  for (const CorpusEntry& e : checked) {
    DigitTally& t = report.per_digit[e.digit];
    switch (e.status) {
      case EntryStatus::Verified: ++t.verified; continue;
      case EntryStatus::Mismatch: ++t.mismatch; report.mismatches.push_back(e); break;
      case EntryStatus::ParseError: ++t.parse_error; report.parse_errors.push_back(e); break;
      case EntryStatus::Unchecked: break;
    }
    const ErrataLine* fix = errata != nullptr ? errata->find(e.digit, e.target, e.raw) : nullptr;
    if (fix == nullptr) continue;
    CorpusEntry corrected = e;
    corrected.raw = fix->corrected;
    corrected = verify_entry(std::move(corrected), caps);
    ErrataApplied applied{e, fix->corrected, corrected.status, {}};
    if (corrected.status == EntryStatus::Mismatch) {
      std::ostringstream os;
      os << *corrected.actual;
      applied.corrected_detail = os.str();
    } else if (corrected.status == EntryStatus::ParseError) {
      applied.corrected_detail = corrected.message;
    }
    if (corrected.status == EntryStatus::Verified) ++t.errata_fixed;
    report.errata.push_back(std::move(applied));
  }

  if (solver_cfg) {
    std::vector<const CorpusEntry*> verified;
    for (const CorpusEntry& e : checked) {
      if (e.status == EntryStatus::Verified) verified.push_back(&e);
    }
    report.solver.emplace();
    compare_with_solver(verified, *solver_cfg, *report.solver);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string outcome_text(const EvalOutcome& o) {
  if (o) return o.value().str();
  return "Discard(" + std::string(to_string(o.reason())) + ")";
}

EvalOutcome outcome_from_text(const std::string& s) {
  for (Discard d : {Discard::DivByZero, Discard::PowDomain, Discard::Overflow}) {
    if (s == "Discard(" + std::string(to_string(d)) + ")") return d;
  }
  return Rational::from_string(s);
}

EntryStatus status_from_text(const std::string& s) {
  for (EntryStatus st : {EntryStatus::Unchecked, EntryStatus::Verified, EntryStatus::Mismatch,
                         EntryStatus::ParseError}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown entry status '" + s + "'");
}

nlohmann::json entry_json(const CorpusEntry& e) {
  nlohmann::json j = {{"digit", e.digit}, {"target", e.target}, {"raw", e.raw},
                      {"source", e.source}, {"line", e.line}, {"status", to_string(e.status)}};
  if (e.actual) j["actual"] = outcome_text(*e.actual);
  if (!e.message.empty()) j["message"] = e.message;
  return j;
}

CorpusEntry entry_from_json(const nlohmann::json& j) {
  CorpusEntry e;
  e.digit = j.at("digit").get<int>();
  e.target = j.at("target").get<std::int64_t>();
  e.raw = j.at("raw").get<std::string>();
  e.source = j.at("source").get<std::string>();
  e.line = j.at("line").get<int>();
  e.status = status_from_text(j.at("status").get<std::string>());
  if (j.contains("actual")) e.actual = outcome_from_text(j.at("actual").get<std::string>());
  if (j.contains("message")) e.message = j.at("message").get<std::string>();
  return e;
}

nlohmann::json tally_json(const DigitTally& t) {
  return {{"verified", t.verified}, {"mismatch", t.mismatch}, {"parse_error", t.parse_error},
          {"errata_fixed", t.errata_fixed}, {"total", t.total()}};
}

DigitTally tally_from_json(const nlohmann::json& j) {
  DigitTally t;
  t.verified = j.at("verified").get<std::size_t>();
  t.mismatch = j.at("mismatch").get<std::size_t>();
  t.parse_error = j.at("parse_error").get<std::size_t>();
  t.errata_fixed = j.at("errata_fixed").get<std::size_t>();
  return t;
}

nlohmann::json improvement_json(const Improvement& i) {
  return {{"digit", i.digit}, {"target", i.target}, {"raw", i.raw}, {"printed_count", i.printed_count},
          {"solver_count", i.solver_count}, {"solver_expr", i.solver_expr}};
}

Improvement improvement_from_json(const nlohmann::json& j) {
  return Improvement{j.at("digit").get<int>(),         j.at("target").get<std::int64_t>(),
                     j.at("raw").get<std::string>(),    j.at("printed_count").get<int>(),
                     j.at("solver_count").get<int>(),   j.at("solver_expr").get<std::string>()};
}

}  // namespace

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json per_digit = nlohmann::json::object();
  for (const auto& [digit, t] : report.per_digit) per_digit[std::to_string(digit)] = tally_json(t);

  nlohmann::json j;
  j["total"] = report.total();
  j["clean"] = report.clean();
  j["tallies"] = {{"overall", tally_json(report.overall())}, {"per_digit", per_digit}};
  j["mismatches"] = nlohmann::json::array();
  for (const auto& e : report.mismatches) j["mismatches"].push_back(entry_json(e));
  j["parse_errors"] = nlohmann::json::array();
  for (const auto& e : report.parse_errors) j["parse_errors"].push_back(entry_json(e));
  j["errata"] = nlohmann::json::array();
  for (const auto& a : report.errata) {
    nlohmann::json item = {{"entry", entry_json(a.entry)},
                           {"corrected", a.corrected},
                           {"corrected_status", to_string(a.corrected_status)}};
    if (!a.corrected_detail.empty()) item["corrected_detail"] = a.corrected_detail;
    j["errata"].push_back(std::move(item));
  }
  if (report.solver) {
    const SolverComparison& s = *report.solver;
    nlohmann::json sj = {{"compared", s.compared}, {"equal", s.equal}, {"skipped", s.skipped}};
    sj["improvements"] = nlohmann::json::array();
    for (const auto& i : s.improvements) sj["improvements"].push_back(improvement_json(i));
    sj["violations"] = nlohmann::json::array();
    for (const auto& i : s.violations) sj["violations"].push_back(improvement_json(i));
    j["solver"] = std::move(sj);
  }
  return j;
}

VerifyReport report_from_json(const nlohmann::json& j) {
  VerifyReport r;
  for (const auto& [digit, t] : j.at("tallies").at("per_digit").items()) {
    r.per_digit[std::stoi(digit)] = tally_from_json(t);
  }
  for (const auto& e : j.at("mismatches")) r.mismatches.push_back(entry_from_json(e));
  for (const auto& e : j.at("parse_errors")) r.parse_errors.push_back(entry_from_json(e));
  for (const auto& a : j.at("errata")) {
    ErrataApplied applied;
    applied.entry = entry_from_json(a.at("entry"));
    applied.corrected = a.at("corrected").get<std::string>();
    applied.corrected_status = status_from_text(a.at("corrected_status").get<std::string>());
    if (a.contains("corrected_detail")) applied.corrected_detail = a.at("corrected_detail").get<std::string>();
    r.errata.push_back(std::move(applied));
  }
  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    SolverComparison s;
    s.compared = sj.at("compared").get<std::size_t>();
    s.equal = sj.at("equal").get<std::size_t>();
    s.skipped = sj.at("skipped").get<std::size_t>();
    for (const auto& i : sj.at("improvements")) s.improvements.push_back(improvement_from_json(i));
    for (const auto& i : sj.at("violations")) s.violations.push_back(improvement_from_json(i));
    r.solver = std::move(s);
  }
  return r;
}

std::string render_human(const VerifyReport& report) {
  std::ostringstream os;
  auto row = [&](const std::string& label, const DigitTally& t) {
    os << std::left << std::setw(8) << label << std::right << std::setw(9) << t.verified << std::setw(10)
       << t.mismatch << std::setw(13) << t.parse_error << std::setw(14) << t.errata_fixed << std::setw(8)
       << t.total() << '\n';
  };
  os << std::left << std::setw(8) << "digit" << std::right << std::setw(9) << "verified" << std::setw(10)
     << "mismatch" << std::setw(13) << "parse-error" << std::setw(14) << "errata-fixed" << std::setw(8)
     << "total" << '\n';
  for (const auto& [digit, t] : report.per_digit) row(std::to_string(digit), t);
  row("all", report.overall());

  auto where = [](const CorpusEntry& e) { return e.source + ":" + std::to_string(e.line); };
  if (!report.mismatches.empty()) {
    os << "\nMismatches:\n";
    for (const auto& e : report.mismatches) {
      os << "  " << where(e) << "  digit " << e.digit << "  " << e.target << " = " << e.raw << "  -> "
         << outcome_text(*e.actual) << '\n';
    }
  }
  if (!report.parse_errors.empty()) {
    os << "\nParse errors:\n";
    for (const auto& e : report.parse_errors) {
      os << "  " << where(e) << "  digit " << e.digit << "  " << e.target << " = " << e.raw << "  -> "
         << e.message << '\n';
    }
  }
  if (!report.errata.empty()) {
    os << "\nErrata:\n";
    for (const auto& a : report.errata) {
      os << "  " << where(a.entry) << "  digit " << a.entry.digit << "  " << a.entry.target << " = "
         << a.corrected << "  [" << to_string(a.corrected_status) << "]";
      if (!a.corrected_detail.empty()) os << " " << a.corrected_detail;
      os << '\n';
    }
  }
  if (report.solver) {
    const SolverComparison& s = *report.solver;
    os << "\nSolver comparison: " << s.compared << " compared, " << s.equal << " equal, "
       << s.improvements.size() << " improved, " << s.skipped << " skipped, " << s.violations.size()
       << " violations\n";
    for (const auto& i : s.improvements) {
      os << "  digit " << i.digit << "  " << i.target << ": printed " << i.printed_count << " -> "
         << i.solver_count << "  " << i.solver_expr << '\n';
    }
    for (const auto& i : s.violations) {
      os << "  VIOLATION digit " << i.digit << "  " << i.target << ": printed " << i.printed_count
         << ", solver " << i.solver_count << '\n';
    }
  }
  return os.str();
}

}  // namespace onedigit
