#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "onedigit/cli.hpp"
#include "onedigit/corpus.hpp"
#include "test_support.hpp"

namespace onedigit {
namespace {

using testing::shipped_data;
using testing::strip_volatile;
using testing::test_data;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// The table row for `target`, with the header lines skipped.
std::string row(const std::string& doc, const std::string& target) {
  std::istringstream in(doc);
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("#")) continue;
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first == target) return line;
  }
  return {};
}

TEST(Cli, SolveRange) {
  const CliRun r = run({"solve", "--digit", "9", "--range", "0..20", "--budget", "6"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(r.out.starts_with("# onedigit "));
  EXPECT_NE(r.out.find("# config "), std::string::npos);
  EXPECT_NE(row(r.out, "20").find("9 + 99/9"), std::string::npos) << row(r.out, "20");
  EXPECT_NE(row(r.out, "20").find(" 4 "), std::string::npos);
  EXPECT_NE(row(r.out, "0").find("9 - 9"), std::string::npos);
}

TEST(Cli, SolveSingleTarget) {
  const CliRun r = run({"solve", "--digit", "5", "--target", "1000", "--format", "machine"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["target"], 1000);
  EXPECT_EQ(j["rows"][0]["found"], true);
  EXPECT_EQ(j["rows"][0]["count"], 6);
  EXPECT_EQ(j["manifest"]["command"], "solve");
  EXPECT_EQ(j["manifest"]["config"]["digit"], 5);
  EXPECT_TRUE(j["manifest"].contains("started"));
  EXPECT_TRUE(j["manifest"].contains("version"));
}

TEST(Cli, NotFoundIsNotAnError) {
  const CliRun r = run({"solve", "--digit", "1", "--target", "1000", "--budget", "4"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(row(r.out, "1000").find("NOT-FOUND"), std::string::npos);
}

TEST(Cli, Table) {
  const CliRun r = run({"table", "--digits", "1..9", "--range", "0..10"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("digit 9"), std::string::npos);
  EXPECT_NE(row(r.out, "10").find("9 + 9/9"), std::string::npos);

  const CliRun one = run({"table", "--digits", "4", "--range", "5..5"});
  ASSERT_EQ(one.code, cli::kOk) << one.err;
  EXPECT_NE(row(one.out, "5").find("4 + 4/4"), std::string::npos);

  const CliRun some = run({"table", "--digits", "1,4,9", "--range", "1..2", "--format", "machine"});
  ASSERT_EQ(some.code, cli::kOk) << some.err;
  EXPECT_TRUE(nlohmann::json::accept(some.out));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "10", "--target", "3"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "0", "--target", "3"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--target", "1", "--range", "1..2"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--range", "5..1"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--range", "x"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--target", "1", "--format", "xml"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--target", "1", "--ops", "+%"}).code, cli::kUsageError);
  EXPECT_EQ(run({"table", "--range", "1..2", "--digits", "0,1"}).code, cli::kUsageError);
  EXPECT_EQ(run({"verify"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
  EXPECT_EQ(run({"--version"}).code, cli::kOk);
}

TEST(Cli, VerifyGolden) {
  const CliRun r = run({"verify", "--corpus", test_data("golden_30.txt").string()});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("30"), std::string::npos);
}

TEST(Cli, VerifyTypo) {
  const std::string typo = test_data("typo_line.txt").string();
  const CliRun r = run({"verify", "--corpus", typo});
  EXPECT_EQ(r.code, cli::kVerificationFailed);
  EXPECT_NE(r.err.find("1 mismatch"), std::string::npos) << r.err;

  const CliRun fixed = run({"verify", "--corpus", typo, "--errata", test_data("typo_errata.txt").string()});
  EXPECT_EQ(fixed.code, cli::kOk) << fixed.err;
}

TEST(Cli, VerifyMachineReportRoundTrips) {
  const CliRun r = run({"verify", "--corpus", test_data("golden_30.txt").string(), "--corpus",
                     test_data("typo_line.txt").string(), "--budget", "5", "--format", "machine"});
  EXPECT_EQ(r.code, cli::kVerificationFailed);
  const auto j = nlohmann::json::parse(r.out);
  const VerifyReport report = report_from_json(j["report"]);
  EXPECT_EQ(to_json(report), j["report"]);
  EXPECT_EQ(report.overall().verified, 30u);
  EXPECT_EQ(report.overall().mismatch, 1u);
  ASSERT_TRUE(report.solver.has_value());
  EXPECT_TRUE(report.solver->violations.empty());
  EXPECT_EQ(j["manifest"]["config"]["corpus"].size(), 2u);
}

TEST(Cli, FormatAndIoErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "onedigit_cli_test";
  std::filesystem::create_directories(dir);
  const auto bad = dir / "bad.txt";
  std::ofstream(bad) << "digit: 3\n3 3 3\n";
  EXPECT_EQ(run({"verify", "--corpus", bad.string()}).code, cli::kFormatError);
  EXPECT_EQ(run({"verify", "--corpus", (dir / "missing.txt").string()}).code, cli::kIoError);
  EXPECT_EQ(run({"solve", "--digit", "3", "--target", "1", "--out", (dir / "no/such/dir.txt").string()}).code,
            cli::kIoError);

  const auto out = dir / "out.txt";
  const CliRun r = run({"solve", "--digit", "3", "--target", "1", "--out", out.string()});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("3/3"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, BudgetTooLarge) {
  const CliRun r = run({"solve", "--digit", "4", "--range", "0..1000", "--budget", "12", "--memory-mb", "1"});
  EXPECT_EQ(r.code, cli::kBudgetTooLarge);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, Symmetry) {
  const CliRun r = run({"symmetry"});
  // HUNDRED's pattern evaluates to 50.
  EXPECT_EQ(r.code, cli::kVerificationFailed);
  EXPECT_NE(r.out.find("HUNDRED"), std::string::npos);
  EXPECT_NE(r.out.find("FIVE"), std::string::npos);
  const CliRun m = run({"symmetry", "--format", "machine"});
  EXPECT_TRUE(nlohmann::json::accept(m.out));
}

TEST(Cli, OutputIndependentOfThreads) {
  for (const char* format : {"human", "machine"}) {
    std::vector<std::string> args = {"solve", "--digit", "7", "--range", "0..200", "--budget", "6",
                                     "--format", format, "--threads"};
    args.push_back("1");
    const CliRun a = run(args);
    args.back() = "3";
    const CliRun b = run(args);
    ASSERT_EQ(a.code, cli::kOk);
    ASSERT_EQ(b.code, cli::kOk);
    EXPECT_EQ(strip_volatile(a.out), strip_volatile(b.out)) << format;
  }
}

TEST(Cli, ShippedCorpusReportsPrintedErrors) {
  std::vector<std::string> args = {"verify", "--errata", shipped_data("errata.txt").string(), "--corpus",
                                   shipped_data("corpus/joint_0_100.txt").string()};
  for (int d = 1; d <= 9; ++d) {
    args.push_back("--corpus");
    args.push_back(shipped_data("corpus/digit_" + std::to_string(d) + ".txt").string());
  }
  const CliRun r = run(args);
  EXPECT_EQ(r.code, cli::kVerificationFailed);
  EXPECT_EQ(r.err, "verification failed: 136 mismatch, 67 parse error, 51 fixed by errata\n");
}

}  // namespace
}  // namespace onedigit
