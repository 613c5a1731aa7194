#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "golden_commands.hpp"
#include "stridesea/cli.hpp"
#include "support.hpp"

using namespace stridesea;
using namespace stridesea::testing;
namespace fs = std::filesystem;

namespace {
struct Result {
  int code;
  std::string out, err;
};

class InFixtureDir {
 public:
  InFixtureDir() : saved_(fs::current_path()) { fs::current_path(STRIDESEA_FIXTURES); }
  ~InFixtureDir() { fs::current_path(saved_); }

 private:
  fs::path saved_;
};

Result run(const std::vector<std::string>& args) {
  InFixtureDir here;
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden_text(const Result& r) { return r.out + (r.err.empty() ? "" : "--- stderr\n" + r.err); }

bool updating() {
  const char* v = std::getenv("STRIDESEA_UPDATE_GOLDEN");
  return v && std::string(v) == "1";
}
}  // namespace

class Golden : public ::testing::TestWithParam<GoldenCommand> {};

TEST_P(Golden, MatchesRecordedOutput) {
  const auto& cmd = GetParam();
  const auto r = run(cmd.args);
  EXPECT_EQ(r.code, cmd.exit_code) << r.err;
  const fs::path path = fs::path(STRIDESEA_GOLDEN) / cmd.golden;
  const auto actual = golden_text(r);
  if (updating()) {
    fs::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << path << " missing; rerun with STRIDESEA_UPDATE_GOLDEN=1";
  EXPECT_EQ(actual, read_file(path.string()));
}

TEST_P(Golden, IsDeterministic) {
  const auto& cmd = GetParam();
  EXPECT_EQ(golden_text(run(cmd.args)), golden_text(run(cmd.args)));
}

INSTANTIATE_TEST_SUITE_P(Commands, Golden, ::testing::ValuesIn(golden_commands()),
                         [](const ::testing::TestParamInfo<GoldenCommand>& info) {
                           std::string n = info.param.golden;
                           for (char& c : n)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return n;
                         });

TEST(Cli, RiskCsvCriticalityMatchesOracle) {
  const auto r = run({"risk", "ois.ssm", "trees/tampering.atd", "trees/tampering_memory.atd", "--impact",
                      "impact.csv", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto a = report::parse_analysis_csv(r.out);
  const auto crit = oracle::criticality();
  ASSERT_EQ(a.criticality.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_TRUE(near(a.criticality[i], crit[i])) << i;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"threats", "ois.ssm", "--nope"}).code, 2);
  EXPECT_EQ(run({"validate", "missing.ssm"}).code, 4);
  EXPECT_EQ(run({"threats", "ois.ssm", "--scope", "everything"}).code, 1);
  EXPECT_EQ(run({"threats", "ois.ssm", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"cm", "optimize", "--effect", "effect.csv", "--threshold", "1.5"}).code, 1);
  EXPECT_EQ(run({"cm", "optimize", "--effect", "effect.csv", "--cutoff", "-1"}).code, 1);
  EXPECT_EQ(run({"cm", "optimize", "--effect", "effect.csv", "--threshold", "0.9"}).code, 3);
  EXPECT_EQ(run({"cm", "eval", "--effect", "effect.csv", "--select", "Use magic"}).code, 1);
  EXPECT_EQ(run({"cm", "whatif", "--effect", "effect.csv"}).code, 2);
  EXPECT_EQ(run({"atree", "eval", "ois.ssm"}).code, 2);
  EXPECT_EQ(run({"atree", "eval", "trees/tampering.atd", "--asset", "Nobody"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ParseErrorReportsPosition) {
  const fs::path dir = fs::temp_directory_path() / "stridesea_cli_test";
  fs::create_directories(dir);
  const auto bad = (dir / "bad.ssm").string();
  std::ofstream(bad) << "system \"x\" {\n  proces \"p\"\n}\n";
  const auto r = run({"validate", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(bad + ":2:3"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, ValidationErrorsCarrySpans) {
  const fs::path dir = fs::temp_directory_path() / "stridesea_cli_test_v";
  fs::create_directories(dir);
  const auto bad = (dir / "bad.ssm").string();
  std::ofstream(bad) << "system \"x\" {\n  process \"p\"\n  flow \"f\" from \"X\" to \"p\"\n}\n";
  const auto r = run({"validate", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(bad + ":3:3: error:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("\"X\""), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, InfeasibleNamesUncoverableRisks) {
  const auto r = run({"cm", "optimize", "--effect", "effect.csv", "--threshold", "0.9"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find(kSql), std::string::npos);
  EXPECT_EQ(r.err.find(kPhi), std::string::npos);
}

TEST(Cli, OptimizeRejectsSelect) {
  EXPECT_EQ(run({"cm", "optimize", "--effect", "effect.csv", "--select", "Use cryptography"}).code, 2);
}
