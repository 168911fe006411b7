#include <gtest/gtest.h>

#include <sstream>

#include "hilblat/cli.hpp"
#include "support/process.hpp"

namespace hilblat {
namespace {

const std::string kFixtures = HILBLAT_TEST_DATA "/fixtures.json";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(WorkspaceTest, ParseErrors) {
  EXPECT_THROW(Workspace::from_string("{"), InputError);
  EXPECT_THROW(Workspace::from_string(R"({"bogus": {}})"), InputError);
  EXPECT_THROW(Workspace::from_string(R"({"lattices": {"A": {"gram": [[1, 2], [3, 4]]}}})"),
               InputError);
  EXPECT_THROW(Workspace::from_string(R"({"lattices": {"K3": {"diagonal": [1]}}})"), InputError);
  EXPECT_THROW(Workspace::from_string(R"({"lattices": {"A": {"diagonal": [1]}},
                                          "vectors": {"A": {"lattice": "A", "coords": [1]}}})"),
               InputError);
  EXPECT_THROW(Workspace::from_string(R"({"vectors": {"v": {"lattice": "U", "coords": [1]}}})"),
               InputError);
  EXPECT_THROW(Workspace::from_string(R"({"lattices": {"A": {"diagonal": [1.5]}}})"), InputError);
}

TEST(WorkspaceTest, BigIntegersAsStrings) {
  const Workspace ws = Workspace::from_string(
      R"({"lattices": {"A": {"diagonal": ["123456789012345678901234567890"]}}})");
  EXPECT_EQ(ws.lattice("A").lattice.gram()(0, 0),
            Integer("123456789012345678901234567890"));
}

TEST(WorkspaceTest, ProductCycleRejected) {
  EXPECT_THROW(Workspace::from_string(R"({"isometries": {
      "a": {"lattice": "U", "product": ["b"]},
      "b": {"lattice": "U", "product": ["a"]}}})"),
               InputError);
}

TEST(CliTest, BuiltinSignature) {
  const CliRun r = run({"signature", "K3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("signature: (3, 0, 19)"), std::string::npos);
  EXPECT_NE(r.out.find("discriminant: -1"), std::string::npos);
}

TEST(CliTest, SolveIndex) {
  const CliRun r = run({"solve-index", "2", "4", "30", "--json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("17"), std::string::npos);
  EXPECT_EQ(run({"solve-index", "2", "4", "0"}).code, 2);
  EXPECT_EQ(run({"solve-index", "two", "4", "3"}).code, 2);
}

TEST(CliTest, IndexOfBeauvilleFixture) {
  const CliRun r = run({"index", "NS_QUARTIC", "beauville", "-w", kFixtures});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lambda = -3"), std::string::npos);
  const CliRun nat = run({"natural-check", "NS_QUARTIC", "beauville", "-w", kFixtures});
  EXPECT_EQ(nat.code, 0);
  EXPECT_NE(nat.out.find("NOT"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run({"signature", "NOPE"}).code, 2);
  EXPECT_EQ(run({"signature"}).code, 2);
  EXPECT_EQ(run({"signature", "U", "-w", "/nonexistent/workspace.json"}).code, 2);
  EXPECT_EQ(run({"index", "U", "shear_u", "-w", kFixtures}).code, 3);
  EXPECT_EQ(run({"natural-check", "D2", "swap_u", "-w", kFixtures}).code, 2);
  EXPECT_EQ(run({"isometry-check", "shear_u", "-w", kFixtures}).code, 0);
}

TEST(CliTest, ReportIsInProcessDeterministic) {
  const CliRun a = run({"report", "-w", kFixtures});
  const CliRun b = run({"report", "-w", kFixtures});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

// Byte-for-byte comparison of the installed binary against reviewed output.
class GoldenTest : public ::testing::TestWithParam<std::pair<std::string, std::string>> {};

TEST_P(GoldenTest, MatchesGoldenTwice) {
  const auto& [flags, golden] = GetParam();
  const std::string command = std::string(HILBLAT_CLI) + " report " + flags + " -w " + kFixtures;
  const std::string expected = testing::read_file(HILBLAT_TEST_GOLDEN "/" + golden);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const testing::ProcessResult r = testing::run_process(command);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, expected) << "attempt " << attempt;
  }
}

INSTANTIATE_TEST_SUITE_P(Report, GoldenTest,
                         ::testing::Values(std::make_pair(std::string(), std::string("report.txt")),
                                           std::make_pair(std::string("--json"),
                                                          std::string("report.json"))));

}  // namespace
}  // namespace hilblat
