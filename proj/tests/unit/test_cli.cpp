#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poleswap_cli/cli.hpp"

namespace poleswap::cli {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "poleswap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "poleswap_cli_test";

  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

TEST_F(CliFiles, EigOnTriangularInput) {
  const auto in = write("tri.json", R"({"n": 2, "A": [[2,0],[1,0],[0,0],[3,0]], "B": [[1,0],[0,0],[0,0],[1,0]]})");
  const CliRun r = run_cli({"eig", "--input", in, "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["converged"].get<bool>());
  EXPECT_EQ(doc["config"]["seed"], "3");
  EXPECT_EQ(doc["config"]["method"], "new");
  std::vector<double> re;
  for (const auto& e : doc["eigenvalues"]) re.push_back(e["value"][0].get<double>());
  std::sort(re.begin(), re.end());
  EXPECT_EQ(re, (std::vector<double>{2.0, 3.0}));
}

TEST_F(CliFiles, EigMethodsAgreeAndCsvOutput) {
  const auto in = write("g.json", R"({"n": 3,
    "A": [[1,0],[2,1],[0,-1],[3,0],[1,1],[2,0],[0.5,0],[1,-2],[4,0]],
    "B": [[2,0],[0,1],[1,0],[1,0],[3,0],[0,0],[0,0],[1,1],[1,0]]})");
  const CliRun a = run_cli({"eig", "--input", in, "--method", "new"});
  const CliRun b = run_cli({"eig", "--input", in, "--method", "vandooren", "--shift", "rayleigh"});
  ASSERT_EQ(a.code, kExitOk);
  ASSERT_EQ(b.code, kExitOk);
  EXPECT_LE(nlohmann::json::parse(a.out)["r_a"].get<double>(), 1e-14);
  EXPECT_LE(nlohmann::json::parse(b.out)["r_a"].get<double>(), 1e-14);
  const auto out = (dir / "eig.csv").string();
  const CliRun c = run_cli({"eig", "--input", in, "--format", "csv", "--out", out});
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_TRUE(c.out.empty());
  std::ifstream f(out);
  std::stringstream text;
  text << f.rdbuf();
  EXPECT_NE(text.str().find("index,alpha_re,alpha_im,beta_re,beta_im,value_re,value_im\n"), std::string::npos);
  EXPECT_NE(text.str().find("# subcommand=eig\n"), std::string::npos);
}

TEST_F(CliFiles, MalformedInputIsInputError) {
  const auto in = write("bad.json", "{\"n\": 2,\n\"A\": [[1,0],\n}");
  const CliRun r = run_cli({"eig", "--input", in});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("line 3, column"), std::string::npos) << r.err;
}

TEST(Cli, BadFlagsAreInputErrors) {
  EXPECT_EQ(run_cli({}).code, kExitInput);
  EXPECT_EQ(run_cli({"eig"}).code, kExitInput);
  EXPECT_EQ(run_cli({"swap-bench", "--method", "new"}).code, kExitInput);
  EXPECT_EQ(run_cli({"swap-bench", "--format", "xml"}).code, kExitInput);
  EXPECT_EQ(run_cli({"verify", "--n", "2"}).code, kExitInput);
  EXPECT_EQ(run_cli({"accuracy", "--trials", "5", "--min-exp", "3", "--max-exp", "1"}).code, kExitInput);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST(Cli, SwapBenchEchoesConfig) {
  const CliRun r = run_cli({"swap-bench", "--trials", "200", "--seed", "9", "--workers", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["trials"].get<int>(), 200);
  EXPECT_EQ(doc["config"]["trials"], "200");
  EXPECT_EQ(doc["config"]["workers"], "2");
  EXPECT_EQ(doc["config"]["rng"], doc["rng"]);
  EXPECT_EQ(run_cli({"swap-bench", "--trials", "200", "--seed", "9"}).out.find("\"tail_trials\""),
            r.out.find("\"tail_trials\""));
}

TEST(Cli, AccuracyIsDeterministic) {
  const CliRun a = run_cli({"accuracy", "--trials", "30", "--seed", "4", "--format", "csv"});
  const CliRun b = run_cli({"accuracy", "--trials", "30", "--seed", "4", "--format", "csv", "--workers", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const auto strip = [](const std::string& s) { return s.substr(s.find("field,value")); };
  EXPECT_EQ(strip(a.out), strip(b.out));
}

TEST(Cli, VerifyPasses) {
  const CliRun r = run_cli({"verify", "--seed", "1", "--n", "8", "--pencils", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  for (const auto& c : doc["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
}

}  // namespace
}  // namespace poleswap::cli
