#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tch/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace tch::cli;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("tch_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CurveFirstRowIsInitialValue) {
  const auto r = invoke({"curve", "--n-sites", "3", "--t-max", "20", "--t-steps", "2000", "-o", path("c.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto lines = lines_of(slurp(path("c.csv")));
  ASSERT_EQ(lines.size(), 2u + 2001u);
  EXPECT_EQ(lines[0], "# tch-curve v1");
  EXPECT_EQ(lines[1], "t,tJ,tJ_over_N,i_ch,gnn_abs2,g1n_abs2,re_gnn,violation_flag");
  std::istringstream row(lines[2]);
  std::vector<std::string> cells;
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_NEAR(std::stod(cells[3]), 1.2071067811865475, 1e-12);
  EXPECT_EQ(cells[7], "1");

  const auto manifest = nlohmann::json::parse(slurp(path("c.csv.manifest.json")));
  EXPECT_EQ(manifest["version"], kToolVersion);
  EXPECT_EQ(manifest["convention"]["used"], "plain");
  EXPECT_EQ(manifest["convention"]["requested"], "auto");
  EXPECT_TRUE(manifest["all_checks_passed"].get<bool>());
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
  EXPECT_NEAR(manifest["results"]["t_star_numeric"].get<double>(), 0.5936423023782276, 1e-9);
}

TEST_F(CliTest, LargeChainFlattensWithoutLateViolations) {
  const auto r = invoke({"curve", "--n-sites", "128", "--t-max", "200", "-o", path("big.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto manifest = nlohmann::json::parse(slurp(path("big.csv.manifest.json")));
  for (const auto& iv : manifest["results"]["violation_intervals"]) EXPECT_LT(iv["tJ_end"].get<double>(), 50.0);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({"curve", "--t-steps", "0", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "--t-max", "-1", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "--n-sites", "1", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "--coupling-j", "0", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve"}).code, kExitUsage);  // no output path
  EXPECT_EQ(invoke({"curve", "--convention", "sideways", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "--nonsense", "-o", path("x.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"conjecture", "--t-steps", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "-o", (dir_ / "missing" / "x.csv").string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(invoke({"--version"}).code, kExitOk);
}

TEST_F(CliTest, OracleCapIsEnforced) {
  EXPECT_EQ(invoke({"verify", "--n-list", "11"}).code, kExitUsage);
  EXPECT_EQ(invoke({"conjecture", "--n-min", "2", "--n-max", "13", "--allow-large-oracle"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--oracle-max-n", "13"}).code, kExitUsage);
  const auto r = invoke({"verify", "--n-list", "3", "--mu-list=-1", "--t-steps", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("estimated peak memory"), std::string::npos);
}

TEST_F(CliTest, VerifyPassesOnReferenceGrid) {
  const auto r = invoke({"verify", "-o", path("v.csv")});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(path("v.csv.manifest.json")));
  EXPECT_EQ(manifest["checks"].size(), 10u);
  for (const auto& c : manifest["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
}

TEST_F(CliTest, ForcedWrongConventionFailsVerification) {
  const auto r = invoke({"verify", "--convention", "alternating", "--n-list", "4", "--mu-list=-1"});
  EXPECT_EQ(r.code, kExitVerification);
  EXPECT_NE(r.err.find("propagator_consistency"), std::string::npos);
}

TEST_F(CliTest, ConjectureTable) {
  const auto r = invoke({"conjecture", "--n-min", "2", "--n-max", "6", "-o", path("q.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto lines = lines_of(slurp(path("q.csv")));
  ASSERT_EQ(lines.size(), 2u + 5u);
  EXPECT_EQ(lines[0], "# tch-conjecture v1");
  EXPECT_EQ(invoke({"conjecture", "--n-min", "4", "--n-max", "4", "--convention", "alternating"}).code,
            kExitVerification);
}

TEST_F(CliTest, SweepIsDeterministicAcrossWorkerCounts) {
  const std::vector<std::string> base{"sweep", "--n-list", "8,4", "--mu-list=-1,-5", "--t-max", "4", "--t-steps", "400"};
  auto a = base;
  a.insert(a.end(), {"-o", path("a.csv"), "-j", "1"});
  auto b = base;
  b.insert(b.end(), {"-o", path("b.csv"), "-j", "4"});
  ASSERT_EQ(invoke(a).code, kExitOk);
  ASSERT_EQ(invoke(b).code, kExitOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  const auto lines = lines_of(slurp(path("a.csv")));
  ASSERT_EQ(lines.size(), 2u + 4u * 401u);
  EXPECT_EQ(lines[1], "n_sites,mu_over_j,t,tJ,tJ_over_N,i_ch,gnn_abs2,g1n_abs2,re_gnn,violation_flag");
  EXPECT_EQ(lines[2].substr(0, 5), "4,-5,");  // sorted by N, then mu/J
  EXPECT_EQ(lines.back().substr(0, 5), "8,-1,");
}

TEST_F(CliTest, ReplayReproducesDataBitForBit) {
  ASSERT_EQ(invoke({"curve", "--n-sites", "5", "--t-max", "7", "--t-steps", "300", "-o", path("r.csv")}).code, kExitOk);
  ASSERT_EQ(invoke({"replay", path("r.csv.manifest.json"), "-o", path("r2.csv")}).code, kExitOk);
  EXPECT_EQ(slurp(path("r.csv")), slurp(path("r2.csv")));

  ASSERT_EQ(invoke({"hv", "--instances", "5", "-o", path("h.json"), "--format", "json"}).code, kExitOk);
  ASSERT_EQ(invoke({"replay", path("h.json.manifest.json"), "-o", path("h2.json")}).code, kExitOk);
  EXPECT_EQ(slurp(path("h.json")), slurp(path("h2.json")));

  EXPECT_EQ(invoke({"replay", path("absent.json")}).code, kExitUsage);
  std::ofstream(path("broken.json")) << "{not json";
  EXPECT_EQ(invoke({"replay", path("broken.json")}).code, kExitUsage);
}

TEST_F(CliTest, JsonOutputCarriesRowsAndConfig) {
  ASSERT_EQ(invoke({"curve", "--n-sites", "3", "--t-max", "1", "--t-steps", "4", "--format", "json", "-o",
                    path("c.json")})
                .code,
            kExitOk);
  const auto doc = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_EQ(doc["schema"], "tch-curve v1");
  EXPECT_EQ(doc["convention"], "plain");
  EXPECT_EQ(doc["config"]["n_sites"], 3);
  ASSERT_EQ(doc["rows"].size(), 5u);
  EXPECT_NEAR(doc["rows"][0]["i_ch"].get<double>(), 1.2071067811865475, 1e-12);
  EXPECT_TRUE(doc["rows"][4].contains("tJ_over_N"));
}

TEST_F(CliTest, ConfigFileFillsUnsetFlags) {
  std::ofstream(path("run.cfg")) << "# comment\nn_sites = 5\nmu-over-j = -2\nt-steps = 4\n";
  ASSERT_EQ(invoke({"curve", "--config", path("run.cfg"), "--n-sites", "6", "-o", path("k.csv")}).code, kExitOk);
  const auto manifest = nlohmann::json::parse(slurp(path("k.csv.manifest.json")));
  EXPECT_EQ(manifest["config"]["n_sites"], 6);  // flag wins
  EXPECT_EQ(manifest["config"]["mu_over_j"], -2.0);
  EXPECT_EQ(manifest["config"]["t_steps"], 4);

  std::ofstream(path("bad.cfg")) << "no equals sign\n";
  EXPECT_EQ(invoke({"curve", "--config", path("bad.cfg"), "-o", path("k.csv")}).code, kExitUsage);
  EXPECT_EQ(invoke({"curve", "--config", path("nope.cfg"), "-o", path("k.csv")}).code, kExitUsage);
}

TEST_F(CliTest, HiddenVariableReportIsStable) {
  const auto a = invoke({"hv"});
  const auto b = invoke({"hv"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("hv_repeated_identity"), std::string::npos);
  EXPECT_NE(a.out.find("(1,1): "), std::string::npos);
}
