// End-to-end checks of the command-line tool through a shell.

#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

using Json = nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(ACTIVE_DYNAMICS_CLI) + "' " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "active_dynamics_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* kTwoState = R"({
  "state_process": {"type": "finite", "rates": [[-4, 4], [4, -4]], "speed": [1, -1]},
  "particle": {"kappa": 1, "lambda": 2, "gamma": 1},
  "seed": 7
})";

}  // namespace

TEST(Cli, DiffusionOfTheTwoStateModel) {
  const CliResult r = run("--config " + write_config("two.json", kTwoState) + " diffusion");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 2u);
  for (const auto& rep : j["reports"]) EXPECT_NEAR(rep["total"][0][0].get<double>(), 5.0, 1e-10);
  EXPECT_EQ(j["meta"]["command"], "diffusion");
  EXPECT_EQ(j["meta"]["seed"], 7);
  EXPECT_EQ(j["meta"]["config_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, TwoStateTransformAtZeroWavenumber) {
  const CliResult r = run("two-state --sqz 0 1");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["S"]["re"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["S"]["im"].get<double>(), 0.0);
}

TEST(Cli, SimulateIsDeterministicForAFixedSeed) {
  const std::string cfg = write_config("two.json", kTwoState);
  const CliResult a = run("--config " + cfg + " --threads 1 simulate --horizon 5 --replicas 300");
  const CliResult b = run("--config " + cfg + " --threads 3 simulate --horizon 5 --replicas 300");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  Json ja = Json::parse(a.out), jb = Json::parse(b.out);
  ja.erase("meta");
  jb.erase("meta");
  EXPECT_EQ(ja, jb);
  const CliResult c = run("--config " + cfg + " --seed 8 --threads 1 simulate --horizon 5 --replicas 300");
  Json jc = Json::parse(c.out);
  jc.erase("meta");
  EXPECT_NE(ja["covariance_rate"], jc["covariance_rate"]);
}

TEST(Cli, LdpRoutesAgree) {
  const CliResult r = run("--config " + write_config("two.json", kTwoState) +
                    " ldp --alpha-grid -1:1:0.5 --x-grid 0,1 --method both --dominance");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["free_energy"].size(), 2u);
  const auto& eig = j["free_energy"][0]["values"];
  const auto& var = j["free_energy"][1]["values"];
  ASSERT_EQ(eig.size(), 5u);
  for (std::size_t i = 0; i < eig.size(); ++i) EXPECT_NEAR(eig[i].get<double>(), var[i].get<double>(), 1e-6);
  EXPECT_NEAR(j["rate_function"][0].get<double>(), 0.0, 1e-9);
}

TEST(Cli, CompareReportsAReversibleChain) {
  const CliResult r = run("--config " + write_config("two.json", kTwoState) + " compare");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["dominated"].get<bool>());
  EXPECT_EQ(j["max_gap_magnitude"].get<double>(), 0.0);
}

TEST(Cli, ReproduceAnExample) {
  EXPECT_EQ(run("reproduce explicit-two-state --quick").code, 0);
  const CliResult r = run("--format json reproduce explicit-two-state --quick");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["id"], "explicit-two-state");
}

TEST(Cli, WritesArtifactsToTheOutputDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "active_dynamics_cli_out";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(run("--out " + dir.string() + " --format csv reproduce explicit-two-state --quick").code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "reproduce_explicit-two-state.csv"));
}

TEST(Cli, InputErrorsExitWithOne) {
  EXPECT_EQ(run("--config " + write_config("bad.json", "{\"state_process\": ") + " diffusion").code, 1);
  EXPECT_EQ(run("diffusion").code, 1);
  EXPECT_EQ(run("--config /nonexistent.json diffusion").code, 1);
  EXPECT_EQ(run("reproduce no-such-example").code, 1);
  EXPECT_EQ(run("reproduce explicit-two-state --quick", "ACTIVE_DYNAMICS_THREADS=many").code, 1);
  EXPECT_EQ(run("--format xml diffusion").code, 1);
  EXPECT_EQ(run("").code, 1);
  const std::string wrong_type = write_config("type.json", R"({"state_process": {"type": "levy"}, "particle": {}})");
  EXPECT_EQ(run("--config " + wrong_type + " diffusion").code, 1);
}

TEST(Cli, NumericalFailureExitsWithTwo) {
  // a circle process whose covariance barely decays defeats the tail bound
  const std::string cfg = write_config(
      "circle.json", R"({"state_process": {"type": "circle", "a": 1e-300, "b": 0},
                         "particle": {"kappa": 0, "lambda": 1, "gamma": 1}})");
  EXPECT_EQ(run("--config " + cfg + " diffusion --method green-kubo").code, 2);
}
