#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>

#include "support.hpp"

namespace sst {
namespace {

using testing::ScratchDir;
using testing::slurp;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the CLI through the shell with optional environment assignments.
Run cli(const ScratchDir& dir, const std::string& args, const std::string& env = "") {
  const std::string out = dir / "stdout.txt";
  const std::string err = dir / "stderr.txt";
  const std::string cmd = "env -u SST_USERS -u SST_SEED " + env + " '" + std::string(SST_CLI_PATH) + "' " +
                          args + " >'" + out + "' 2>'" + err + "'";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::size_t authors_in(const std::string& path) {
  std::set<std::string> users;
  for (const auto& r : ingest_file(path).corpus.records) users.insert(r.original_user_id);
  return users.size();
}

TEST(Cli, MissingInputNamesPath) {
  ScratchDir dir("cli_missing");
  const auto r = cli(dir, "ingest -i '" + (dir / "nope.jsonl") + "' -o '" + (dir / "out") + "'");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find(dir / "nope.jsonl"), std::string::npos) << r.err;
}

TEST(Cli, UnknownMetricIsUsageError) {
  ScratchDir dir("cli_metric");
  ASSERT_EQ(cli(dir, "synth --users 20 -o '" + (dir / "in") + "'").status, 0);
  const auto r = cli(dir, "dismantle -i '" + (dir / "in/synthetic.jsonl") + "' -o '" + (dir / "out") +
                              "' --metrics h_index,bogus");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("unknown metric id 'bogus'"), std::string::npos) << r.err;
}

TEST(Cli, SynthIsDeterministicAndListsArtifacts) {
  ScratchDir dir("cli_synth");
  const auto a = cli(dir, "synth --seed 42 --users 30 -o '" + (dir / "a") + "'");
  const auto b = cli(dir, "synth --seed 42 --users 30 -o '" + (dir / "b") + "'");
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_EQ(a.out, "synthetic.jsonl\n");
  EXPECT_EQ(slurp(dir / "a/synthetic.jsonl"), slurp(dir / "b/synthetic.jsonl"));
  EXPECT_EQ(authors_in(dir / "a/synthetic.jsonl"), 30u);
}

TEST(Cli, FlagBeatsEnvBeatsConfigBeatsDefault) {
  ScratchDir dir("cli_layers");
  testing::spit(dir / "sst.toml", "users = 5\nseed = 7\n");
  const std::string config = " --config '" + (dir / "sst.toml") + "'";
  auto users = [&](const std::string& sub, const std::string& args, const std::string& env) {
    const auto r = cli(dir, "synth -o '" + (dir / sub) + "' " + args, env);
    EXPECT_EQ(r.status, 0) << r.err;
    return authors_in(dir / (sub + "/synthetic.jsonl"));
  };
  EXPECT_EQ(users("flag", "--users 3" + config, "SST_USERS=4"), 3u);
  EXPECT_EQ(users("env", config, "SST_USERS=4"), 4u);
  EXPECT_EQ(users("config", config, ""), 5u);
  EXPECT_EQ(users("default", "--max-records 1", ""), 1u);
  EXPECT_EQ(users("default_full", "", ""), 1000u);
}

TEST(Cli, ReportRunsEndToEnd) {
  ScratchDir dir("cli_report");
  ASSERT_EQ(cli(dir, "synth --users 40 -o '" + (dir / "in") + "'").status, 0);
  const auto r = cli(dir, "report --jobs 2 --metrics h_index,g_index -i '" + (dir / "in/synthetic.jsonl") +
                              "' -o '" + (dir / "out") + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("manifest.csv\n"), std::string::npos);
  EXPECT_NE(r.out.find("cvm_report.csv\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "out/stat_tests.csv"));
}

TEST(Cli, BadThresholdIsRejected) {
  ScratchDir dir("cli_range");
  ASSERT_EQ(cli(dir, "synth --users 10 -o '" + (dir / "in") + "'").status, 0);
  const auto r = cli(dir, "rank --conspiracy-threshold 1.5 -i '" + (dir / "in/synthetic.jsonl") + "'");
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace sst
