#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DPMC_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

using dpmc::test::data_path;

TEST(Cli, ExitCodes) {
  auto r = run(data_path("fig2.btor2"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "SAFE\n");
  r = run(data_path("counter_unsafe.btor2") + " --mode prop-off");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "UNSAFE\n");
  r = run(data_path("fig2.btor2") + " --mode prop-off --max-refinements 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "UNKNOWN\n");
  EXPECT_EQ(run(data_path("concat.btor2")).code, 3);
  EXPECT_EQ(run(data_path("no_bad.btor2")).code, 3);
  EXPECT_EQ(run(data_path("missing.btor2")).code, 3);
  EXPECT_EQ(run(data_path("fig2.btor2") + " --prop-bound 0").code, 3);
}

TEST(Cli, StatsJson) {
  const auto r = run(data_path("fig2.btor2") + " --stats-json");
  ASSERT_EQ(r.code, 0);
  const std::string json = r.out.substr(r.out.find('\n') + 1);
  for (const char* key : {"\"refinements\":0", "\"dpl_count\":", "\"drl_count\":0", "\"frames\":",
                          "\"euf_queries\":", "\"queries_skipped_by_propagation\":", "\"wall_ms\":"})
    EXPECT_NE(json.find(key), std::string::npos) << key;
}

TEST(Cli, WitnessAndDeterminism) {
  const auto a = run(data_path("counter_unsafe.btor2") + " --witness");
  const auto b = run(data_path("counter_unsafe.btor2") + " --witness");
  ASSERT_EQ(a.code, 1);
  EXPECT_EQ(first_line(a.out), "UNSAFE");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("#5\n0 101 c@5\n"), std::string::npos);
  EXPECT_EQ(a.out.substr(a.out.size() - 2), ".\n");
}

TEST(Cli, DumpsLemmasAndQueries) {
  const auto dir = std::filesystem::temp_directory_path() / "dpmc_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto lemmas = (dir / "lemmas.txt").string();
  const auto r = run(data_path("fig2.btor2") + " --dump-lemmas " + lemmas + " --dump-queries " +
                     (dir / "q").string() + " --oracle-check");
  EXPECT_EQ(r.code, 0);
  std::ifstream in(lemmas);
  std::string line;
  int dpl = 0;
  while (std::getline(in, line)) dpl += line.rfind("DPL ", 0) == 0;
  EXPECT_GE(dpl, 2);
  EXPECT_FALSE(std::filesystem::is_empty(dir / "q"));
  std::filesystem::remove_all(dir);
}
