#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + EXPSUM_BINARY + std::string(" ") + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json last_json_line(const std::string& out) {
  std::istringstream in(out);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '{') last = line;
  }
  return nlohmann::json::parse(last);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, EvalKloosterman) {
  const auto r = run("eval kloosterman --m 1 --n 1 --c 3");
  ASSERT_EQ(r.status, 0);
  const auto j = last_json_line(r.out);
  EXPECT_EQ(j["kind"], "kloosterman");
  EXPECT_EQ(j["m"], 1);
  EXPECT_EQ(j["c"], 3);
  EXPECT_NEAR(j["re"].get<double>(), -1.0, 1e-9);
  EXPECT_EQ(j["term_count"], 2);
  EXPECT_NEAR(j["margin"].get<double>(), 1.0 / (2.0 * std::sqrt(3.0)), 1e-12);
}

TEST(Cli, EvalGaussAndTsum) {
  const auto g = last_json_line(run("eval gauss --a 1 --b 0 --c 4").out);
  EXPECT_NEAR(g["re"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(g["im"].get<double>(), 2.0, 1e-9);
  const auto t = last_json_line(run("eval tsum --m 1 --n 1 --q 4 --c 8 --f 1 --direct").out);
  EXPECT_NEAR(t["im"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(t["direct"], true);
}

TEST(Cli, EvalCuspSums) {
  const auto a = run("eval cusp-infty-rq --Q 4 --q 2 --r 1 --m 1 --n 1 --c 1");
  ASSERT_EQ(a.status, 0);
  EXPECT_NEAR(last_json_line(a.out)["re"].get<double>(), 1.0, 1e-9);
  const auto b = run("eval cusp-rq-rq --Q 3 --q 3 --r 1 --m 1 --n 1 --c 1");
  ASSERT_EQ(b.status, 0);
  EXPECT_NEAR(last_json_line(b.out)["re"].get<double>(), -1.0, 1e-9);  // S(1,1;3)
  const auto c = run("eval gamma01-infty --Q 2 --q 1 --m 1 --n 0 --c 2");
  ASSERT_EQ(c.status, 0);
  EXPECT_NEAR(last_json_line(c.out)["re"].get<double>(), -1.0, 1e-9);  // e(1/2)
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("eval kloosterman --m 1").status, 2);
  EXPECT_EQ(run("verify nosuch").status, 2);
  EXPECT_EQ(run("eval tsum --m 1 --n 1 --q 3 --c 8 --f 1").status, 2);
  EXPECT_EQ(run("sweep --m 1 --n 1 --progression 2,2,4").status, 2);
  EXPECT_EQ(run("sweep --m 1 --n 1 --progression 1,1,1 --grid geometric:10,0.5,3").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, VerifySmallSuites) {
  const auto w = run("verify weil --max-c 200");
  EXPECT_EQ(w.status, 0);
  EXPECT_NE(w.out.find("verify weil: PASS"), std::string::npos);
  EXPECT_EQ(run("verify lemma23 --max-Q 8 --max-c 4").status, 0);
  EXPECT_EQ(run("verify decomposition --Q 4 --q 1 --a 1 --C 40 --B 5").status, 0);
}

TEST(Cli, SweepSelfTest) {
  const auto r = run("sweep --self-test");
  EXPECT_EQ(r.status, 0);
}

TEST(Cli, SweepDeterministicAcrossThreads) {
  const std::string dir = ::testing::TempDir();
  const std::string a = dir + "expsum_t1.csv", b = dir + "expsum_t8.csv";
  const std::string args = "sweep --m 1 --n 1 --progression 1,1,1 --grid geometric:1000,2,5 --output ";
  ASSERT_EQ(run(args + a, "EXPSUM_THREADS=1").status, 0);
  ASSERT_EQ(run(args + b, "EXPSUM_THREADS=8").status, 0);
  const std::string x = slurp(a), y = slurp(b);
  EXPECT_FALSE(x.empty());
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.rfind("C,re,im,abs,bound_trivial,bound_thm52,slope_running\n", 0), 0u);
}

TEST(Cli, SweepJsonLines) {
  const auto r = run("sweep --m 1 --n 2 --periodic e:3 --grid geometric:64,2,4 --format json");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() != '{') continue;
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["m"], 1);
    EXPECT_EQ(j["n"], 2);
    EXPECT_TRUE(j.contains("C"));
    EXPECT_TRUE(j.contains("re"));
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}
