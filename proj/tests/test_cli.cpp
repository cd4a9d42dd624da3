#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qnpe/cli.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/trace_io.hpp"

using namespace qnpe;
namespace fs = std::filesystem;

namespace {

const std::string kData = QNPE_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> parse_summary(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qnpe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesTraceAndSummary) {
  const auto r = run({"run", "--problem", "quadratic:d=10,mu=1,l1=100,seed=3", "--out-dir",
                      dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string trace = slurp(dir_ / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), kTraceHeader);
  const auto kv = parse_summary(slurp(dir_ / "summary.txt"));
  EXPECT_EQ(kv.at("termination"), "grad_tol");
  EXPECT_EQ(kv.at("certificates_all_pass"), "true");
}

TEST_F(CliTest, SummaryTotalsMatchTraceColumns) {
  const auto r = run({"run", "--problem", "quadratic:d=12,mu=1,l1=300,seed=4", "--out-dir",
                      dir_.string(), "--max-iters", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream trace(slurp(dir_ / "trace.csv"));
  std::string line;
  std::getline(trace, line);
  long rows = 0, grad = 0, ls = 0, mvl = 0, mve = 0;
  while (std::getline(trace, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 10u);
    ++rows;
    ls += std::stol(cells[3]);
    grad += std::stol(cells[4]);
    mvl += std::stol(cells[5]);
    mve += std::stol(cells[6]);
  }
  const auto kv = parse_summary(slurp(dir_ / "summary.txt"));
  EXPECT_EQ(std::stol(kv.at("iterations")), rows);
  EXPECT_EQ(std::stol(kv.at("total_grad_evals")), grad);
  EXPECT_EQ(std::stol(kv.at("total_ls_steps")), ls);
  EXPECT_EQ(std::stol(kv.at("total_mv_linsolve")), mvl);
  EXPECT_EQ(std::stol(kv.at("total_mv_extevec")), mve);
}

TEST_F(CliTest, RunIsByteDeterministic) {
  const std::vector<std::string> base = {"run", "--problem", "logistic:n=60,d=5,lambda=0.05,seed=2",
                                         "--seed", "17"};
  auto a = base, b = base;
  a.insert(a.end(), {"--trace", (dir_ / "a.csv").string(), "--summary", (dir_ / "a.txt").string()});
  b.insert(b.end(), {"--trace", (dir_ / "b.csv").string(), "--summary", (dir_ / "b.txt").string()});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(CliTest, StepSeedTooSmallExitsTwo) {
  const auto r = run({"run", "--problem", "quadratic:d=3,mu=1,l1=1,seed=1", "--sigma0", "1e-9",
                      "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("StepSeedTooSmall"), std::string::npos);
}

TEST_F(CliTest, MatrixMarketIdentityWithGd) {
  const auto r = run({"run", "--problem", "mm:" + kData + "/ident2.mtx", "--method", "gd",
                      "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = parse_summary(r.out);
  EXPECT_LE(std::stoi(kv.at("iterations")), 2);
  EXPECT_EQ(kv.at("termination"), "grad_tol");
}

TEST_F(CliTest, OutputDirFromEnvironment) {
  ::setenv("QNPE_OUT_DIR", dir_.string().c_str(), 1);
  const auto r = run({"run", "--problem", "quadratic:d=3,mu=1,l1=2,seed=1", "--method", "gd"});
  ::unsetenv("QNPE_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "trace.csv"));
}

TEST_F(CliTest, ProblemSpecErrors) {
  EXPECT_EQ(run({"run", "--problem", "quadratic:d=3,mu=1,l1=2"}).code, 2);  // seed missing
  EXPECT_EQ(run({"run", "--problem", "cubic:d=3,seed=1"}).code, 2);
  EXPECT_EQ(run({"run", "--problem", "quadratic:d=3,mu=1,l1=2,seed=1,extra=4"}).code, 2);
  const auto r = run({"run", "--problem", "quadratic:d=3,mu=1,l1=2,seed=1", "--method", "sgd",
                      "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidArgument"), std::string::npos);
}

TEST_F(CliTest, ConfigFileThenFlagOverride) {
  const auto cfg = dir_ / "cfg.txt";
  std::ofstream(cfg) << "max_iters=3\noracle_mode=exact\n";
  const auto r = run({"run", "--problem", "quadratic:d=5,mu=1,l1=100,seed=1", "--config",
                      cfg.string(), "--max_iters", "4", "--grad-tol", "0", "--out-dir",
                      dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_summary(r.out).at("iterations"), "4");
}

TEST_F(CliTest, VerifyExactModePasses) {
  const auto r = run({"verify", "--problem", "quadratic:d=10,mu=1,l1=100,seed=2", "--oracle-mode",
                      "exact"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pass_rate=1/1"), std::string::npos);
}

TEST_F(CliTest, VerifyBaselineIsNotApplicable) {
  const auto r = run({"verify", "--problem", "quadratic:d=10,mu=1,l1=100,seed=2", "--method", "bfgs"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("contraction na"), std::string::npos);
  EXPECT_NE(r.out.find("regret na"), std::string::npos);
}

TEST_F(CliTest, VerifyMultipleSeedsReportsRate) {
  const auto r = run({"verify", "--problem", "quadratic:d=8,mu=1,l1=50,seed=1", "--runs", "3",
                      "--min-pass-rate", "0.5"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("seed=2 "), std::string::npos);
  EXPECT_NE(r.out.find("pass_rate="), std::string::npos);
}

TEST_F(CliTest, CompareWritesTable) {
  const std::string p = "quadratic:d=10,mu=1,l1=1000,seed=5";
  const auto r = run({"compare", "qnpe@" + p, "gd@" + p, "--out-dir", dir_.string(), "--dist-tol",
                      "1e-10", "--max-iters", "20000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string table = slurp(dir_ / "compare.dat");
  EXPECT_NE(table.find("# qnpe iterations="), std::string::npos);
  EXPECT_NE(table.find("# gd iterations="), std::string::npos);
}

TEST_F(CliTest, CompareIsByteDeterministic) {
  const std::string p = "quadratic:d=6,mu=1,l1=30,seed=5";
  ASSERT_EQ(run({"compare", "qnpe@" + p, "bfgs@" + p, "--output", (dir_ / "a.dat").string()}).code, 0);
  ASSERT_EQ(run({"compare", "qnpe@" + p, "bfgs@" + p, "--output", (dir_ / "b.dat").string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "a.dat"), slurp(dir_ / "b.dat"));
}

TEST_F(CliTest, CompareMismatchAndSingleSpec) {
  const auto single = run({"compare", "qnpe@quadratic:d=3,mu=1,l1=2,seed=1", "--out-dir", dir_.string()});
  EXPECT_EQ(single.code, 2);
  EXPECT_NE(single.err.find("ProblemMismatch"), std::string::npos);
  const auto mixed = run({"compare", "qnpe@quadratic:d=3,mu=1,l1=2,seed=1",
                          "gd@quadratic:d=3,mu=1,l1=2,seed=2", "--out-dir", dir_.string()});
  EXPECT_EQ(mixed.code, 2);
  EXPECT_NE(mixed.err.find("ProblemMismatch"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwoAndHelpExitsZero) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"run"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
