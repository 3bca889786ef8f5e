#include "support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;  // stdout and stderr together
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + RIDGELESS_CLI_PATH + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), pipe.get()) != nullptr) out += buf.data();
  const int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& s) {
  std::size_t c = 0;
  for (const char ch : s) c += ch == '\n';
  return c;
}

double metric(const std::string& line, const std::string& key) {
  const auto at = line.find(key + "=");
  if (at == std::string::npos) return NAN;
  return std::strtod(line.c_str() + at + key.size() + 1, nullptr);
}

}  // namespace

TEST(Cli, UsageWithoutCommand) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, FitOverparameterizedInterpolates) {
  const auto dir = ridgeless::testing::scratch_dir("cli_fit");
  const Outcome r = run("fit --n_train 150 --n_test 50 --features 300 -o " + (dir / "m.txt").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_LE(metric(r.out, "train_mse"), 1e-6) << r.out;
  EXPECT_TRUE(fs::exists(dir / "m.txt"));
  const Outcome inspect = run("inspect " + (dir / "m.txt").string());
  EXPECT_EQ(inspect.code, 0);
  EXPECT_NE(inspect.out.find("rf-model features=300"), std::string::npos) << inspect.out;
}

TEST(Cli, RidgeMetricsLineHasLambda) {
  const auto dir = ridgeless::testing::scratch_dir("cli_ridge");
  const Outcome r = run("fit --n_train 80 --features 40 --lambda 0.01 -o " + (dir / "m.txt").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("lambda=0.01 "), std::string::npos) << r.out;
}

TEST(Cli, FitIsDeterministic) {
  const auto dir = ridgeless::testing::scratch_dir("cli_det");
  const std::string common =
      "fit --synthetic slab --n_train 120 --n_test 40 --dim 3 --method rftk --epochs 3 --seed 4";
  ASSERT_EQ(run(common + " -o " + (dir / "a.txt").string() + " --trace_output " +
                (dir / "a.csv").string()).code, 0);
  ASSERT_EQ(run(common + " -o " + (dir / "b.txt").string() + " --trace_output " +
                (dir / "b.csv").string()).code, 0);
  EXPECT_EQ(slurp(dir / "a.txt"), slurp(dir / "b.txt"));
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv").rfind("iter,epoch,train_loss,trace_frobenius,test_metric\n", 0), 0u);
}

TEST(Cli, ConfigFileAndOverride) {
  const auto dir = ridgeless::testing::scratch_dir("cli_config");
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "# variance factor grid\nratios = [0.5, 2, 10]\noutput = " << (dir / "v.csv").string()
        << "\n";
  }
  const Outcome r = run("experiment variance-curve --config " + (dir / "run.ini").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("(3 rows)"), std::string::npos);
  EXPECT_EQ(slurp(dir / "v.csv"), "ratio,alpha\n0.5,2\n2,2\n10,1.11111111\n");

  const Outcome over = run("experiment variance-curve --config " + (dir / "run.ini").string() +
                       " --ratios 4");
  ASSERT_EQ(over.code, 0);
  EXPECT_EQ(slurp(dir / "v.csv"), "ratio,alpha\n4,1.33333333\n");
}

TEST(Cli, UnknownConfigKeyRejected) {
  const auto dir = ridgeless::testing::scratch_dir("cli_badkey");
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "ratios = [2]\nbandwith = 3\n";
  }
  const Outcome r = run("experiment variance-curve --config " + (dir / "run.ini").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("bandwith"), std::string::npos) << r.out;
}

TEST(Cli, BadValuesNameTheField) {
  Outcome r = run("fit --bandwidth -2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--bandwidth"), std::string::npos);
  r = run("experiment no-such-experiment");
  EXPECT_EQ(r.code, 2);
  r = run("fit --method kernel-ridge --n_train 20");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("--lambda"), std::string::npos);
}

TEST(Cli, RuntimeFailureIsNonzero) {
  const auto dir = ridgeless::testing::scratch_dir("cli_runtime");
  {
    std::ofstream f(dir / "bad.svm");
    f << "1 1:2\n0 x:1\n";
  }
  const Outcome r = run("fit --data " + (dir / "bad.svm").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
}

TEST(Cli, DoubleDescentRowCount) {
  const auto dir = ridgeless::testing::scratch_dir("cli_dd");
  const Outcome r = run("experiment double-descent --n_train 40 --n_test 20 --ratios 0.5 1 2 "
                    "--lambdas 0 0.01 --seeds 5 -o " + (dir / "dd.csv").string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(dir / "dd.csv");
  EXPECT_EQ(lines(csv), 1u + 30u + 2u);
  EXPECT_NE(r.out.find("(32 rows)"), std::string::npos);
}

TEST(Cli, OutputDirFromEnvironment) {
  const auto dir = ridgeless::testing::scratch_dir("cli_env");
  const Outcome r = run("experiment variance-curve --ratios 3", "RIDGELESS_OUTPUT_DIR=" + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "variance-curve.csv"));
}

TEST(Cli, CompareOnLibsvmFiles) {
  const auto dir = ridgeless::testing::scratch_dir("cli_cmp");
  {
    std::ofstream f(dir / "toy.svm");
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 60; ++i) {
      const double a = normal(rng), b = normal(rng);
      f << (a + b > 0 ? 1 : -1) << " 1:" << a << " 2:" << b << "\n";
    }
  }
  const Outcome r = run("experiment rftk-compare --datasets " + (dir / "toy.svm").string() +
                    " --replications 2 --epochs 2 --features 20 -o " + (dir / "c.csv").string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(dir / "c.csv");
  EXPECT_EQ(lines(csv), 1u + 2u * 5u);
  EXPECT_NE(csv.find("toy,rftk,1,"), std::string::npos);
}
