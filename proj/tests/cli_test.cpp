#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "partinf.hpp"

namespace partinf {
namespace {

namespace fs = std::filesystem;

// Value of a "key=value" line in CLI output, NaN if absent.
double value_of(const std::string& out, const std::string& key) {
  const std::string tag = key + "=";
  std::size_t pos = out.rfind(tag, 0) == 0 ? 0 : out.find("\n" + tag);
  if (pos == std::string::npos) return std::nan("");
  if (pos != 0) ++pos;
  return std::stod(out.substr(pos + tag.size()));
}

struct CliResult {
  int status;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("partinf_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const int rc = std::system((std::string(PARTINF_CLI) + " " + args + " > " + out + " 2>&1").c_str());
    return {WEXITSTATUS(rc), text::read_file(out)};
  }

  fs::path dir_;
};

TEST_F(Cli, GenerateSolveCertifyOracle) {
  ASSERT_EQ(run("generate --family complete --n 8 --p 0 --q 0 --seed 3 --labels balanced --out " + path("obs.txt") +
                " --truth " + path("truth.txt")).status,
            0);
  const auto obs = parse_observation(text::read_file(path("obs.txt")));
  EXPECT_EQ(obs.size(), 8);
  EXPECT_EQ(obs.seed, 3u);

  auto solved = run("solve --in " + path("obs.txt") + " --out " + path("yhat.txt"));
  ASSERT_EQ(solved.status, 0) << solved.out;
  EXPECT_NE(solved.out.find("objective=56"), std::string::npos) << solved.out;
  EXPECT_NE(solved.out.find("labels=1 1 1 1 -1 -1 -1 -1"), std::string::npos) << solved.out;
  EXPECT_EQ(parse_labels(text::read_file(path("yhat.txt"))), sample_labels(8, LabelMode::balanced));

  auto cert = run("certify --in " + path("obs.txt") + " --labels " + path("yhat.txt"));
  ASSERT_EQ(cert.status, 0) << cert.out;
  EXPECT_NE(cert.out.find("certified=1"), std::string::npos);
  EXPECT_NEAR(value_of(cert.out, "lambda2"), 8.0, 1e-12) << cert.out;

  auto oracle = run("oracle --in " + path("obs.txt"));
  ASSERT_EQ(oracle.status, 0);
  EXPECT_NE(oracle.out.find("value=56"), std::string::npos);
  EXPECT_NE(oracle.out.find("num_optimal=1"), std::string::npos);
}

TEST_F(Cli, GenerateIsDeterministic) {
  for (const char* name : {"a.txt", "b.txt"})
    ASSERT_EQ(run("generate --family regular --n 20 --d 4 --p 0.2 --q 0.1 --seed 5 --out " + path(name)).status, 0);
  EXPECT_EQ(text::read_file(path("a.txt")), text::read_file(path("b.txt")));
}

TEST_F(Cli, Bounds) {
  auto s2 = run("bound stage2 --n 10 --q 0.1");
  ASSERT_EQ(s2.status, 0);
  EXPECT_NEAR(value_of(s2.out, "bound"), 0.0074465830709243405182, 1e-17) << s2.out;

  auto ch = run("bound --csv chernoff --n 100 --m 100 --r 0.5 --t 10");
  ASSERT_EQ(ch.status, 0);
  EXPECT_EQ(ch.out, "bound\n" + text::format_real(std::exp(-2.0)) + "\n");

  auto rate = run("bound rate --n 100 --k 100 --p 0.1 --phi 50 --delta 99");
  ASSERT_EQ(rate.status, 0);
  EXPECT_NE(rate.out.find("out_set_term=0\n"), std::string::npos);
  EXPECT_NE(rate.out.find("recovery_prob_bound=0\n"), std::string::npos);

  auto ex = run("bound expander --n 50 --d 10 --c 0.5 --k 50");
  ASSERT_EQ(ex.status, 0);
  EXPECT_NE(ex.out.find("out_set_ratio=inf"), std::string::npos);
}

TEST_F(Cli, ErrorsExitNonzero) {
  EXPECT_NE(run("oracle --in " + path("missing.txt")).status, 0);
  EXPECT_NE(run("bound stage2 --n 10 --q 0.7").status, 0);
  EXPECT_NE(run("generate --family regular --n 5 --d 3 --p 0 --q 0 --seed 1 --out " + path("x")).status, 0);
  EXPECT_NE(run("frobnicate").status, 0);
  ASSERT_EQ(run("generate --family complete --n 23 --p 0.1 --q 0.1 --seed 1 --out " + path("big.txt")).status, 0);
  auto big = run("oracle --in " + path("big.txt"));
  EXPECT_NE(big.status, 0);
  EXPECT_NE(big.out.find("n <= 22"), std::string::npos);
}

TEST_F(Cli, SimulateWritesCsvAndPlot) {
  text::write_file(path("spec.txt"), "families = complete, grid\nn = 12\np = 0.1, 0.3\ntrials = 5\nseed = 2\n");
  auto r = run("simulate --spec " + path("spec.txt") + " --csv " + path("t.csv") + " --plot " + path("t.svg"));
  ASSERT_EQ(r.status, 0) << r.out;
  auto table = read_csv(path("t.csv"));
  EXPECT_EQ(table.rows.size(), 2u * 2u * 3u);
  EXPECT_NE(text::read_file(path("t.svg")).find("<svg"), std::string::npos);
}

}  // namespace
}  // namespace partinf
