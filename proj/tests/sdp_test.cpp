#include "partinf/sdp.hpp"

#include <gtest/gtest.h>

#include <random>

#include "partinf/pipeline.hpp"
#include "test_util.hpp"

namespace partinf {
namespace {

Eigen::MatrixXd k3_noiseless() { return observe_edges(complete_graph(3), Labels::all_plus(3), 0.0, 0); }

TEST(Objective, K3Noiseless) { EXPECT_DOUBLE_EQ(objective(k3_noiseless(), Labels::all_plus(3)), 6.0); }

TEST(Objective, SignSymmetryAndEmptyGraph) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    auto a = testing::random_sign_matrix(8, 0.5, rng);
    auto y = testing::random_labels(8, rng);
    EXPECT_DOUBLE_EQ(objective(a, y), objective(a, -y));
  }
  EXPECT_EQ(objective(Eigen::MatrixXd::Zero(4, 4), Labels({1, -1, 1, 1})), 0.0);
  EXPECT_THROW(objective(Eigen::MatrixXd::Zero(4, 4), Labels({1, 1})), InvalidArgument);
}

TEST(SolverConfig, Defaults) {
  SolverConfig cfg;
  EXPECT_EQ(cfg.resolved_rank(100), 16);  // ceil(sqrt(200)) + 1
  EXPECT_EQ(cfg.resolved_rank(8), 5);
  EXPECT_DOUBLE_EQ(cfg.resolved_tolerance(100), 1e-6);
  EXPECT_EQ(cfg.max_sweeps, 500);
  cfg.rank = 1;
  EXPECT_THROW(cfg.validate(10), InvalidArgument);
  cfg.rank = 3;
  cfg.tolerance = 0.0;
  EXPECT_THROW(cfg.validate(10), InvalidArgument);
}

TEST(SolveSdp, K3NoiselessReachesRankOneOptimum) {
  auto sol = solve_sdp(k3_noiseless());
  EXPECT_NEAR(sol.objective, 6.0, 1e-6);
  EXPECT_TRUE(sol.converged);
  EXPECT_TRUE(sol.gram().isApprox(Eigen::MatrixXd::Ones(3, 3), 1e-6));
  EXPECT_EQ(round_solution(sol), Labels::all_plus(3));
}

TEST(SolveSdp, ZeroMatrixConvergesImmediately) {
  auto sol = solve_sdp(Eigen::MatrixXd::Zero(5, 5));
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_TRUE(sol.converged);
  EXPECT_EQ(sol.iterations, 1);
}

TEST(SolveSdp, RejectsBadInput) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1;
  EXPECT_THROW(solve_sdp(a), InvalidArgument);
  a(1, 0) = 1;
  a(2, 2) = 1;
  EXPECT_THROW(solve_sdp(a), InvalidArgument);
}

TEST(SolveSdp, MonotoneAndFeasibleEverySweep) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    auto a = testing::random_sign_matrix(10 + t, 0.4, rng);
    SolverConfig cfg;
    cfg.seed = t;
    auto sol = solve_sdp(a, cfg);
    for (std::size_t s = 1; s < sol.history.size(); ++s)
      EXPECT_GE(sol.history[s], sol.history[s - 1] - 1e-9 * (1 + std::abs(sol.history[s - 1])));
    for (int i = 0; i < sol.factor.rows(); ++i) EXPECT_NEAR(sol.factor.row(i).norm(), 1.0, 1e-9);
    EXPECT_NEAR(sol.objective, (a.cwiseProduct(sol.gram())).sum(), 1e-8 * (1 + std::abs(sol.objective)));
  }
}

TEST(SolveSdp, DeterministicUnderSeed) {
  std::mt19937_64 rng(3);
  auto a = testing::random_sign_matrix(20, 0.3, rng);
  SolverConfig cfg;
  cfg.seed = 9;
  auto s1 = solve_sdp(a, cfg), s2 = solve_sdp(a, cfg);
  EXPECT_EQ(s1.factor, s2.factor);
  EXPECT_EQ(s1.objective, s2.objective);
}

TEST(SolveSdp, RelaxationDominatesCombinatorialOptimum) {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (double p : {0.0, 0.1, 0.3}) {
    for (int t = 0; t < 60; ++t) {
      const int n = 3 + t % 10;
      auto g = testing::random_connected_graph(n, 0.4, rng);
      auto y = testing::random_labels(n, rng);
      auto a = observe_edges(g, y, p, rng());
      SolverConfig cfg;
      cfg.seed = rng();
      auto sol = solve_sdp(a, cfg);
      EXPECT_GE(sol.objective, brute_force_max(a).value - 1e-6) << "n=" << n << " p=" << p;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 180);
}

TEST(SolveSdp, NoiselessRecoveryIsExact) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto g = testing::random_connected_graph(5 + t, 0.15, rng);
    auto y = testing::random_labels(g.num_nodes(), rng);
    auto a = observe_edges(g, y, 0.0, 0);
    auto y_hat = round_solution(solve_sdp(a));
    EXPECT_TRUE(y_hat == y || y_hat == -y);
    EXPECT_EQ(y_hat[0], 1);
  }
}

TEST(RoundSolution, RankOneFactorRecoversSigns) {
  const Labels y({-1, 1, 1, -1, 1});
  SdpSolution sol;
  sol.factor = Factor::Zero(5, 3);
  for (int i = 0; i < 5; ++i) sol.factor(i, 1) = y[i];
  EXPECT_EQ(round_solution(sol), -y);  // first entry normalized to +1
}

TEST(RoundSolution, IdentityGramIsDeterministic) {
  SdpSolution sol;
  sol.factor = Factor::Identity(4, 4);
  auto first = round_solution(sol);
  EXPECT_EQ(first[0], 1);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(round_solution(sol), first);
}

TEST(BruteForce, K3Noiseless) {
  auto r = brute_force_max(k3_noiseless());
  EXPECT_EQ(r.labels, Labels::all_plus(3));
  EXPECT_DOUBLE_EQ(r.value, 6.0);
  EXPECT_EQ(r.num_optimal, 1u);
}

TEST(BruteForce, OneNegativeEdgeOnK3) {
  auto a = k3_noiseless();
  a(0, 1) = a(1, 0) = -1;
  auto r = brute_force_max(a);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  // Maximizers with y_0 = +1: (+,+,+), (+,-,+), (+,-,-); -1 sorts first.
  EXPECT_EQ(r.num_optimal, 3u);
  EXPECT_EQ(r.labels, Labels({1, -1, -1}));
}

TEST(BruteForce, SingleEdge) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  auto r = brute_force_max(a);
  EXPECT_EQ(r.labels, Labels({1, 1}));
  EXPECT_DOUBLE_EQ(r.value, 2.0);
}

TEST(BruteForce, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 12;
    auto a = testing::random_sign_matrix(n, 0.5, rng);
    auto fast = brute_force_max(a);
    auto slow = testing::naive_max(a);
    EXPECT_DOUBLE_EQ(fast.value, slow.value);
    EXPECT_EQ(fast.num_optimal * 2, slow.maximizers.size());
    std::vector<int> best;
    for (auto& m : slow.maximizers)
      if (m[0] == 1 && (best.empty() || m < best)) best = m;
    EXPECT_EQ(fast.labels, Labels(best));
  }
}

TEST(BruteForce, SizeLimit) {
  EXPECT_THROW(brute_force_max(Eigen::MatrixXd::Zero(23, 23)), SizeLimitError);
}

}  // namespace
}  // namespace partinf
