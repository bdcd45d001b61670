#include "partinf/generator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace partinf {
namespace {

TEST(SampleLabels, Modes) {
  EXPECT_EQ(sample_labels(3, LabelMode::all_plus), Labels({1, 1, 1}));
  EXPECT_EQ(sample_labels(4, LabelMode::balanced), Labels({1, 1, -1, -1}));
  EXPECT_EQ(sample_labels(5, LabelMode::balanced), Labels({1, 1, 1, -1, -1}));
  EXPECT_EQ(sample_labels(5, LabelMode::random, 7), sample_labels(5, LabelMode::random, 7));
  EXPECT_THROW(sample_labels(0, LabelMode::all_plus), InvalidArgument);
}

TEST(SampleLabels, RandomModeIsRoughlyFair) {
  auto y = sample_labels(20000, LabelMode::random, 3);
  int plus = 0;
  for (int v : y.values()) plus += v == 1;
  EXPECT_NEAR(plus, 10000, 4 * std::sqrt(5000.0));
}

TEST(Labels, RejectsNonSigns) { EXPECT_THROW(Labels({1, 0, -1}), InvalidArgument); }

TEST(ObserveEdges, NoiselessIsLabelProduct) {
  std::mt19937_64 rng(1);
  auto g = testing::random_connected_graph(12, 0.3, rng);
  auto y = testing::random_labels(12, rng);
  auto a = observe_edges(g, y, 0.0, 99);
  for (auto [i, j] : g.edges()) EXPECT_EQ(a(i, j), y[i] * y[j]);
  EXPECT_EQ((a.array() != 0.0).count(), 2 * static_cast<long>(g.num_edges()));
}

TEST(ObserveEdges, K3AllPlus) {
  auto a = observe_edges(complete_graph(3), Labels::all_plus(3), 0.0, 0);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(a, expected);
}

TEST(ObserveEdges, StructuralInvariants) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    auto g = testing::random_connected_graph(5 + t, 0.2, rng);
    auto y = testing::random_labels(g.num_nodes(), rng);
    auto a = observe_edges(g, y, 0.3, t);
    EXPECT_NO_THROW(validate_observation_matrix(a));
    for (int i = 0; i < g.num_nodes(); ++i)
      for (int j = 0; j < g.num_nodes(); ++j) EXPECT_EQ(a(i, j) != 0.0, g.has_edge(i, j));
  }
}

TEST(ObserveEdges, OneDrawPerUndirectedEdge) {
  // Draw for (i, j) must not depend on argument order.
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_EQ(edge_flipped(5, i, j, 0.4), edge_flipped(5, j, i, 0.4));
}

TEST(ObserveEdges, FlipCountMatchesBinomialMean) {
  const auto g = complete_graph(100);
  const auto y = Labels::all_plus(100);
  const int seeds = 1000;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) {
    auto a = observe_edges(g, y, 0.3, s);
    total += (a.array() < 0.0).count() / 2;
  }
  const double m = 4950;
  const double mean = total / seeds;
  const double se = std::sqrt(m * 0.3 * 0.7 / seeds);
  EXPECT_NEAR(mean, 0.3 * m, 3 * se);
}

TEST(ObserveEdges, EntrywiseExpectation) {
  const auto g = complete_graph(4);
  const Labels y({1, -1, 1, -1});
  const double p = 0.2;
  const int seeds = 20000;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
  for (int s = 0; s < seeds; ++s) sum += observe_edges(g, y, p, s);
  const double se = std::sqrt((1 - (1 - 2 * p) * (1 - 2 * p)) / seeds);
  for (auto [i, j] : g.edges()) EXPECT_NEAR(sum(i, j) / seeds, (1 - 2 * p) * y[i] * y[j], 3 * se);
}

TEST(ObserveEdges, NoiseRange) {
  auto g = complete_graph(3);
  auto y = Labels::all_plus(3);
  EXPECT_THROW(observe_edges(g, y, 0.5, 0), InvalidArgument);
  EXPECT_THROW(observe_edges(g, y, -0.1, 0), InvalidArgument);
  EXPECT_THROW(observe_edges(g, Labels::all_plus(4), 0.1, 0), InvalidArgument);
}

TEST(ObserveNodes, NoiselessAndDeterministic) {
  auto y = sample_labels(50, LabelMode::random, 4);
  EXPECT_EQ(observe_nodes(y, 0.0, 1), y);
  EXPECT_EQ(observe_nodes(y, 0.3, 8), observe_nodes(y, 0.3, 8));
  EXPECT_THROW(observe_nodes(y, 0.5, 0), InvalidArgument);
}

TEST(ObserveNodes, FlipRateNearHalf) {
  const double q = 0.5 - 1e-3;
  const int n = 200000;
  auto y = Labels::all_plus(n);
  auto w = observe_nodes(y, q, 12);
  int flips = 0;
  for (int v : w.values()) flips += v == -1;
  EXPECT_NEAR(static_cast<double>(flips) / n, q, 3 * std::sqrt(q * (1 - q) / n));
}

TEST(ObserveNodes, EntrywiseExpectation) {
  const Labels y({1, -1, -1});
  const double q = 0.15;
  const int seeds = 20000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int s = 0; s < seeds; ++s) sum += observe_nodes(y, q, s).to_vector();
  const double se = std::sqrt((1 - (1 - 2 * q) * (1 - 2 * q)) / seeds);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sum(i) / seeds, (1 - 2 * q) * y[i], 3 * se);
}

TEST(ObservationText, FormatIsExact) {
  auto obs = observe(complete_graph(3), Labels::all_plus(3), 0.0, 0.0, 42);
  EXPECT_EQ(to_text(obs), "3 0 0 42\n0 1 1\n0 2 1\n1 2 1\n1\n1\n1\n");
}

TEST(ObservationText, RoundTripIsBitExact) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 25; ++t) {
    auto g = testing::random_connected_graph(2 + t, 0.3, rng);
    auto y = testing::random_labels(g.num_nodes(), rng);
    const double p = std::uniform_real_distribution<double>(0.0, 0.49)(rng);
    const double q = std::uniform_real_distribution<double>(0.0, 0.49)(rng);
    auto obs = observe(g, y, p, q, rng());
    const auto body = to_text(obs);
    auto back = parse_observation(body);
    EXPECT_EQ(back.a, obs.a);
    EXPECT_EQ(back.w, obs.w);
    EXPECT_EQ(back.p, obs.p);
    EXPECT_EQ(back.q, obs.q);
    EXPECT_EQ(back.seed, obs.seed);
    EXPECT_EQ(to_text(back), body);
    EXPECT_EQ(back.graph(), g);
  }
}

TEST(ObservationText, ParseErrors) {
  EXPECT_THROW(parse_observation("2 0 0\n"), IoError);
  EXPECT_THROW(parse_observation("2 0 0 1\n0 1 2\n1\n1\n"), IoError);
  EXPECT_THROW(parse_observation("2 0 0 1\n0 1 1\n1\n"), IoError);
  EXPECT_THROW(parse_observation("2 0 0 1\n0 1 1\n1\n0\n"), IoError);
}

TEST(LabelsText, RoundTrip) {
  auto y = sample_labels(9, LabelMode::random, 2);
  EXPECT_EQ(parse_labels(to_text(y)), y);
  EXPECT_EQ(parse_labels("+1 -1 1"), Labels({1, -1, 1}));
  EXPECT_THROW(parse_labels("1 2"), IoError);
}

}  // namespace
}  // namespace partinf
