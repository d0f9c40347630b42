#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tandemq/throughput.hpp"

using namespace tandemq;

namespace {

double lmax(std::vector<double> mu, std::vector<int> B) {
  return lambda_max(validate_config(mu, B)).lambda_max;
}

}  // namespace

TEST(LambdaMax, ReferenceValues) {
  EXPECT_NEAR(lmax({1, 1, 1}, {0, 0}), 0.564102564, 5e-9);
  EXPECT_NEAR(lmax({0.8, 1, 1}, {1, 1}), 0.615528799, 5e-9);
}

TEST(LambdaMax, TwoServersNoBuffer) {
  for (double mu : {0.3, 1.0, 4.5}) EXPECT_NEAR(lmax({mu, mu}, {0}), 2.0 * mu / 3.0, 1e-13);
}

TEST(LambdaMax, SingleServerIsItsRate) {
  const auto r = lambda_max(validate_config(std::vector{1.7}, std::vector<int>{}));
  EXPECT_EQ(r.lambda_max, 1.7);
  EXPECT_EQ(r.M, 1u);
}

TEST(LambdaMax, MatchesPhysicalLineCtmc) {
  // independent model of the line: counts plus hold flags, built by BFS
  const std::vector<std::pair<std::vector<double>, std::vector<int>>> cases{
      {{1, 1, 1}, {0, 0}},        {{0.8, 1, 1, 1}, {1, 1, 1}},   {{1.3, 0.7, 1.1}, {2, 0}},
      {{1, 2, 0.5, 1.5}, {0, 2, 1}}, {{0.9, 1.1, 1, 1.2, 0.8}, {0, 0, 0, 0}}};
  for (const auto& [mu, B] : cases)
    EXPECT_NEAR(lmax(mu, B), oracle::physical_line_throughput(mu, B), 1e-10);
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(closed_form_two_server(1.0, 1.0, 2), 0.8, 1e-15);
  EXPECT_NEAR(closed_form_two_server(3.0, 3.0, 2), 2.4, 1e-14);
  EXPECT_NEAR(closed_form_two_server(1.0, 1.0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(closed_form_two_server(1.0, 1e9, 2), 1.0, 1e-8);
  // large ratios stay finite
  EXPECT_TRUE(std::isfinite(closed_form_two_server(1e300, 1e-10, 50)));
}

TEST(ClosedForm, UncorrectedBufferTwoExpressionDiffersAtEqualRates) {
  EXPECT_NEAR(printed_two_server_b2(1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(lmax({1, 1}, {2}), 0.8, 1e-13);
}

TEST(ClosedForm, AgreesWithQbdAndBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double mu0 = u(rng), mu1 = u(rng);
    for (int B = 0; B <= 3; ++B) {
      const double cf = closed_form_two_server(mu0, mu1, B);
      EXPECT_NEAR(lmax({mu0, mu1}, {B}), cf, 1e-10);
      EXPECT_NEAR(oracle::two_server_brute(mu0, mu1, B), cf, 1e-13);
    }
  }
}

TEST(Stability, FlipsAtThreshold) {
  const auto cfg = validate_config(std::vector{0.8, 1.0, 1.0}, std::vector{1, 1});
  const auto report = lambda_max(cfg);
  EXPECT_TRUE(is_stable(report, 0.0));
  EXPECT_TRUE(is_stable(report, 0.9 * report.lambda_max));
  EXPECT_FALSE(is_stable(report, 1.1 * report.lambda_max));
  EXPECT_TRUE(is_stable(cfg, report.lambda_max * (1 - 1e-6)));
  EXPECT_FALSE(is_stable(cfg, report.lambda_max * (1 + 1e-6)));
  try {
    is_stable(report, -0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeArrivalRate);
  }
}

TEST(Properties, ReversalInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int K = 1; K <= 4; ++K) {
    for (int B = 0; B <= 2; ++B) {
      std::vector<double> mu(K + 1);
      for (double& m : mu) m = u(rng);
      const auto cfg = validate_config(mu, std::vector<int>(K, B));
      EXPECT_NEAR(lambda_max(cfg).lambda_max, lambda_max(cfg.reversed()).lambda_max, 1e-9);
    }
  }
}

TEST(Properties, MoreBufferNeverHurts) {
  for (const auto& mu : std::vector<std::vector<double>>{{0.8, 1, 1, 1}, {1.3, 0.6, 2.0}, {1, 1}}) {
    double prev = 0.0;
    for (int B = 0; B <= 3; ++B) {
      const double l = lmax(mu, std::vector<int>(mu.size() - 1, B));
      EXPECT_GE(l, prev);
      prev = l;
    }
  }
}

TEST(Properties, DecreasesAndConvergesInServerCount) {
  std::vector<double> l;
  for (int n = 2; n <= 7; ++n) l.push_back(lmax(std::vector<double>(n, 1.0), std::vector<int>(n - 1, 0)));
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_LT(l[i], l[i - 1]);
  for (std::size_t i = 2; i < l.size(); ++i) EXPECT_LT(l[i - 1] - l[i], l[i - 2] - l[i - 1]);
}

TEST(Properties, BoundedByBottleneck) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  std::uniform_int_distribution<int> b(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const int K = 1 + trial % 4;
    std::vector<double> mu(K + 1);
    std::vector<int> B(K);
    for (double& m : mu) m = u(rng);
    for (int& x : B) x = b(rng);
    const auto cfg = validate_config(mu, B);
    const double l = lambda_max(cfg).lambda_max;
    EXPECT_GT(l, 0.0);
    EXPECT_LT(l, cfg.min_rate());
  }
}

TEST(LambdaMax, StateCapPropagates) {
  const auto cfg = validate_config(std::vector<double>(6, 1.0), std::vector<int>(5, 1));
  try {
    lambda_max(cfg, {100});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StateSpaceTooLarge);
  }
}
