#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fedsel/error.hpp"
#include "fedsel/theory.hpp"
#include "oracles.hpp"

using namespace fedsel;
using namespace fedsel::theory;

TEST(GaussTail, AgainstSeries) {
  for (double tau : {0.1, 0.5, 1.0, 2.0})
    for (double mean : {-0.5, 0.0, 0.3})
      for (double sd : {0.5, 1.0}) {
        const double expect =
            1.0 - oracle::normal_cdf((tau - mean) / sd) + oracle::normal_cdf((-tau - mean) / sd);
        EXPECT_NEAR(gauss_tail_two_sided(tau, mean, sd), expect, 1e-12);
      }
  EXPECT_EQ(gauss_tail_two_sided(0.0, 0.0, 1.0), 1.0);
  EXPECT_EQ(gauss_tail_two_sided(0.5, 0.6, 0.0), 1.0);
  EXPECT_EQ(gauss_tail_two_sided(0.5, 0.4, 0.0), 0.0);
}

TEST(FprUpper, Cases) {
  EXPECT_EQ(fpr_upper(0.01, 0.02, 0.1), 1.0);
  EXPECT_EQ(fpr_upper(0.5, 0.0, 0.0), 0.0);
  const double v = fpr_upper(0.3, 0.05, 0.1);
  EXPECT_NEAR(v, gauss_tail_two_sided(0.3, 0.05, 0.1), 1e-15);
}

TEST(TprLower, Cases) {
  EXPECT_EQ(tpr_lower(0.0, 0.1, 0.0, 0.01), 1.0);
  EXPECT_NEAR(tpr_lower(0.05, 0.1, 0.0, 0.01),
              oracle::normal_cdf(0.05 / 0.01), 1e-12);
  EXPECT_EQ(tpr_lower(0.05, 0.1, 0.0, 0.0), 1.0);
  EXPECT_EQ(tpr_lower(0.2, 0.1, 0.0, 0.0), 0.0);
}

TEST(MvProbability, ExactValues) {
  EXPECT_EQ(mv_probability(0.5, 3), 0.5);
  EXPECT_EQ(mv_probability(0.0, 5), 0.0);
  EXPECT_EQ(mv_probability(1.0, 5), 1.0);
  EXPECT_DOUBLE_EQ(mv_probability(0.3, 1), 0.3);
  for (std::size_t N : {2u, 4u, 7u, 10u, 30u})
    for (double r : {0.05, 0.2, 0.6})
      EXPECT_NEAR(mv_probability(r, N), oracle::binomial_upper_tail(r, N, (N + 1) / 2), 1e-13);
  EXPECT_THROW(mv_probability(1.5, 3), ParameterError);
  EXPECT_THROW(mv_probability(0.5, 0), ParameterError);
}

TEST(MvProbability, Expectations) {
  const auto e = post_consensus_expectations(100, 5, 0.1, 0.9, 10);
  EXPECT_NEAR(e.false_positives, 95 * oracle::binomial_upper_tail(0.1, 10, 5), 1e-12);
  EXPECT_NEAR(e.true_positives, 5 * oracle::binomial_upper_tail(0.9, 10, 5), 1e-12);
}

TEST(MarkovTail, Formulas) {
  const auto t = markov_tail(0.01, 0.001, 5, 100, 3);
  EXPECT_NEAR(t.fp_bound, 9 * 0.01 * std::log(100.0), 1e-15);
  EXPECT_NEAR(t.tp_bound, 5 * (1 - 9 * 0.001), 1e-15);
  EXPECT_NEAR(t.prob_floor, 1 - (1.0 / 9 + 0.01), 1e-15);
  EXPECT_EQ(markov_tail(0.01, 0.5, 5, 100, 3).tp_bound, 0.0);
}

TEST(Kl, BernoulliDivergence) {
  EXPECT_EQ(kl_bernoulli(0.3, 0.3), 0.0);
  EXPECT_NEAR(kl_bernoulli(0.5, 0.25), 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75), 1e-15);
  EXPECT_THROW(kl_bernoulli(0.0, 0.5), ParameterError);
  const double t = pelekis_tail(0.1, 0.5, 200);
  EXPECT_NEAR(t, std::exp(-200 * kl_bernoulli(0.15, 0.1)), 1e-15);
  EXPECT_EQ(pelekis_tail(0.1, 0.5, 0), 1.0);
  EXPECT_THROW(pelekis_tail(0.5, 1.5, 10), ParameterError);
}

TEST(SampleComplexity, RegimesScale) {
  const double c = sample_complexity(0.1, 0.1, 2.0, Regime::Centralized, 10);
  EXPECT_NEAR(c, std::log(100.0) / 4.0, 1e-15);
  EXPECT_NEAR(sample_complexity(0.1, 0.1, 2.0, Regime::Decentralized, 10), 10 * c, 1e-12);
  EXPECT_EQ(sample_complexity(0.1, 0.1, 2.0, Regime::Proposed, 10), c);
}

TEST(ExplicitRates, Shape) {
  const double e = rate_exponent(10.0, 5, 100, 20.0);
  const double L = std::log(100.0) / 20.0;
  EXPECT_NEAR(e, 5 * std::pow(10.0 / std::sqrt(5.0) - L, 2) / (1 + std::sqrt(L)), 1e-12);
  EXPECT_NEAR(explicit_fpr(10.0, 5, 100, 20.0) + explicit_tpr(10.0, 5, 100, 20.0), 1.0, 1e-15);
  EXPECT_EQ(explicit_fpr(0.01, 5, 100, 20.0), 1.0);
  EXPECT_LT(explicit_fpr(1.0, 5, 100, 40.0), explicit_fpr(1.0, 5, 100, 20.0));
  EXPECT_GT(explicit_fpr(1.0, 5, 100, 20.0), 0.0);
}

TEST(BoundCurve, GridContracts) {
  const BoundParams params{20.0, 100, 5, 1e-2, 0.1, 1.0};
  const auto one = bound_curve(std::vector<double>{0.01}, params);
  EXPECT_EQ(one.fpr_upper.size(), 1u);
  const auto grid = linear_grid(0.0, 0.1, 200);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 0.1);
  const auto curve = bound_curve(grid, params);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    EXPECT_LE(curve.fpr_upper[k], curve.fpr_upper[k - 1]);
    EXPECT_LE(curve.tpr_lower[k], curve.tpr_lower[k - 1]);
  }
  BoundParams quiet = params;
  quiet.sigma = 0.0;
  const auto q = bound_curve(grid, quiet);
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_EQ(q.fpr_upper[k], 0.0);
  EXPECT_THROW(bound_curve(std::vector<double>{0.2, 0.1}, params), ParameterError);
  EXPECT_THROW(bound_curve(std::vector<double>{}, params), ParameterError);
}
