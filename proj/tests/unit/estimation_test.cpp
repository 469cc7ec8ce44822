#include <cmath>
#include <deque>

#include <gtest/gtest.h>

#include "rankfeed/estimation.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

namespace rankfeed {
namespace {

std::vector<Ranking> repeat(const Ranking& r, std::size_t times) {
  return std::vector<Ranking>(times, r);
}

TEST(Estimate, NeverCoOccurringActionIsZero) {
  std::vector<Ranking> window{Ranking{{0, 2}}, Ranking{{2, 0}}, Ranking{{1, 0}}};
  const auto u = estimate(window, 3, 1.0);
  EXPECT_EQ(u[1], 0.0);
  EXPECT_EQ(u[2], 0.0);
  EXPECT_NEAR(u[0], 0.0, 1e-15);
}

TEST(Estimate, AlwaysAheadSaturatesAtOne) {
  for (double tau : {0.1, 1.0, 4.0}) {
    const auto u = estimate(repeat(Ranking{{0, 1}}, 5), 2, tau);
    EXPECT_NEAR(u[0], 1.0, 1e-12);
    const auto v = estimate(repeat(Ranking{{1, 0}}, 5), 2, tau);
    EXPECT_NEAR(v[0], -1.0, 1e-12);
  }
}

TEST(Estimate, RejectsEmptyWindowAndBadAction) {
  std::vector<Ranking> empty;
  EXPECT_THROW(estimate(empty, 2, 1.0), Error);
  std::vector<Ranking> bad{Ranking{{0, 3}}};
  EXPECT_THROW(estimate(bad, 2, 1.0), Error);
  std::vector<Ranking> ok{Ranking{{0, 1}}};
  EXPECT_THROW(estimate(ok, 2, 0.0), Error);
}

TEST(Estimate, ConfigKeepsMostRecentRankings) {
  std::vector<Ranking> window{Ranking{{1, 0}}, Ranking{{1, 0}}, Ranking{{0, 1}}};
  const auto recent = estimate(window, 2, EstimatorConfig{1, 1.0});
  EXPECT_NEAR(recent[0], 1.0, 1e-12);
  const auto all = estimate(window, 2, EstimatorConfig{10, 1.0});
  EXPECT_NEAR(all[0], invert_fraction(1.0 / 3.0, 1.0), 0.0);
}

TEST(Estimate, StationaryMonteCarloWithinTolerance) {
  Rng rng(21);
  const std::vector<double> u{0.5, 0.0};
  std::vector<Ranking> window;
  for (int i = 0; i < 100000; ++i) window.push_back(sample_ranking(u, {1.0}, Proposal{{0, 1}}, rng));
  EXPECT_NEAR(estimate(window, 2, 1.0)[0], 0.5, 0.02);
}

TEST(Estimate, PropertyOutputInBoxWithZeroReference) {
  Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    std::vector<Ranking> window;
    const std::size_t m = 1 + rng.index(20);
    for (std::size_t s = 0; s < m; ++s) {
      window.push_back(Ranking{testing::random_multiset(rng, n, 1 + rng.index(5))});
    }
    const auto u = estimate(window, n, rng.uniform(0.05, 5.0));
    ASSERT_EQ(u.size(), n);
    EXPECT_EQ(u.back(), 0.0);
    for (double x : u) {
      EXPECT_GE(x, -1.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(Estimate, PropertyMonotoneInPairFractions) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + rng.index(30);
    std::vector<Ranking> window;
    for (std::size_t s = 0; s < m; ++s) {
      window.push_back(rng.uniform() < 0.5 ? Ranking{{0, 1}} : Ranking{{1, 0}});
    }
    const double tau = rng.uniform(0.1, 5.0);
    const double before = estimate(window, 2, tau)[0];
    window[rng.index(m)] = Ranking{{0, 1}};
    EXPECT_GE(estimate(window, 2, tau)[0], before);
  }
}

TEST(Estimate, PropertyExpectedFractionSandwich) {
  Rng rng(24);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng.index(50);
    const double tau = rng.uniform(0.1, 5.0);
    double lo = 1.0, hi = -1.0, f = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const double u = rng.uniform(-1.0, 1.0);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
      f += pairwise_marginal(u, 0.0, tau) / static_cast<double>(m);
    }
    const double v = tau * logit(f);
    EXPECT_GE(v, lo - 1e-12);
    EXPECT_LE(v, hi + 1e-12);
    EXPECT_NEAR(invert_fraction(f, tau), v, 1e-12);
  }
}

TEST(InvertFraction, ClampThenInvertEqualsInvertThenProject) {
  Rng rng(25);
  for (int trial = 0; trial < 10000; ++trial) {
    const double f = rng.uniform();
    const double tau = std::pow(10.0, rng.uniform(-2.5, 2.0));
    EXPECT_NEAR(invert_fraction(f, tau), invert_fraction_projected(f, tau), 1e-12);
  }
  for (double tau : {1e-4, 0.01, 1.0, 100.0}) {
    EXPECT_NEAR(invert_fraction(0.0, tau), -1.0, 1e-12);
    EXPECT_NEAR(invert_fraction(1.0, tau), 1.0, 1e-12);
  }
}

TEST(PairDenominator, SmallSizes) {
  EXPECT_EQ(pair_denominator_lcm(1), 1u);
  EXPECT_EQ(pair_denominator_lcm(2), 1u);
  EXPECT_EQ(pair_denominator_lcm(3), 2u);
  EXPECT_EQ(pair_denominator_lcm(4), 12u);
  EXPECT_EQ(pair_denominator_lcm(200), 0u);
}

void check_sliding_window(std::size_t n, std::size_t k, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  WindowEstimator incremental(n, k, EstimatorConfig{m, 0.7});
  std::deque<Ranking> naive;
  const auto u = testing::random_utilities(rng, n);
  for (int t = 0; t < 300; ++t) {
    const Ranking r =
        sample_ranking(u, {0.7}, Proposal{testing::random_multiset(rng, n, k)}, rng);
    incremental.push(r);
    naive.push_back(r);
    if (naive.size() > m) naive.pop_front();
    const std::vector<Ranking> copy(naive.begin(), naive.end());
    const auto a = incremental.estimate();
    const auto b = estimate(copy, n, 0.7);
    for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(a[j], b[j]) << "t=" << t << " j=" << j;
  }
}

TEST(WindowEstimator, BitwiseEqualToRescanExactPath) {
  check_sliding_window(3, 2, 17, 1);
  check_sliding_window(5, 5, 40, 2);
  check_sliding_window(4, 6, 1, 3);
}

TEST(WindowEstimator, BitwiseEqualToRescanFallbackPath) {
  WindowEstimator probe(3, 60, EstimatorConfig{10, 1.0});
  EXPECT_FALSE(probe.exact());
  check_sliding_window(3, 60, 10, 4);
}

TEST(WindowEstimator, RejectsWrongRankingSize) {
  WindowEstimator w(3, 2, EstimatorConfig{4, 1.0});
  EXPECT_THROW(w.estimate(), Error);
  EXPECT_THROW(w.push(Ranking{{0, 1, 2}}), Error);
}

TEST(EstimationBound, WorkedExample) {
  EstimationBoundInputs in;
  in.tau = 1.0;
  in.p = 1.0;
  in.num_actions = 2;
  in.delta = 0.05;
  in.m_prime = 1e6;
  const auto b = estimation_error_bound(in);
  const double independent =
      (std::exp(1.0) + 1.0) * (std::exp(1.0) + 1.0) * std::sqrt(std::log(160.0) / 1e6);
  EXPECT_NEAR(b.value, independent, 1e-15);
  EXPECT_NEAR(b.value, 0.0313, 5e-4);
  EXPECT_TRUE(b.applicable);
}

TEST(EstimationBound, ShrinksWithWindowAndAddsVariation) {
  EstimationBoundInputs in;
  double last = INFINITY;
  for (double m : {1e2, 1e4, 1e6, 1e10, 1e14}) {
    in.m_prime = m;
    const double v = estimation_error_bound(in).value;
    EXPECT_LT(v, last);
    last = v;
  }
  EXPECT_LT(last, 1e-4);
  in.window_variation = 0.25;
  EXPECT_NEAR(estimation_error_bound(in).value, last + 0.25, 1e-15);
}

TEST(EstimationBound, DivergesAtBothTemperatureExtremes) {
  EstimationBoundInputs in;
  in.m_prime = 1e4;
  in.tau = 1.0;
  const double mid = estimation_error_bound(in).value;
  in.tau = 1e-2;
  EXPECT_GT(estimation_error_bound(in).value, mid);
  in.tau = 1e2;
  EXPECT_GT(estimation_error_bound(in).value, mid);
}

TEST(EstimationBound, ApplicabilityAndErrors) {
  EstimationBoundInputs in;
  in.p = 0.1;
  in.m_prime = 100;
  EXPECT_FALSE(estimation_error_bound(in).applicable);
  in.p = 0.0;
  EXPECT_THROW(estimation_error_bound(in), Error);
  in.p = 1.0;
  in.delta = 1.0;
  EXPECT_THROW(estimation_error_bound(in), Error);
}

}  // namespace
}  // namespace rankfeed
