#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "rankfeed/ranking_model.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

namespace rankfeed {
namespace {

using testing::distinct_arrangements;
using testing::labeled_pl_distribution;

TEST(RankingProbability, EqualUtilitiesAreUniformOverSixOrders) {
  const std::vector<double> u{0.3, 0.3, 0.3};
  for (double tau : {0.1, 1.0, 10.0}) {
    for (const auto& order : distinct_arrangements({0, 1, 2})) {
      EXPECT_NEAR(ranking_probability(Ranking{order}, u, {tau}), 1.0 / 6.0, 1e-15);
    }
  }
}

TEST(RankingProbability, SingleEntryIsCertain) {
  const std::vector<double> u{0.7, 0.0};
  EXPECT_DOUBLE_EQ(ranking_probability(Ranking{{0}}, u, {1.0}), 1.0);
}

TEST(RankingProbability, MatchesHandCodedProductAndSumsToOne) {
  const std::vector<double> u{1.0, 0.0, -1.0};
  const double e1 = std::exp(1.0), e0 = 1.0, em1 = std::exp(-1.0);
  const double expected = e1 / (e1 + e0 + em1) * e0 / (e0 + em1);
  EXPECT_NEAR(ranking_probability(Ranking{{0, 1, 2}}, u, {1.0}), expected, 1e-15);
  double total = 0.0;
  for (const auto& order : distinct_arrangements({0, 1, 2})) {
    total += ranking_probability(Ranking{order}, u, {1.0});
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(RankingProbability, RejectsBadInputs) {
  const std::vector<double> u{0.5, 0.0};
  EXPECT_THROW(ranking_probability(Ranking{{0, 1}}, u, {0.0}), Error);
  EXPECT_THROW(ranking_probability(Ranking{{0, 1}}, u, {-1.0}), Error);
  const std::vector<double> bad{NAN, 0.0};
  EXPECT_THROW(ranking_probability(Ranking{{0, 1}}, bad, {1.0}), Error);
  EXPECT_THROW(ranking_probability(Ranking{{0, 2}}, u, {1.0}), Error);
}

TEST(RankingProbability, PropertyMultisetOrbitsSumToOneAndMatchBruteForce) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const std::size_t k = 1 + rng.index(5);
    const auto multiset = testing::random_multiset(rng, n, k);
    const auto u = testing::random_utilities(rng, n);
    const double tau = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const auto law = labeled_pl_distribution(multiset, u, tau);
    double total = 0.0;
    for (const auto& order : distinct_arrangements(multiset)) {
      const double p = ranking_probability(Ranking{order}, u, {tau});
      EXPECT_NEAR(p, law.at(order), 1e-12);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(RankingProbability, PropertyShiftInvariance) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const auto multiset = testing::random_multiset(rng, n, 1 + rng.index(5));
    auto u = testing::random_utilities(rng, n);
    const double tau = rng.uniform(0.05, 5.0);
    const double before = ranking_probability(Ranking{multiset}, u, {tau});
    const double c = rng.uniform(-3.0, 3.0);
    for (double& x : u) x += c;
    EXPECT_NEAR(ranking_probability(Ranking{multiset}, u, {tau}), before, 1e-12);
  }
}

TEST(RankingProbability, TinyTemperatureStaysFinite) {
  const std::vector<double> u{1.0, 0.0, -1.0};
  EXPECT_NEAR(ranking_probability(Ranking{{0, 1, 2}}, u, {1e-3}), 1.0, 1e-12);
  EXPECT_GE(ranking_probability(Ranking{{2, 1, 0}}, u, {1e-3}), 0.0);
}

TEST(SampleRanking, SingleEntryReturnsIt) {
  Rng rng(1);
  const std::vector<double> u{0.2, 0.0, 0.0};
  EXPECT_EQ(sample_ranking(u, {1.0}, Proposal{{1}}, rng).order, (std::vector<ActionIndex>{1}));
}

TEST(SampleRanking, OutputIsRearrangementOfProposal) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    auto entries = testing::random_multiset(rng, n, 1 + rng.index(6));
    const auto u = testing::random_utilities(rng, n);
    auto order = sample_ranking(u, {rng.uniform(0.1, 3.0)}, Proposal{entries}, rng).order;
    std::sort(entries.begin(), entries.end());
    std::sort(order.begin(), order.end());
    EXPECT_EQ(order, entries);
  }
}

TEST(SampleRanking, FirstPlaceFrequencyMatchesLogistic) {
  Rng rng(3);
  const std::vector<double> u{1.0, 0.0};
  const int draws = 100000;
  int first = 0;
  for (int i = 0; i < draws; ++i) {
    if (sample_ranking(u, {1.0}, Proposal{{0, 1}}, rng).order[0] == 0) ++first;
  }
  const double p = testing::plain_sigmoid(1.0);
  const double se = std::sqrt(p * (1 - p) / draws);
  EXPECT_NEAR(static_cast<double>(first) / draws, p, 4.0 * se);
  EXPECT_NEAR(p, 0.7310585786300049, 1e-15);
}

TEST(SampleRanking, NearDeterministicAtSmallTemperature) {
  const std::vector<double> u{1.0, 0.0, -1.0};
  const double p = ranking_probability(Ranking{{0, 1, 2}}, u, {1e-2});
  EXPECT_GE(p, 1.0 - 1e-6);
  Rng rng(4);
  int exact = 0;
  for (int i = 0; i < 10000; ++i) {
    if (sample_ranking(u, {1e-2}, Proposal{{2, 0, 1}}, rng).order ==
        std::vector<ActionIndex>{0, 1, 2}) {
      ++exact;
    }
  }
  EXPECT_EQ(exact, 10000);
}

TEST(SampleRanking, SameSeedSameDraws) {
  const std::vector<double> u{0.4, -0.3, 0.0};
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_ranking(u, {1.0}, Proposal{{0, 1, 2, 2}}, a),
              sample_ranking(u, {1.0}, Proposal{{0, 1, 2, 2}}, b));
  }
}

TEST(PairwiseMarginal, Examples) {
  for (double tau : {0.1, 1.0, 7.0}) EXPECT_DOUBLE_EQ(pairwise_marginal(0.3, 0.3, tau), 0.5);
  EXPECT_NEAR(pairwise_marginal(1.0, 0.0, 1.0), 0.731058578630005, 1e-15);
  const auto law = labeled_pl_distribution({0, 1}, {1.0, 0.0}, 1.0);
  EXPECT_NEAR(pairwise_marginal(1.0, 0.0, 1.0), law.at({0, 1}), 1e-15);
  EXPECT_THROW(pairwise_marginal(0.0, 0.0, 0.0), Error);
}

TEST(PairwiseMarginal, HardInstanceMixturesCoincide) {
  using testing::plain_sigmoid;
  const double p = (4 * plain_sigmoid(-5) / 13 + 9 * plain_sigmoid(1.5) / 13 - plain_sigmoid(1)) /
                   (plain_sigmoid(-0.2) - plain_sigmoid(1));
  const double lhs = 4.0 / 13.0 * pairwise_marginal(-0.5, 0.0, 0.1) +
                     9.0 / 13.0 * pairwise_marginal(0.15, 0.0, 0.1);
  const double rhs = p * pairwise_marginal(-0.02, 0.0, 0.1) +
                     (1 - p) * pairwise_marginal(0.1, 0.0, 0.1);
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(PairwiseMarginal, PropertyDecompositionAgainstEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const auto multiset = testing::random_multiset(rng, n, 2 + rng.index(5));
    const auto u = testing::random_utilities(rng, n);
    const double tau = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const auto law = labeled_pl_distribution(multiset, u, tau);
    const auto mult = multiplicities(multiset, n);
    for (ActionIndex a = 0; a < n; ++a) {
      for (ActionIndex b = 0; b < n; ++b) {
        if (a == b || mult[a] == 0 || mult[b] == 0) continue;
        const double expected = static_cast<double>(mult[a] * mult[b]) *
                                pairwise_marginal(u[a], u[b], tau);
        EXPECT_NEAR(testing::expected_pairs_ahead(law, a, b), expected, 1e-10);
      }
    }
  }
}

TEST(FirstPlaceMarginal, Examples) {
  const std::vector<double> flat{0.1, 0.1, 0.1, 0.1, 0.0};
  EXPECT_NEAR(first_place_marginal(2, flat, Proposal{{0, 1, 2, 3}}, {1.0}), 0.25, 1e-15);
  const std::vector<double> even{0.0, 0.0};
  EXPECT_NEAR(first_place_marginal(0, even, Proposal{{0, 0, 1}}, {1.0}), 2.0 / 3.0, 1e-15);
  const std::vector<double> u{1.0, 0.0, -1.0};
  double sum = 0.0;
  for (const auto& order : distinct_arrangements({0, 1, 2})) {
    if (order[0] == 0) sum += ranking_probability(Ranking{order}, u, {1.0});
  }
  EXPECT_NEAR(first_place_marginal(0, u, Proposal{{0, 1, 2}}, {1.0}), sum, 1e-15);
  EXPECT_THROW(first_place_marginal(2, u, Proposal{{0, 1}}, {1.0}), Error);
}

TEST(FirstPlaceMarginal, PropertyAgainstEnumeration) {
  Rng rng(6);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const auto multiset = testing::random_multiset(rng, n, 1 + rng.index(6));
    const auto u = testing::random_utilities(rng, n);
    const double tau = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const auto law = labeled_pl_distribution(multiset, u, tau);
    for (ActionIndex a : multiset) {
      EXPECT_NEAR(first_place_marginal(a, u, Proposal{multiset}, {tau}),
                  testing::probability_first(law, a), 1e-10);
    }
  }
}

TEST(PairCounts, Examples) {
  EXPECT_EQ(pair_counts(Ranking{{0, 2}}, 0, 3), (PairCounts{1, 0}));
  EXPECT_EQ(pair_counts(Ranking{{2, 0, 0}}, 0, 3), (PairCounts{0, 2}));
  EXPECT_EQ(pair_counts(Ranking{{0, 1, 0}}, 0, 3), (PairCounts{0, 0}));
  EXPECT_THROW(pair_counts(Ranking{{0, 2}}, 2, 3), Error);
}

TEST(PairCounts, PropertyAllPairCountsMatchDirectEnumeration) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    const auto order = testing::random_multiset(rng, n, 1 + rng.index(7));
    const auto counts = all_pair_counts(Ranking{order}, n);
    const ActionIndex ref = n - 1;
    EXPECT_EQ(counts[ref], PairCounts{});
    for (ActionIndex j = 0; j + 1 < n; ++j) {
      PairCounts direct;
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t k = i + 1; k < order.size(); ++k) {
          if (order[i] == j && order[k] == ref) ++direct.ahead;
          if (order[i] == ref && order[k] == j) ++direct.behind;
        }
      }
      EXPECT_EQ(counts[j], direct);
    }
  }
}

TEST(Logistic, StableAtExtremes) {
  EXPECT_EQ(logistic(-800.0), 0.0);
  EXPECT_EQ(logistic(800.0), 1.0);
  EXPECT_NEAR(logit(logistic(2.5)), 2.5, 1e-12);
}

}  // namespace
}  // namespace rankfeed
