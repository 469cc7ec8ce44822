#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "rankfeed/metrics.hpp"
#include "rankfeed/oracles.hpp"
#include "support/generators.hpp"

namespace rankfeed {
namespace {

OracleState with_cumulative(std::vector<double> cumulative, const OracleConfig& cfg) {
  OracleState s = make_oracle_state(cumulative.size(), cfg);
  return oracle_feed(std::move(s), cfg, cumulative);
}

TEST(OracleNext, EmptyHistoryIsUniform) {
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kHedge, OracleKind::kFtrlL2,
                          OracleKind::kPgd}) {
    const auto cfg = OracleConfig::make(kind, 0.5, 4);
    const auto pi = oracle_next(make_oracle_state(4, cfg), cfg);
    for (double p : pi) EXPECT_NEAR(p, 0.25, 1e-15);
  }
}

TEST(OracleNext, EntropicClosedForm) {
  const auto cfg = OracleConfig::make(OracleKind::kFtrlEntropy, 1.0, 2);
  const auto pi = oracle_next(with_cumulative({1.0, 0.0}, cfg), cfg);
  const double e = std::exp(1.0);
  EXPECT_NEAR(pi[0], e / (e + 1), 1e-15);
  EXPECT_NEAR(pi[1], 1 / (e + 1), 1e-15);
}

TEST(OracleNext, QuadraticSaturatesAtVertex) {
  const auto cfg = OracleConfig::make(OracleKind::kFtrlL2, 1.0, 2);
  const auto pi = oracle_next(with_cumulative({10.0, 0.0}, cfg), cfg);
  EXPECT_EQ(pi[0], 1.0);
  EXPECT_EQ(pi[1], 0.0);
}

TEST(OracleNext, HedgeIsEntropicAlias) {
  Rng rng(31);
  const auto a = OracleConfig::make(OracleKind::kHedge, 0.3, 5);
  const auto b = OracleConfig::make(OracleKind::kFtrlEntropy, 0.3, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testing::random_utilities(rng, 5, false);
    EXPECT_EQ(oracle_next(with_cumulative(c, a), a), oracle_next(with_cumulative(c, b), b));
  }
}

TEST(OracleFeed, ZeroVectorKeepsStrategy) {
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2, OracleKind::kPgd}) {
    const auto cfg = OracleConfig::make(kind, 0.4, 3);
    const auto s = with_cumulative({0.3, -0.2, 0.0}, cfg);
    const std::vector<double> zero(3, 0.0);
    EXPECT_EQ(oracle_next(oracle_feed(s, cfg, zero), cfg), oracle_next(s, cfg));
  }
}

TEST(OracleFeed, OppositeFeedsReturnToStart) {
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2}) {
    const auto cfg = OracleConfig::make(kind, 0.8, 3);
    const std::vector<double> u{0.5, -0.25, 0.0};
    const std::vector<double> neg{-0.5, 0.25, 0.0};
    auto s = oracle_feed(make_oracle_state(3, cfg), cfg, u);
    s = oracle_feed(std::move(s), cfg, neg);
    EXPECT_EQ(oracle_next(s, cfg), oracle_next(make_oracle_state(3, cfg), cfg));
    EXPECT_EQ(s.step_count, 2u);
  }
}

TEST(OracleFeed, InterleavingsWithEqualSumsAgree) {
  Rng rng(32);
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2}) {
    const auto cfg = OracleConfig::make(kind, 0.2, 4);
    const auto seq = testing::random_sequence(rng, 8, 4);
    auto forward = make_oracle_state(4, cfg);
    auto backward = make_oracle_state(4, cfg);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      forward = oracle_feed(std::move(forward), cfg, seq[t]);
      backward = oracle_feed(std::move(backward), cfg, seq[seq.size() - 1 - t]);
    }
    const auto a = oracle_next(forward, cfg);
    const auto b = oracle_next(backward, cfg);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  }
}

TEST(OracleFeed, RejectsBadVectors) {
  const auto cfg = OracleConfig::make(OracleKind::kHedge, 1.0, 2);
  const std::vector<double> wrong(3, 0.0);
  EXPECT_THROW(oracle_feed(make_oracle_state(2, cfg), cfg, wrong), Error);
  const std::vector<double> nan{NAN, 0.0};
  EXPECT_THROW(oracle_feed(make_oracle_state(2, cfg), cfg, nan), Error);
  EXPECT_THROW(OracleConfig::make(OracleKind::kHedge, 0.0, 2), Error);
}

TEST(OracleRegret, SingleStepAgainstUniform) {
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2, OracleKind::kHedge,
                          OracleKind::kPgd}) {
    const auto cfg = OracleConfig::make(kind, 1.0, 2);
    EXPECT_NEAR(oracle_regret({{1.0, 0.0}}, cfg), 0.5, 1e-15);
  }
}

TEST(OracleRegret, LocksOntoConstantBestAction) {
  const auto cfg = OracleConfig::make(OracleKind::kHedge, 50.0, 2);
  const UtilitySequence seq(1000, UtilityVector{1.0, 0.0});
  EXPECT_LE(oracle_regret(seq, cfg), 1.0);
}

TEST(OracleRegret, HedgeBoundOnAlternatingSequences) {
  const std::size_t T = 10000;
  for (std::size_t n : {2u, 5u, 10u}) {
    UtilitySequence seq;
    for (std::size_t t = 0; t < T; ++t) {
      UtilityVector u(n, 0.0);
      u[t % n] = 1.0;
      seq.push_back(u);
    }
    const double lambda = std::sqrt(8.0 * std::log(static_cast<double>(n)) / T);
    const double bound = std::sqrt(T * std::log(static_cast<double>(n)) / 2.0);
    EXPECT_LE(oracle_regret(seq, OracleConfig::make(OracleKind::kHedge, lambda, n)),
              1.1 * bound);
  }
}

TEST(Stability, PropertyLipschitzInCumulativeSum) {
  Rng rng(33);
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.index(9);
      const auto cfg = OracleConfig::make(kind, rng.uniform(0.01, 3.0), n);
      const auto a = testing::random_sequence(rng, 1 + rng.index(10), n);
      const auto b = testing::random_sequence(rng, 1 + rng.index(10), n);
      auto sa = make_oracle_state(n, cfg);
      auto sb = make_oracle_state(n, cfg);
      for (const auto& u : a) sa = oracle_feed(std::move(sa), cfg, u);
      for (const auto& u : b) sb = oracle_feed(std::move(sb), cfg, u);
      const double lhs = distance(oracle_next(sa, cfg), oracle_next(sb, cfg));
      const double rhs =
          cfg.declared_L * distance(sa.cumulative_utility, sb.cumulative_utility);
      EXPECT_LE(lhs, rhs + 1e-9);
    }
  }
}

TEST(Stability, PropertyPerStepDrift) {
  Rng rng(34);
  for (OracleKind kind : {OracleKind::kFtrlEntropy, OracleKind::kFtrlL2, OracleKind::kPgd}) {
    const std::size_t n = 6;
    const auto cfg = OracleConfig::make(kind, 0.3, n);
    auto s = make_oracle_state(n, cfg);
    for (int t = 0; t < 2000; ++t) {
      const auto before = oracle_next(s, cfg);
      s = oracle_feed(std::move(s), cfg, testing::random_utilities(rng, n));
      const auto after = oracle_next(s, cfg);
      EXPECT_LE(distance(before, after), cfg.declared_eta + 1e-9);
      double total = 0.0;
      for (double p : after) {
        EXPECT_GE(p, 0.0);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ProjectToSimplex, FixesSimplexPointsAndMatchesTwoActionFormula) {
  Rng rng(35);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = testing::random_strategy(rng, 1 + rng.index(8));
    const auto q = project_to_simplex(p);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(q[i], p[i], 1e-12);
    const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
    const std::vector<double> v{x, y};
    const auto r = project_to_simplex(v);
    const double first = std::clamp((x - y + 1.0) / 2.0, 0.0, 1.0);
    EXPECT_NEAR(r[0], first, 1e-12);
  }
  EXPECT_THROW(project_to_simplex(std::vector<double>{}), Error);
}

}  // namespace
}  // namespace rankfeed
