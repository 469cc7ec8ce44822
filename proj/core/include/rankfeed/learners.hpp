#ifndef RANKFEED_LEARNERS_HPP_
#define RANKFEED_LEARNERS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rankfeed/environments.hpp"
#include "rankfeed/estimation.hpp"
#include "rankfeed/oracles.hpp"
#include "rankfeed/rng.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

enum class FeedbackMode { kInstFull, kInstBandit, kAvgFull, kAvgBandit };

std::string to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(const std::string& name);
bool is_bandit(FeedbackMode mode);
bool is_average(FeedbackMode mode);
// Ranking basis the environment should use for this feedback mode.
RankingBasis natural_basis(FeedbackMode mode);

struct LearnerConfig {
  FeedbackMode feedback = FeedbackMode::kInstFull;
  std::size_t K = 2;
  double gamma = 0.0;
  std::size_t window_m = 1;
  std::size_t block_M = 2;  // avg_bandit only
  OracleConfig oracle;
  double tau = 1.0;

  // Full-information modes propose every action once and never explore.
  LearnerConfig normalized(std::size_t num_actions) const;
  void validate(std::size_t num_actions) const;
};

struct TheoryInputs {
  FeedbackMode feedback = FeedbackMode::kInstFull;
  std::size_t horizon = 1;
  std::size_t num_actions = 2;
  std::size_t K = 2;
  double variation_budget = 1.0;  // P^(T); unused by the average modes
  double delta = 0.05;
  double oracle_L = 1.0;  // only enters the avg_bandit exploration rate
};

struct Hyperparameters {
  std::size_t window_m = 1;
  double gamma = 0.0;
  std::size_t block_M = 2;
  double lambda = 1.0;
};

// Theorem-optimal scalings, rounded up and clamped so that 1 <= m <= T.
// lambda defaults to T^{-1/2}.
Hyperparameters prescribed_hyperparameters(const TheoryInputs& in);

// One Eq. 4 block term for a single action: the change in count-weighted
// empirical mean divided by the change in count. A block in which the
// action was never proposed falls back to the current empirical mean.
double block_term(double empirical_now, std::size_t count_now, double empirical_prev,
                  std::size_t count_prev);

// Reconstructs per-block average utilities from empirical means sampled
// at block boundaries t = M, 2M, ...
class BlockAverageEstimator {
 public:
  BlockAverageEstimator(std::size_t num_actions, std::size_t block_M);

  void record_proposal(const std::vector<ActionIndex>& entries);
  bool at_block_boundary() const { return t_ > 0 && t_ % block_M_ == 0; }
  // Appends the block term for the block ending now.
  void close_block(const UtilityVector& empirical);

  // Mean of the block terms; zero before the first boundary.
  const UtilityVector& average() const { return average_; }
  const std::vector<UtilityVector>& block_terms() const { return terms_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t t() const { return t_; }

 private:
  std::size_t num_actions_;
  std::size_t block_M_;
  std::size_t t_ = 0;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> counts_at_boundary_;
  UtilityVector empirical_at_boundary_;
  std::vector<UtilityVector> terms_;
  UtilityVector term_sum_;
  UtilityVector average_;
};

// A ranking-feedback learner wrapping a full-information oracle.
class Learner {
 public:
  Learner(std::size_t num_actions, const LearnerConfig& config);

  // pi^(t) for the upcoming step.
  const MixedStrategy& strategy() const { return strategy_; }
  Proposal propose(Rng& rng);
  // Consumes the ranking of the most recent proposal and forms pi^(t+1).
  void update(const Ranking& sigma);

  // The utility vector handed to the oracle at the last update: u~^(t) for
  // the instantaneous modes, the average estimate for the AvgUtil modes.
  const UtilityVector& last_estimate() const { return estimate_; }
  std::size_t t() const { return t_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const LearnerConfig& config() const { return config_; }
  const OracleState& oracle_state() const { return oracle_; }
  const BlockAverageEstimator& block_estimator() const { return blocks_; }

 private:
  void set_strategy(const MixedStrategy& base);

  std::size_t num_actions_;
  LearnerConfig config_;
  OracleState oracle_;
  WindowEstimator window_;
  BlockAverageEstimator blocks_;
  std::vector<std::size_t> counts_;
  MixedStrategy strategy_;
  UtilityVector estimate_;
  std::optional<Proposal> pending_;
  std::size_t t_ = 0;
};

struct TraceStep {
  Proposal proposal;
  Ranking ranking;
  MixedStrategy strategy;  // pi^(t)
  UtilityVector estimate;  // Learner::last_estimate() after the update
  UtilityVector utility;   // true u^(t)
  double realized = 0.0;   // (1/K) sum over the proposal of u^(t)
  double expected = 0.0;   // <u^(t), pi^(t)>
};

struct Trace {
  std::size_t num_actions = 0;
  std::vector<TraceStep> steps;
  MixedStrategy final_strategy;  // pi^(T+1)
};

using StepObserver = std::function<void(std::size_t t, const TraceStep& step)>;

// Plays T steps against `env`. Proposals and rankings use separate streams
// derived from `seed`. The observer sees every step (t is 1-based).
// Returns pi^(T+1).
MixedStrategy run_learner_streaming(RankingEnvironment& env, const LearnerConfig& config,
                           std::size_t horizon, std::uint64_t seed,
                           const StepObserver& observer);
Trace run_learner(RankingEnvironment& env, const LearnerConfig& config, std::size_t horizon,
                  std::uint64_t seed);

}  // namespace rankfeed

#endif  // RANKFEED_LEARNERS_HPP_
