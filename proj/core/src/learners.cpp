#include "rankfeed/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rankfeed {

std::string to_string(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::kInstFull: return "inst_full";
    case FeedbackMode::kInstBandit: return "inst_bandit";
    case FeedbackMode::kAvgFull: return "avg_full";
    case FeedbackMode::kAvgBandit: return "avg_bandit";
  }
  return "unknown";
}

FeedbackMode parse_feedback_mode(const std::string& name) {
  if (name == "inst_full") return FeedbackMode::kInstFull;
  if (name == "inst_bandit") return FeedbackMode::kInstBandit;
  if (name == "avg_full") return FeedbackMode::kAvgFull;
  if (name == "avg_bandit") return FeedbackMode::kAvgBandit;
  throw Error("unknown feedback mode '" + name + "'");
}

bool is_bandit(FeedbackMode mode) {
  return mode == FeedbackMode::kInstBandit || mode == FeedbackMode::kAvgBandit;
}

bool is_average(FeedbackMode mode) {
  return mode == FeedbackMode::kAvgFull || mode == FeedbackMode::kAvgBandit;
}

RankingBasis natural_basis(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::kInstFull:
    case FeedbackMode::kInstBandit:
      return RankingBasis::kInstantaneous;
    case FeedbackMode::kAvgFull:
      return RankingBasis::kTimeAverage;
    case FeedbackMode::kAvgBandit:
      return RankingBasis::kEmpiricalMean;
  }
  return RankingBasis::kInstantaneous;
}

LearnerConfig LearnerConfig::normalized(std::size_t num_actions) const {
  LearnerConfig out = *this;
  if (!is_bandit(feedback)) {
    out.K = num_actions;
    out.gamma = 0.0;
  }
  return out;
}

void LearnerConfig::validate(std::size_t num_actions) const {
  if (num_actions < 2) throw Error("learner needs at least two actions");
  if (K < 1) throw Error("proposal size K must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("gamma must lie in [0, 1]");
  if (window_m < 1) throw Error("window m must be at least 1");
  RankingParams{tau}.validate();
  oracle.validate();
  if (!is_bandit(feedback) && (K != num_actions || gamma != 0.0)) {
    throw Error("full-information modes require K = |A| and gamma = 0");
  }
  if (is_average(feedback) && !oracle.cumulative()) {
    throw Error("AvgUtil learners need a cumulative-sum oracle (not pgd)");
  }
  if (feedback == FeedbackMode::kAvgBandit && block_M < 2 * window_m) {
    throw Error("avg_bandit requires block M >= 2 m");
  }
}

namespace {

std::size_t clamp_count(double x, std::size_t lo, std::size_t hi) {
  if (!(x < static_cast<double>(hi))) return hi;
  const double up = std::ceil(x);
  if (up < static_cast<double>(lo)) return lo;
  return std::min(hi, static_cast<std::size_t>(up));
}

}  // namespace

Hyperparameters prescribed_hyperparameters(const TheoryInputs& in) {
  if (in.horizon < 1) throw Error("horizon must be at least 1");
  if (in.num_actions < 2) throw Error("need at least two actions");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw Error("delta must lie in (0, 1)");
  const double T = static_cast<double>(in.horizon);
  const double A = static_cast<double>(in.num_actions);
  const double K = static_cast<double>(in.K);
  const double P = std::max(in.variation_budget, 1e-12);
  Hyperparameters h;
  h.lambda = 1.0 / std::sqrt(T);
  switch (in.feedback) {
    case FeedbackMode::kInstFull: {
      const double m = std::pow(T / P, 2.0 / 3.0) * std::cbrt(std::log(4.0 * A * T / in.delta));
      h.window_m = clamp_count(m, 1, in.horizon);
      break;
    }
    case FeedbackMode::kInstBandit: {
      if (in.K < 1) throw Error("proposal size K must be at least 1");
      h.gamma = std::min(1.0, std::pow(P / T, 0.2));
      const double m = 32.0 * std::pow(A / K, 4.0) * std::pow(T / P, 0.8) *
                       std::log(8.0 * A * T / in.delta);
      h.window_m = clamp_count(m, 1, in.horizon);
      break;
    }
    case FeedbackMode::kAvgFull: {
      const double m = 2.0 * std::pow(T, 2.0 / 3.0) * std::log(4.0 * A * T / in.delta);
      h.window_m = clamp_count(m, 1, in.horizon);
      break;
    }
    case FeedbackMode::kAvgBandit: {
      const double m =
          2.0 * std::pow(T, 2.0 / 3.0) * std::pow(A, 4.0) * std::log(12.0 * A * T / in.delta);
      h.window_m = clamp_count(m, 1, in.horizon);
      h.gamma = std::min(std::cbrt(in.oracle_L) * std::pow(T, 5.0 / 18.0) * std::pow(P, 1.0 / 6.0),
                         1.0);
      const double M = 4.0 * std::pow(T, 5.0 / 6.0) / std::sqrt(P) * std::pow(A, 4.0) *
                       std::log(12.0 * A * A * T / in.delta);
      const std::size_t lo = 2 * h.window_m;
      h.block_M = clamp_count(M, lo, std::max(lo, in.horizon));
      break;
    }
  }
  return h;
}

double block_term(double empirical_now, std::size_t count_now, double empirical_prev,
                  std::size_t count_prev) {
  if (count_now < count_prev) throw Error("block_term: counts must be nondecreasing");
  if (count_now == count_prev) return empirical_now;
  return (empirical_now * static_cast<double>(count_now) -
          empirical_prev * static_cast<double>(count_prev)) /
         static_cast<double>(count_now - count_prev);
}

BlockAverageEstimator::BlockAverageEstimator(std::size_t num_actions, std::size_t block_M)
    : num_actions_(num_actions),
      block_M_(block_M),
      counts_(num_actions, 0),
      counts_at_boundary_(num_actions, 0),
      empirical_at_boundary_(num_actions, 0.0),
      term_sum_(num_actions, 0.0),
      average_(num_actions, 0.0) {
  if (block_M < 1) throw Error("block size M must be at least 1");
}

void BlockAverageEstimator::record_proposal(const std::vector<ActionIndex>& entries) {
  for (ActionIndex a : entries) {
    if (a >= num_actions_) throw Error("proposal references out-of-range action");
  }
  for (ActionIndex a : entries) ++counts_[a];
  ++t_;
}

void BlockAverageEstimator::close_block(const UtilityVector& empirical) {
  if (empirical.size() != num_actions_) throw Error("empirical mean has the wrong length");
  UtilityVector term(num_actions_);
  for (std::size_t a = 0; a < num_actions_; ++a) {
    term[a] = block_term(empirical[a], counts_[a], empirical_at_boundary_[a],
                         counts_at_boundary_[a]);
    term_sum_[a] += term[a];
  }
  terms_.push_back(std::move(term));
  const double blocks = static_cast<double>(terms_.size());
  for (std::size_t a = 0; a < num_actions_; ++a) average_[a] = term_sum_[a] / blocks;
  counts_at_boundary_ = counts_;
  empirical_at_boundary_ = empirical;
}

Learner::Learner(std::size_t num_actions, const LearnerConfig& config)
    : num_actions_(num_actions),
      config_(config),
      oracle_(make_oracle_state(num_actions, config.oracle)),
      window_(num_actions, config.K, EstimatorConfig{config.window_m, config.tau}),
      blocks_(num_actions, config.feedback == FeedbackMode::kAvgBandit ? config.block_M : 1),
      counts_(num_actions, 0),
      estimate_(num_actions, 0.0) {
  config_.validate(num_actions);
  set_strategy(oracle_next(oracle_, config_.oracle));
}

void Learner::set_strategy(const MixedStrategy& base) {
  const double g = config_.gamma;
  const double floor = g / static_cast<double>(num_actions_);
  strategy_.resize(num_actions_);
  for (std::size_t a = 0; a < num_actions_; ++a) {
    strategy_[a] = g == 0.0 ? base[a] : (1.0 - g) * base[a] + floor;
  }
}

Proposal Learner::propose(Rng& rng) {
  Proposal p;
  if (!is_bandit(config_.feedback)) {
    p.entries.resize(num_actions_);
    for (std::size_t a = 0; a < num_actions_; ++a) p.entries[a] = a;
  } else {
    p.entries.reserve(config_.K);
    for (std::size_t k = 0; k < config_.K; ++k) p.entries.push_back(rng.categorical(strategy_));
  }
  pending_ = p;
  return p;
}

void Learner::update(const Ranking& sigma) {
  if (!pending_) throw Error("Learner::update called without a pending proposal");
  std::vector<ActionIndex> a = sigma.order;
  std::vector<ActionIndex> b = pending_->entries;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw Error("ranking is not a permutation of the last proposal");

  for (ActionIndex x : pending_->entries) ++counts_[x];
  ++t_;
  window_.push(sigma);

  switch (config_.feedback) {
    case FeedbackMode::kInstFull:
    case FeedbackMode::kInstBandit:
      estimate_ = window_.estimate();
      oracle_ = oracle_feed(std::move(oracle_), config_.oracle, estimate_);
      break;
    case FeedbackMode::kAvgFull: {
      estimate_ = window_.estimate();
      for (std::size_t x = 0; x < num_actions_; ++x) {
        oracle_.cumulative_utility[x] = static_cast<double>(t_) * estimate_[x];
      }
      oracle_.step_count = t_;
      break;
    }
    case FeedbackMode::kAvgBandit: {
      blocks_.record_proposal(pending_->entries);
      if (blocks_.at_block_boundary()) blocks_.close_block(window_.estimate());
      estimate_ = blocks_.average();
      for (std::size_t x = 0; x < num_actions_; ++x) {
        oracle_.cumulative_utility[x] = static_cast<double>(t_) * estimate_[x];
      }
      oracle_.step_count = t_;
      break;
    }
  }
  pending_.reset();
  set_strategy(oracle_next(oracle_, config_.oracle));
}

MixedStrategy run_learner_streaming(RankingEnvironment& env, const LearnerConfig& config,
                           std::size_t horizon, std::uint64_t seed,
                           const StepObserver& observer) {
  if (config.tau != env.params().tau) {
    throw Error("learner tau does not match the environment tau");
  }
  if (env.t() + horizon > env.horizon()) throw Error("environment horizon is shorter than T");
  Learner learner(env.num_actions(), config);
  Rng proposal_rng(derive_seed(seed, 1));
  Rng ranking_rng(derive_seed(seed, 2));
  for (std::size_t t = 1; t <= horizon; ++t) {
    TraceStep step;
    step.strategy = learner.strategy();
    step.proposal = learner.propose(proposal_rng);
    const std::size_t env_t = env.t() + 1;
    StepOutcome outcome = env.step(step.proposal, ranking_rng);
    learner.update(outcome.ranking);
    step.ranking = std::move(outcome.ranking);
    step.realized = outcome.realized_avg_utility;
    step.utility = env.utility(env_t);
    step.estimate = learner.last_estimate();
    double expected = 0.0;
    for (std::size_t a = 0; a < step.utility.size(); ++a) {
      expected += step.utility[a] * step.strategy[a];
    }
    step.expected = expected;
    if (observer) observer(t, step);
  }
  return learner.strategy();
}

Trace run_learner(RankingEnvironment& env, const LearnerConfig& config, std::size_t horizon,
                  std::uint64_t seed) {
  Trace trace;
  trace.num_actions = env.num_actions();
  trace.steps.reserve(horizon);
  trace.final_strategy = run_learner_streaming(
      env, config, horizon, seed,
      [&](std::size_t, const TraceStep& step) { trace.steps.push_back(step); });
  return trace;
}

}  // namespace rankfeed
