#ifndef RANKFEED_METRICS_HPP_
#define RANKFEED_METRICS_HPP_

#include <span>
#include <vector>

#include "rankfeed/types.hpp"

namespace rankfeed {

enum class Norm { kL2, kLinf };

double norm(std::span<const double> v, Norm kind = Norm::kL2);
double distance(std::span<const double> a, std::span<const double> b,
                Norm kind = Norm::kL2);

// max_a sum_t u^t(a) - sum_t <u^t, pi^t>. The simplex max sits at a vertex.
double external_regret(const UtilitySequence& utilities,
                       std::span<const MixedStrategy> strategies);

// max_a sum_t u^t(a) - sum_t (1/K) sum_{a in o^t} u^t(a).
double bandit_regret(const UtilitySequence& utilities, std::span<const Proposal> proposals);

// Path length sum_{t>=2} ||u^t - u^{t-1}||; 0 for a single vector.
double variation(const UtilitySequence& utilities, Norm kind = Norm::kL2);

// Hoelder bound on |R(u) - R(u~)| for a common strategy sequence:
// sum_t ||u^t - u~^t||_inf * max_pi ||pi - pi^t||_1 <= 2 sum_t ||u^t - u~^t||_inf.
double estimation_regret_gap_bound(const UtilitySequence& truth,
                                   const UtilitySequence& estimates);

// Running prefix sums for regret curves.
class RegretAccumulator {
 public:
  explicit RegretAccumulator(std::size_t num_actions);

  // Records u^t against the played strategy.
  void add(std::span<const double> u, std::span<const double> strategy);
  // Records u^t against both the strategy and the proposal sampled from it.
  void add(std::span<const double> u, std::span<const double> strategy,
           const Proposal& proposal);
  // Bandit evaluation only; external() is meaningless after this.
  void add_proposal(std::span<const double> u, const Proposal& proposal);

  double external() const;
  double bandit() const;
  std::size_t steps() const { return steps_; }
  const std::vector<double>& cumulative_utility() const { return cumulative_; }
  double learner_expected() const { return expected_; }
  double learner_realized() const { return realized_; }

 private:
  std::vector<double> cumulative_;
  double expected_ = 0.0;
  double realized_ = 0.0;
  std::size_t steps_ = 0;

  void accumulate(std::span<const double> u);
};

// Geometric checkpoints {ceil(T / 2^k)} merged with every 1% of T, ascending.
std::vector<std::size_t> checkpoint_schedule(std::size_t horizon);

}  // namespace rankfeed

#endif  // RANKFEED_METRICS_HPP_
