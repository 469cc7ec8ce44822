#ifndef RANKFEED_ESTIMATION_HPP_
#define RANKFEED_ESTIMATION_HPP_

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "rankfeed/ranking_model.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

struct EstimatorConfig {
  std::size_t window_m = 1;
  double tau = 1.0;

  void validate() const;
};

// Pairwise-decomposition utility estimator. Each ranking contributes, for
// every action j that co-occurs with the reference, the fraction of
// (j, reference) pairs with j ranked ahead. Coordinate j is tau times the
// logit of the mean fraction, clamped into [-1, 1]; actions that never
// co-occur with the reference estimate to 0, as does the reference itself.
UtilityVector estimate(std::span<const Ranking> window, std::size_t num_actions,
                       double tau);

// Uses the most recent min(window_m, window.size()) rankings.
UtilityVector estimate(std::span<const Ranking> window, std::size_t num_actions,
                       const EstimatorConfig& config);

// tau * logit(f) after clamping f into [logistic(-1/tau), logistic(1/tau)].
double invert_fraction(double f, double tau);
// tau * logit(f) projected onto [-1, 1]; accepts f in {0, 1}.
double invert_fraction_projected(double f, double tau);

// Common denominator for pair fractions n1 / (n1 + n2) when each ranking has
// at most `proposal_size` entries: lcm of c1 * c2 over c1 + c2 <= K.
// Returns 0 when the lcm exceeds 2^53.
std::uint64_t pair_denominator_lcm(std::size_t proposal_size);

// Sliding window over the last window_m rankings with O(K) updates.
// estimate() is bitwise identical to the free estimate() over the same window.
class WindowEstimator {
 public:
  WindowEstimator(std::size_t num_actions, std::size_t proposal_size,
                  EstimatorConfig config);

  void push(const Ranking& ranking);
  UtilityVector estimate() const;

  std::size_t size() const { return window_.size(); }
  bool exact() const { return exact_; }
  const std::deque<Ranking>& window() const { return window_; }

 private:
  struct Contribution {
    ActionIndex action;
    std::int64_t scaled_fraction;  // n1 * (D / (n1 + n2))
  };

  void apply(const std::vector<Contribution>& contributions, int sign);

  std::size_t num_actions_;
  std::size_t proposal_size_;
  EstimatorConfig config_;
  std::uint64_t denominator_ = 0;
  bool exact_ = false;
  std::deque<Ranking> window_;
  std::deque<std::vector<Contribution>> contributions_;
  std::vector<std::int64_t> numerator_;
  std::vector<std::int64_t> support_;  // |T_j|
};

struct EstimationBoundInputs {
  double tau = 1.0;
  double p = 1.0;               // per-step proposal probability lower bound
  double m_prime = 1.0;         // window length
  double delta = 0.05;          // failure probability
  double window_variation = 0;  // sum of sup-norm steps inside the window
  std::size_t num_actions = 2;
};

struct EstimationBound {
  bool applicable = false;  // m' p^4 >= 2 log(2 / delta)
  double value = 0.0;       // +inf when the exponential term overflows
};

// (tau (e^{1/tau} + 1)^2 / p) sqrt(log(4|A| / delta) / m') + window_variation.
EstimationBound estimation_error_bound(const EstimationBoundInputs& inputs);

}  // namespace rankfeed

#endif  // RANKFEED_ESTIMATION_HPP_
