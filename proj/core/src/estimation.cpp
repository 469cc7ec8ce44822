#include "rankfeed/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rankfeed {
namespace {

constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;

// a * b <= 2^53 without overflow.
bool product_fits(std::uint64_t a, std::uint64_t b) {
  return b == 0 || a <= kExactLimit / b;
}

void check_estimator_args(std::size_t num_actions, double tau) {
  if (num_actions < 2) throw Error("estimate: need at least two actions");
  RankingParams{tau}.validate();
}

double finish_exact(std::int64_t numerator, std::int64_t support,
                    std::uint64_t denominator, double tau) {
  if (support == 0) return 0.0;
  const double f = static_cast<double>(numerator) /
                   (static_cast<double>(denominator) * static_cast<double>(support));
  return invert_fraction(f, tau);
}

}  // namespace

void EstimatorConfig::validate() const {
  if (window_m < 1) throw Error("estimator window must be at least 1");
  RankingParams{tau}.validate();
}

double invert_fraction(double f, double tau) {
  // Fractions outside [sigma(-1/tau), sigma(1/tau)] saturate; testing the
  // ends first keeps tiny tau (where the ends underflow to 0 and 1) exact.
  if (f <= logistic(-1.0 / tau)) return -1.0;
  if (f >= logistic(1.0 / tau)) return 1.0;
  return std::clamp(tau * logit(f), -1.0, 1.0);
}

double invert_fraction_projected(double f, double tau) {
  if (f <= 0.0) return -1.0;
  if (f >= 1.0) return 1.0;
  return std::clamp(tau * logit(f), -1.0, 1.0);
}

std::uint64_t pair_denominator_lcm(std::size_t proposal_size) {
  std::uint64_t acc = 1;
  for (std::uint64_t c1 = 1; c1 < proposal_size; ++c1) {
    for (std::uint64_t c2 = 1; c1 + c2 <= proposal_size; ++c2) {
      const std::uint64_t g = std::gcd(acc, c1 * c2);
      if (!product_fits(acc / g, c1 * c2)) return 0;
      acc = (acc / g) * (c1 * c2);
    }
  }
  return acc;
}

UtilityVector estimate(std::span<const Ranking> window, std::size_t num_actions,
                       double tau) {
  check_estimator_args(num_actions, tau);
  if (window.empty()) throw Error("estimate: empty window");

  std::size_t max_size = 0;
  for (const Ranking& r : window) max_size = std::max(max_size, r.size());
  const std::uint64_t denominator = pair_denominator_lcm(max_size);
  const bool exact = denominator != 0 &&
                     product_fits(denominator, window.size());

  const ActionIndex ref = reference_action(num_actions);
  std::vector<std::int64_t> numerator(num_actions, 0);
  std::vector<double> fraction_sum(num_actions, 0.0);
  std::vector<std::int64_t> support(num_actions, 0);
  for (const Ranking& r : window) {
    const std::vector<PairCounts> counts = all_pair_counts(r, num_actions);
    for (ActionIndex j = 0; j < ref; ++j) {
      const std::size_t total = counts[j].total();
      if (total == 0) continue;
      ++support[j];
      if (exact) {
        numerator[j] += static_cast<std::int64_t>(counts[j].ahead * (denominator / total));
      } else {
        fraction_sum[j] += static_cast<double>(counts[j].ahead) / static_cast<double>(total);
      }
    }
  }

  UtilityVector out(num_actions, 0.0);
  for (ActionIndex j = 0; j < ref; ++j) {
    if (exact) {
      out[j] = finish_exact(numerator[j], support[j], denominator, tau);
    } else if (support[j] > 0) {
      out[j] = invert_fraction(fraction_sum[j] / static_cast<double>(support[j]), tau);
    }
  }
  return out;
}

UtilityVector estimate(std::span<const Ranking> window, std::size_t num_actions,
                       const EstimatorConfig& config) {
  config.validate();
  const std::size_t keep = std::min(config.window_m, window.size());
  return estimate(window.subspan(window.size() - keep), num_actions, config.tau);
}

WindowEstimator::WindowEstimator(std::size_t num_actions, std::size_t proposal_size,
                                 EstimatorConfig config)
    : num_actions_(num_actions),
      proposal_size_(proposal_size),
      config_(config),
      numerator_(num_actions, 0),
      support_(num_actions, 0) {
  check_estimator_args(num_actions, config.tau);
  config_.validate();
  if (proposal_size < 1) throw Error("WindowEstimator: proposal size must be positive");
  denominator_ = pair_denominator_lcm(proposal_size);
  exact_ = denominator_ != 0 &&
           product_fits(denominator_, config_.window_m);
}

void WindowEstimator::apply(const std::vector<Contribution>& contributions, int sign) {
  for (const Contribution& c : contributions) {
    numerator_[c.action] += sign * c.scaled_fraction;
    support_[c.action] += sign;
  }
}

void WindowEstimator::push(const Ranking& ranking) {
  if (ranking.size() == 0 || ranking.size() > proposal_size_) {
    throw Error("WindowEstimator: ranking size does not match the proposal size");
  }
  std::vector<Contribution> contributions;
  const std::vector<PairCounts> counts = all_pair_counts(ranking, num_actions_);
  if (exact_) {
    for (ActionIndex j = 0; j + 1 < num_actions_; ++j) {
      const std::size_t total = counts[j].total();
      if (total == 0) continue;
      contributions.push_back(
          {j, static_cast<std::int64_t>(counts[j].ahead * (denominator_ / total))});
    }
  }
  if (window_.size() == config_.window_m) {
    apply(contributions_.front(), -1);
    contributions_.pop_front();
    window_.pop_front();
  }
  apply(contributions, +1);
  contributions_.push_back(std::move(contributions));
  window_.push_back(ranking);
}

UtilityVector WindowEstimator::estimate() const {
  if (window_.empty()) throw Error("estimate: empty window");
  if (!exact_) {
    const std::vector<Ranking> copy(window_.begin(), window_.end());
    return rankfeed::estimate(copy, num_actions_, config_.tau);
  }
  UtilityVector out(num_actions_, 0.0);
  for (ActionIndex j = 0; j + 1 < num_actions_; ++j) {
    out[j] = finish_exact(numerator_[j], support_[j], denominator_, config_.tau);
  }
  return out;
}

EstimationBound estimation_error_bound(const EstimationBoundInputs& in) {
  if (!(in.p > 0.0 && in.p <= 1.0)) throw Error("bound: p must lie in (0, 1]");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw Error("bound: delta must lie in (0, 1)");
  if (!(in.m_prime >= 1.0)) throw Error("bound: window length must be at least 1");
  if (!(in.window_variation >= 0.0)) throw Error("bound: variation must be nonnegative");
  RankingParams{in.tau}.validate();

  EstimationBound out;
  out.applicable = in.m_prime * std::pow(in.p, 4) >= 2.0 * std::log(2.0 / in.delta);
  const double inv_tau = 1.0 / in.tau;
  const double softplus = inv_tau + std::log1p(std::exp(-inv_tau));  // log(e^{1/tau} + 1)
  const double log_term =
      std::log(in.tau) + 2.0 * softplus - std::log(in.p) +
      0.5 * (std::log(std::log(4.0 * static_cast<double>(in.num_actions) / in.delta)) -
             std::log(in.m_prime));
  out.value = std::exp(log_term) + in.window_variation;
  return out;
}

}  // namespace rankfeed
