#ifndef RANKFEED_RANKING_MODEL_HPP_
#define RANKFEED_RANKING_MODEL_HPP_

#include <span>
#include <vector>

#include "rankfeed/rng.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

// Plackett-Luce rankings over a proposed multiset: each position is filled
// with probability proportional to exp(u / tau) among the remaining entries.

// Logistic function and its inverse, evaluated without overflow.
double logistic(double x);
double logit(double p);

// Probability of observing the action sequence `perm`. Equal-action entries
// are indistinguishable, so the result is the PL product formula times
// prod_a (#a)!; summed over the distinct arrangements of a multiset it is 1.
double ranking_probability(const Ranking& perm, std::span<const double> u,
                           const RankingParams& params);

// Sequential sampler. Softmax weights are max-subtracted before exp.
Ranking sample_ranking(std::span<const double> u, const RankingParams& params,
                       const Proposal& proposal, Rng& rng);

// Expected fraction of (a, b) pairs with a ranked ahead of b, for any
// proposal containing both: logistic((u_a - u_b) / tau).
double pairwise_marginal(double u_a, double u_b, double tau);

// Probability that some copy of `action` is ranked first.
double first_place_marginal(ActionIndex action, std::span<const double> u,
                            const Proposal& proposal, const RankingParams& params);

struct PairCounts {
  std::size_t ahead = 0;   // (a^j before reference) pairs, n_{j,1}
  std::size_t behind = 0;  // (a^j after reference) pairs, n_{j,2}

  std::size_t total() const { return ahead + behind; }
  bool operator==(const PairCounts&) const = default;
};

// Pair counts of action j against the reference action num_actions-1.
PairCounts pair_counts(const Ranking& perm, ActionIndex j, std::size_t num_actions);

// Pair counts of every action against the reference, in one pass.
// The entry for the reference action itself is always zero.
std::vector<PairCounts> all_pair_counts(const Ranking& perm, std::size_t num_actions);

}  // namespace rankfeed

#endif  // RANKFEED_RANKING_MODEL_HPP_
