#include "rankfeed/ranking_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rankfeed {
namespace {

void check_utilities(std::span<const double> u) {
  for (double x : u) {
    if (!std::isfinite(x)) throw Error("utilities must be finite");
  }
}

void check_entries(const std::vector<ActionIndex>& entries, std::size_t num_actions) {
  if (entries.empty()) throw Error("empty proposal");
  for (ActionIndex a : entries) {
    if (a >= num_actions) throw Error("action index out of range");
  }
}

// exp((u - shift) / tau) for every entry.
std::vector<double> entry_weights(const std::vector<ActionIndex>& entries,
                                  std::span<const double> u, double tau) {
  double shift = -std::numeric_limits<double>::infinity();
  for (ActionIndex a : entries) shift = std::max(shift, u[a]);
  std::vector<double> w(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    w[k] = std::exp((u[entries[k]] - shift) / tau);
  }
  return w;
}

}  // namespace

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double ranking_probability(const Ranking& perm, std::span<const double> u,
                           const RankingParams& params) {
  params.validate();
  check_utilities(u);
  check_entries(perm.order, u.size());

  const std::size_t k = perm.size();
  // Log-domain suffix log-sum-exp keeps tiny tau stable.
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = u[perm.order[i]] / params.tau;
  double log_prob = 0.0;
  double suffix_max = -std::numeric_limits<double>::infinity();
  double suffix_sum = 0.0;  // sum of exp(x - suffix_max)
  for (std::size_t i = k; i-- > 0;) {
    if (x[i] > suffix_max) {
      suffix_sum = suffix_sum * std::exp(suffix_max - x[i]) + 1.0;
      suffix_max = x[i];
    } else {
      suffix_sum += std::exp(x[i] - suffix_max);
    }
    log_prob += x[i] - (suffix_max + std::log(suffix_sum));
  }

  std::map<ActionIndex, std::size_t> counts;
  for (ActionIndex a : perm.order) ++counts[a];
  for (const auto& [action, c] : counts) log_prob += std::lgamma(static_cast<double>(c) + 1.0);
  return std::min(1.0, std::exp(log_prob));
}

Ranking sample_ranking(std::span<const double> u, const RankingParams& params,
                       const Proposal& proposal, Rng& rng) {
  params.validate();
  check_utilities(u);
  check_entries(proposal.entries, u.size());

  std::vector<ActionIndex> remaining = proposal.entries;
  std::vector<double> weights = entry_weights(remaining, u, params.tau);
  Ranking out;
  out.order.reserve(remaining.size());
  while (remaining.size() > 1) {
    const std::size_t pick = rng.categorical(weights);
    out.order.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  out.order.push_back(remaining.front());
  return out;
}

double pairwise_marginal(double u_a, double u_b, double tau) {
  RankingParams{tau}.validate();
  return logistic((u_a - u_b) / tau);
}

double first_place_marginal(ActionIndex action, std::span<const double> u,
                            const Proposal& proposal, const RankingParams& params) {
  params.validate();
  check_utilities(u);
  check_entries(proposal.entries, u.size());
  const std::vector<double> w = entry_weights(proposal.entries, u, params.tau);
  double total = 0.0;
  double mass = 0.0;
  bool present = false;
  for (std::size_t k = 0; k < w.size(); ++k) {
    total += w[k];
    if (proposal.entries[k] == action) {
      mass += w[k];
      present = true;
    }
  }
  if (!present) throw Error("first_place_marginal: action not in proposal");
  return mass / total;
}

PairCounts pair_counts(const Ranking& perm, ActionIndex j, std::size_t num_actions) {
  if (num_actions < 2 || j >= num_actions - 1) {
    throw Error("pair_counts: j must be a non-reference action");
  }
  return all_pair_counts(perm, num_actions)[j];
}

std::vector<PairCounts> all_pair_counts(const Ranking& perm, std::size_t num_actions) {
  const ActionIndex ref = reference_action(num_actions);
  std::size_t refs_total = 0;
  for (ActionIndex a : perm.order) {
    if (a >= num_actions) throw Error("ranking references an action outside the action set");
    if (a == ref) ++refs_total;
  }
  std::vector<PairCounts> counts(num_actions);
  if (refs_total == 0) return counts;
  std::size_t refs_seen = 0;
  for (ActionIndex a : perm.order) {
    if (a == ref) {
      ++refs_seen;
    } else {
      counts[a].ahead += refs_total - refs_seen;
      counts[a].behind += refs_seen;
    }
  }
  return counts;
}

}  // namespace rankfeed
