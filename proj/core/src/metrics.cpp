#include "rankfeed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rankfeed {
namespace {

double max_entry(const std::vector<double>& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : v) best = std::max(best, x);
  return best;
}

double proposal_average(std::span<const double> u, const Proposal& proposal) {
  if (proposal.entries.empty()) throw Error("empty proposal");
  double total = 0.0;
  for (ActionIndex a : proposal.entries) {
    if (a >= u.size()) throw Error("proposal references an action outside the action set");
    total += u[a];
  }
  return total / static_cast<double>(proposal.entries.size());
}

}  // namespace

double norm(std::span<const double> v, Norm kind) {
  double acc = 0.0;
  for (double x : v) {
    if (kind == Norm::kL2) {
      acc += x * x;
    } else {
      acc = std::max(acc, std::abs(x));
    }
  }
  return kind == Norm::kL2 ? std::sqrt(acc) : acc;
}

double distance(std::span<const double> a, std::span<const double> b, Norm kind) {
  if (a.size() != b.size()) throw Error("distance: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm(d, kind);
}

double external_regret(const UtilitySequence& utilities,
                       std::span<const MixedStrategy> strategies) {
  if (utilities.size() != strategies.size()) throw Error("external_regret: length mismatch");
  if (utilities.empty()) return 0.0;
  RegretAccumulator acc(utilities.front().size());
  for (std::size_t t = 0; t < utilities.size(); ++t) acc.add(utilities[t], strategies[t]);
  return acc.external();
}

double bandit_regret(const UtilitySequence& utilities, std::span<const Proposal> proposals) {
  if (utilities.size() != proposals.size()) throw Error("bandit_regret: length mismatch");
  if (utilities.empty()) return 0.0;
  RegretAccumulator acc(utilities.front().size());
  for (std::size_t t = 0; t < utilities.size(); ++t) acc.add_proposal(utilities[t], proposals[t]);
  return acc.bandit();
}

double variation(const UtilitySequence& utilities, Norm kind) {
  double total = 0.0;
  for (std::size_t t = 1; t < utilities.size(); ++t) {
    total += distance(utilities[t], utilities[t - 1], kind);
  }
  return total;
}

double estimation_regret_gap_bound(const UtilitySequence& truth,
                                   const UtilitySequence& estimates) {
  if (truth.size() != estimates.size()) throw Error("gap bound: length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    total += distance(truth[t], estimates[t], Norm::kLinf);
  }
  return 2.0 * total;
}

RegretAccumulator::RegretAccumulator(std::size_t num_actions)
    : cumulative_(num_actions, 0.0) {}

void RegretAccumulator::accumulate(std::span<const double> u) {
  if (u.size() != cumulative_.size()) throw Error("RegretAccumulator: length mismatch");
  for (std::size_t a = 0; a < u.size(); ++a) cumulative_[a] += u[a];
  ++steps_;
}

void RegretAccumulator::add(std::span<const double> u, std::span<const double> strategy) {
  if (strategy.size() != cumulative_.size()) throw Error("RegretAccumulator: length mismatch");
  accumulate(u);
  double inner = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) inner += u[a] * strategy[a];
  expected_ += inner;
}

void RegretAccumulator::add(std::span<const double> u, std::span<const double> strategy,
                            const Proposal& proposal) {
  realized_ += proposal_average(u, proposal);
  add(u, strategy);
}

void RegretAccumulator::add_proposal(std::span<const double> u, const Proposal& proposal) {
  realized_ += proposal_average(u, proposal);
  accumulate(u);
}

double RegretAccumulator::external() const {
  if (steps_ == 0) return 0.0;
  return max_entry(cumulative_) - expected_;
}

double RegretAccumulator::bandit() const {
  if (steps_ == 0) return 0.0;
  return max_entry(cumulative_) - realized_;
}

std::vector<std::size_t> checkpoint_schedule(std::size_t horizon) {
  std::set<std::size_t> points;
  if (horizon == 0) return {};
  for (std::size_t d = 1; ; d *= 2) {
    points.insert((horizon + d - 1) / d);
    if (d >= horizon) break;
  }
  for (std::size_t j = 1; j <= 100; ++j) {
    points.insert(std::max<std::size_t>(1, (j * horizon + 99) / 100));
  }
  return {points.begin(), points.end()};
}

}  // namespace rankfeed
