#ifndef RANKFEED_ENVIRONMENTS_HPP_
#define RANKFEED_ENVIRONMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankfeed/ranking_model.hpp"
#include "rankfeed/rng.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

// Which utility vector the PL ranking is drawn from at step t.
enum class RankingBasis {
  kInstantaneous,  // u^t
  kTimeAverage,    // (1/t) sum_{s<=t} u^s
  kEmpiricalMean,  // per-action mean over the steps where it was proposed
};

std::string to_string(RankingBasis basis);
RankingBasis parse_ranking_basis(const std::string& name);

// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Maintains the ranking basis r^t from the utility stream (and proposals).
class BasisTracker {
 public:
  BasisTracker(std::size_t num_actions, RankingBasis basis);

  // Advances one step with u^t and the proposal o^t; returns r^t.
  const UtilityVector& advance(std::span<const double> u,
                               const std::vector<ActionIndex>& proposal);

  const UtilityVector& current() const { return basis_vector_; }
  RankingBasis basis() const { return basis_; }
  std::size_t steps() const { return steps_; }
  const std::vector<std::size_t>& counts() const { return counts_; }

 private:
  std::size_t num_actions_;
  RankingBasis basis_;
  std::size_t steps_ = 0;
  std::vector<CompensatedSum> sums_;
  std::vector<std::size_t> counts_;
  UtilityVector basis_vector_;
};

struct StepOutcome {
  Ranking ranking;
  double realized_avg_utility = 0.0;  // (1/K) sum_{a in o^t} u^t(a)
};

// Replays a utility sequence and answers proposals with PL rankings.
class RankingEnvironment {
 public:
  RankingEnvironment(UtilitySequence sequence, RankingParams params, RankingBasis basis);

  StepOutcome step(const Proposal& proposal, Rng& rng);

  std::size_t horizon() const { return sequence_.size(); }
  std::size_t t() const { return t_; }
  std::size_t num_actions() const { return num_actions_; }
  const RankingParams& params() const { return params_; }
  RankingBasis basis() const { return tracker_.basis(); }
  // u^t for 1-based t.
  const UtilityVector& utility(std::size_t t) const { return sequence_.at(t - 1); }
  const UtilitySequence& sequence() const { return sequence_; }
  // r^t used for the most recent ranking.
  const UtilityVector& last_basis() const { return tracker_.current(); }

 private:
  UtilitySequence sequence_;
  RankingParams params_;
  std::size_t num_actions_ = 0;
  std::size_t t_ = 0;
  BasisTracker tracker_;
};

// Checks shape and the [-1, 1] box; with `require_reference_zero` also the
// zero reference coordinate.
void validate_sequence(const UtilitySequence& sequence, bool require_reference_zero = true);

// Subtracts u^t(reference) from every coordinate at each step.
UtilitySequence shift_to_reference_zero(const UtilitySequence& sequence);

UtilitySequence gen_stationary(const UtilityVector& u, std::size_t horizon);

struct BoundedVariationSequence {
  UtilitySequence sequence;
  double budget = 0.0;              // C * T^q
  std::vector<double> allocation;   // allocated step norms for t = 2..T
  double realized_variation = 0.0;  // sum ||u^t - u^{t-1}||_2
};

// Random walk in the box with total L2 path length C * T^q: the budget is
// split by a flat Dirichlet draw, each step takes a uniformly random
// direction and bisects the step length so that the clipped move has the
// allocated norm (or the largest achievable one).
BoundedVariationSequence gen_bounded_variation(std::size_t horizon, double q,
                                               std::uint64_t seed, std::size_t num_actions,
                                               double scale = 1.0);

enum class NoiseKind { kUniform, kGaussian, kGamma };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

// One zero-mean shift: Uniform(-s, s), Normal(0, s^2), or Gamma(1/s^2, s^2) - 1.
double sample_shift(NoiseKind kind, double sigma, Rng& rng);

struct NoiseShiftSequence {
  UtilityVector base;
  UtilitySequence sequence;
};

// u^t = clip(base + xi^t), base uniform in [-1, 1]^{A-1} x {0}.
NoiseShiftSequence gen_noise_shift(std::size_t horizon, std::uint64_t seed, NoiseKind kind,
                                   double sigma, std::size_t num_actions);

// Two-action indistinguishable instances at tau = 0.1.
inline constexpr double kTheorem1Tau = 0.1;
double theorem1_mixture_probability();
UtilitySequence gen_theorem1_instance(int which, std::size_t horizon, std::uint64_t seed);

// Doubling sequences for the deterministic-ranking lower bound.
struct DoublingConstruction {
  UtilityVector initial{0.5, 0.0};
  std::size_t K = 0;  // smallest K with 2^K >= T
  std::vector<UtilitySequence> action_a;
  std::vector<UtilitySequence> action_b;
};

DoublingConstruction gen_theorem2_sequences(std::size_t horizon);

// Index of the first sequence whose average utility is below
// 0.5 - 1 / (2 (K + 1)), given the learner's average utility on each.
std::optional<std::size_t> select_hard_sequence(std::span<const double> average_utilities,
                                                std::size_t K);

// Three phases of lengths T, T, 2T; instances differ only in the last phase.
UtilitySequence gen_theorem3_instance(int which, std::size_t horizon);

// Columnar text: header `t,u_0,...,u_{A-1}`, one row per step, 17 significant digits.
void write_sequence_csv(std::ostream& out, const UtilitySequence& sequence);
UtilitySequence read_sequence_csv(std::istream& in);
void write_sequence_file(const std::string& path, const UtilitySequence& sequence);
UtilitySequence read_sequence_file(const std::string& path);

}  // namespace rankfeed

#endif  // RANKFEED_ENVIRONMENTS_HPP_
