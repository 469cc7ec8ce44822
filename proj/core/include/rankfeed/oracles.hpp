#ifndef RANKFEED_ORACLES_HPP_
#define RANKFEED_ORACLES_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "rankfeed/types.hpp"

namespace rankfeed {

// Full-information no-regret oracles with numeric feedback.
//   ftrl_entropy / hedge : softmax(lambda * cumulative utility)
//   ftrl_l2              : Euclidean projection of lambda * cumulative onto the simplex
//   pgd                  : projected gradient ascent on a maintained iterate
enum class OracleKind { kFtrlEntropy, kFtrlL2, kHedge, kPgd };

std::string to_string(OracleKind kind);
OracleKind parse_oracle_kind(const std::string& name);

struct OracleConfig {
  OracleKind kind = OracleKind::kHedge;
  double lambda = 1.0;
  double declared_L = 1.0;    // ||Alg(U) - Alg(U')|| <= L ||sum U - sum U'||
  double declared_eta = 1.0;  // per-step drift bound
  std::optional<std::pair<double, double>> stability_exponents;  // (c, w)

  // Stability constants of FTRL with a 1-strongly convex regularizer:
  // L = lambda, eta = lambda * sqrt(|A|). PGD gets the same drift bound.
  static OracleConfig make(OracleKind kind, double lambda, std::size_t num_actions);

  // True when the strategy depends on history only through its cumulative sum.
  bool cumulative() const { return kind != OracleKind::kPgd; }
  void validate() const;
};

struct OracleState {
  UtilityVector cumulative_utility;
  std::size_t step_count = 0;
  MixedStrategy iterate;  // pgd only
};

OracleState make_oracle_state(std::size_t num_actions, const OracleConfig& config);

MixedStrategy oracle_next(const OracleState& state, const OracleConfig& config);
OracleState oracle_feed(OracleState state, const OracleConfig& config,
                        std::span<const double> u);

// Regret of the oracle run on `utilities`: max_a sum_t u^t(a) minus the
// utility of the strategies it plays before seeing each vector.
double oracle_regret(const UtilitySequence& utilities, const OracleConfig& config);

// Euclidean projection onto the probability simplex (sort-based, exact).
MixedStrategy project_to_simplex(std::span<const double> v);

// softmax(scale * v), max-subtracted.
MixedStrategy softmax(std::span<const double> v, double scale = 1.0);

}  // namespace rankfeed

#endif  // RANKFEED_ORACLES_HPP_
