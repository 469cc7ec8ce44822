#include "rankfeed/types.hpp"

#include <cmath>

namespace rankfeed {

void RankingParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error("temperature tau must be positive and finite");
  }
}

std::vector<std::size_t> multiplicities(const std::vector<ActionIndex>& entries,
                                        std::size_t num_actions) {
  std::vector<std::size_t> counts(num_actions, 0);
  for (ActionIndex a : entries) {
    if (a >= num_actions) throw Error("action index out of range");
    ++counts[a];
  }
  return counts;
}

void check_simplex(const MixedStrategy& pi, double tolerance) {
  double total = 0.0;
  for (double p : pi) {
    if (!(p >= -tolerance)) throw Error("strategy has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > tolerance) throw Error("strategy does not sum to one");
}

}  // namespace rankfeed
