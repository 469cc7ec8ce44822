#ifndef RANKFEED_TYPES_HPP_
#define RANKFEED_TYPES_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankfeed {

// Every failed precondition in the library surfaces as this exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ActionIndex = std::size_t;

// Per-action utilities. Environment vectors live in [-1, 1]^A with the last
// (reference) action pinned at zero.
using UtilityVector = std::vector<double>;
using UtilitySequence = std::vector<UtilityVector>;

// A point on the probability simplex over the action set.
using MixedStrategy = std::vector<double>;

// Actions are 0..size-1; the last index is the zero-utility reference action.
struct ActionSet {
  std::size_t size = 2;

  explicit ActionSet(std::size_t n) : size(n) {
    if (n < 2) throw Error("action set needs at least two actions");
  }
  ActionIndex reference() const { return size - 1; }
};

inline ActionIndex reference_action(std::size_t num_actions) {
  return num_actions - 1;
}

// Multiset of proposed actions; repeats allowed.
struct Proposal {
  std::vector<ActionIndex> entries;

  std::size_t size() const { return entries.size(); }
  bool operator==(const Proposal&) const = default;
};

// A permutation of a proposal: order[0] is ranked first.
struct Ranking {
  std::vector<ActionIndex> order;

  std::size_t size() const { return order.size(); }
  bool operator==(const Ranking&) const = default;
};

struct RankingParams {
  double tau = 1.0;

  void validate() const;
};

// Per-action occurrence counts of a multiset.
std::vector<std::size_t> multiplicities(const std::vector<ActionIndex>& entries,
                                        std::size_t num_actions);

void check_simplex(const MixedStrategy& pi, double tolerance = 1e-9);

}  // namespace rankfeed

#endif  // RANKFEED_TYPES_HPP_
