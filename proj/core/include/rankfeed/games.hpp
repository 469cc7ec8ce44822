#ifndef RANKFEED_GAMES_HPP_
#define RANKFEED_GAMES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankfeed/learners.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

// Joint actions are indexed row-major with player 0 most significant.
struct NormalFormGame {
  std::size_t num_players = 0;
  std::vector<std::size_t> action_sizes;
  std::vector<std::vector<double>> utilities;  // utilities[i][joint]

  std::size_t num_joint() const;
  std::vector<std::size_t> strides() const;
  std::size_t joint_index(const std::vector<ActionIndex>& actions) const;
  std::vector<ActionIndex> joint_actions(std::size_t index) const;
  void validate() const;
};

NormalFormGame random_game(const std::vector<std::size_t>& action_sizes, std::uint64_t seed);
NormalFormGame matching_pennies();

using StrategyProfile = std::vector<MixedStrategy>;

// u_i(a_i) = E_{a_-i ~ prod_{j != i} pi_j} U_i(a_i, a_-i).
UtilityVector expected_utility_vector(const NormalFormGame& game, std::size_t player,
                                      const StrategyProfile& profile);

// Empirical slice average over opponent joint actions formed slot-wise from
// the players' proposals: sample k is (proposals[j].entries[k])_{j != i}.
UtilityVector bandit_game_feedback(const NormalFormGame& game, std::size_t player,
                                   const std::vector<Proposal>& proposals);

struct JointStrategy {
  std::vector<double> probabilities;  // over joint actions
};

JointStrategy product_joint(const NormalFormGame& game, const StrategyProfile& profile);

// Running time average of product joint strategies.
class JointAverager {
 public:
  explicit JointAverager(const NormalFormGame& game);
  void add(const StrategyProfile& profile);
  JointStrategy average() const;
  std::size_t count() const { return count_; }

 private:
  const NormalFormGame* game_;
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

// Largest gain any player obtains by a fixed pure deviation from the joint
// strategy. Zero or above for product joints; a correlated joint can score
// below zero.
double cce_exploitability(const NormalFormGame& game, const JointStrategy& joint);

struct GameCheckpoint {
  std::size_t t = 0;
  double exploitability = 0.0;
  std::vector<double> external_regret;  // per player, against expected utilities
  std::vector<double> bandit_regret;    // per player; equals external in full-info modes
};

struct GameTrace {
  std::vector<GameCheckpoint> checkpoints;
  JointStrategy average_joint;
  std::vector<double> final_external_regret;
  double final_exploitability = 0.0;
  // Per-player sum_t ||u_i^(t) - u_i^(t-1)||_2 of expected utility vectors.
  std::vector<double> utility_variation;
  // sum_t sum_j ||pi_j^(t) - pi_j^(t-1)||_2.
  double strategy_variation = 0.0;
  // sqrt(max_j |A_j|) * prod_j |A_j|.
  double variation_factor = 0.0;
};

// Repeated play: every player runs its own ranking-feedback learner.
GameTrace run_game(const NormalFormGame& game, const std::vector<LearnerConfig>& configs,
                   std::size_t horizon, std::uint64_t seed);

// Text format:
//   N = 2
//   action_sizes = 2 2
//   U0 = <row-major joint utilities of player 0>
//   U1 = ...
void write_game(std::ostream& out, const NormalFormGame& game);
NormalFormGame read_game(std::istream& in);
NormalFormGame read_game_file(const std::string& path);

}  // namespace rankfeed

#endif  // RANKFEED_GAMES_HPP_
